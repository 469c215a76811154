//! Exact integer linear algebra and finitely presented abelian groups.

mod group;
mod matrix;
mod normal_form;
mod sparse;

pub use group::{
    subquotient_homology, AbelianInvariants, FpAbGroup, GroupMorphism, SmithPresentation,
};
pub use matrix::IntMatrix;
pub use normal_form::{hnf, hnf_rank, kernel_lattice, smith, snf, Lattice, SmithDecomposition};
pub use sparse::invariant_factors;
