//! Constructors for the standard example families.

pub mod bruhat;
pub mod khovanov;
pub mod lattices;
pub mod simplicial;
pub mod tree;

pub use bruhat::BruhatPoset;
pub use khovanov::{khovanov, suspension_simplex_poset, ApexMode, LinkDiagram};
pub use lattices::{boolean_lattice, is_atomic, is_semimodular, partition_lattice, remove_top};
pub use simplicial::{
    boundary_simplex_poset, circle_poset, face_poset, rp2_complex, rp2_poset, square_poset,
    SimplicialComplexInput,
};
pub use tree::tree_poset;
