//! Cohomology of finite graded posets with presheaf coefficients.
//!
//! Two complexes compute it: the nerve complex of chains (`singular`) and
//! the cellular complex built from the groups `A_x` of maximal chains
//! (`cellular`). On cellular posets they agree; [`cellular::compare`]
//! reports both along with the cellularity verdict.

pub mod abelian;
pub mod builders;
pub mod cellular;
pub mod complex;
pub mod error;
pub mod poset;
pub mod presheaf;
pub mod singular;

pub use abelian::{AbelianInvariants, FpAbGroup, GroupMorphism, IntMatrix};
pub use complex::{CochainComplex, CohomologyReport, Method};
pub use error::{Error, Result};
pub use poset::{Interval, Poset, PosetJson};
pub use presheaf::{Presheaf, PresheafJson, PresheafMorphism};
