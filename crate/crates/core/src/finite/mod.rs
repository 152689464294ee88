//! Finite groups with an endomorphism. Every compact open subgroup is just a
//! subgroup, so each definition is decided by enumeration; this backend is the
//! ground truth the other two are compared against.

mod endo;
mod group;
mod instance;

pub use endo::{all_endomorphisms, FiniteEndo};
pub use group::{build_group, catalog, ElementSet, FiniteGroup, FiniteSubgroup, GroupSpec, DEFAULT_BOUND};
pub use instance::{FiniteDecomposition, FiniteInstance, Trajectory};
