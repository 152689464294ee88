//! Scale, tidy subgroups and the contraction/Levi decomposition of an
//! endomorphism α of a totally disconnected, locally compact group, computed
//! exactly on three families:
//!
//! * [`finite`]: finite groups, where everything is decided by enumeration;
//! * [`padic`]: `ℚₚⁿ` with a rational matrix, where compact open subgroups are
//!   lattices and the scale is read off a Newton polygon;
//! * [`shift`]: full shifts `Fᴺ` and `Fᶻ` over a finite group `F`.
//!
//! The backend-independent recursions (displacement index, `U₋`/`U₊` stages,
//! tidiness by minimality) live in [`dynamics`]. [`instance`] wraps the three
//! backends behind one enum, and [`theorems`] checks the structure theorems on
//! generated instances.

pub mod cli;
pub mod decomposition;
pub mod dynamics;
pub mod error;
pub mod finite;
pub mod instance;
pub mod padic;
pub mod shift;
pub mod theorems;

pub use dynamics::{Backend, Index, Method, ScaleResult, StageRecord, StageTrace, TidyVerdict};
pub use error::{Error, Result};
