//! `G = ℚₚⁿ` with `α` a rational matrix. Compact open subgroups are full-rank
//! `ℤₚ`-lattices, the scale is `p` to the total negative root valuation of the
//! characteristic polynomial, and the contraction/Levi decomposition is the
//! splitting of `ℚₚⁿ` by root valuation.

pub mod arith;
pub mod hensel;
pub mod instance;
pub mod lattice;
pub mod matrix;
pub mod newton;
pub mod poly;
pub mod split;

pub use instance::{PadicDecomposition, PadicInstance, PadicTidying};
pub use lattice::Lattice;
pub use matrix::QMat;
pub use split::{Block, SlopeSplit};
