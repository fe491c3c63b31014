//! Symbolic vertex-algebra engine for the subregular W-algebra of sl(n+1).
//!
//! The subregular W-algebra of `sl_{n+1}` is built inside the tensor product of
//! the regular W-algebra (realised by Miura fields in a rank-`n` Heisenberg
//! algebra) with the half-lattice vertex algebra Π. All coefficients are exact
//! rational functions of the level `k`.

pub mod fock;
pub mod golden;
pub mod ope;
pub mod par;
pub mod qseries;
pub mod report;
pub mod scalar;
pub mod subreg;
pub mod walgebra;

pub use fock::{Basis, FieldExpr, Momentum, Monomial};
pub use ope::Engine;
pub use scalar::{Rat, Scalar, ScalarError, Symbols};
