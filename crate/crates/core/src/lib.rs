//! facelab — a desk-scale numerical laboratory for operator systems on
//! rotationally invariant reproducing kernel spaces.
//!
//! The crate builds everything from the kernel coefficient sequence up:
//!
//! * [`series`] — kernel coefficients `a_n`, their inversion to the
//!   coefficients `b_n` of `1 - 1/Σ a_n zⁿ`, positivity reports, kernel
//!   evaluation with certified tail bounds.
//! * [`rkhs`] — exact graded truncations of multiplication operators,
//!   kernel vectors, the point states (`phi`, `psi`, `delta`, `omega`)
//!   and the operator identities connecting them.
//! * [`face`] — faces of density-matrix feasibility sets: support
//!   reduction, affine dimension, and functional ranges.
//! * [`finite`] — finite-dimensional worked examples: a 4×4 operator
//!   system with its numerical range and extension face, and row-tuple
//!   checks on truncated Fock space.
//! * [`io`] — the JSON/config wire formats shared with the CLI.
//!
//! All operations are pure functions of immutable inputs; randomized
//! checks take explicit seeds so runs are reproducible.

pub mod error;
pub mod face;
pub mod finite;
pub mod io;
pub mod linalg;
pub mod poly;
pub mod rkhs;
pub mod series;
pub mod tol;

pub use error::{Error, Result};
