//! Tensor eigenvectors as nonlinear normal modes of homogeneous potentials.
//!
//! Eigenvectors `v` of a symmetric tensor, `grad P(v) = lambda v`, are the
//! critical points of the associated homogeneous polynomial `P` on the unit
//! sphere and span invariant lines of the dynamics `x'' = -grad P(x)`.
//!
//! * [`symtensor`]: sparse homogeneous polynomials and their symmetric tensor view.
//! * [`spectra`]: multistart computation and classification of real eigenpairs,
//!   plus the counting checks (eigenspace bound, parity, index sum).
//! * [`dynamics`]: integration of the second-order system and the reduced
//!   scalar mode equation.
//! * [`casestudy`]: the two planar quartic families with closed-form modes.
//! * [`cli`]: the command layer behind the `tensor-modes` binary.

// `!(x > y)` guards also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod casestudy;
pub mod cli;
pub mod dynamics;
pub mod error;
pub mod spectra;
pub mod symtensor;

pub use error::{Error, Result};
pub use symtensor::{HomogeneousPolynomial, Monomial, SymmetricTensor};
