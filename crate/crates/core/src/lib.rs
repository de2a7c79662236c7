//! Mean absolute deviations, cut norms and taxicab correspondence analysis.
//!
//! The crate is `no_std` and only needs `alloc`. It covers:
//!
//! - [`dispersion`]: `d`, `s²` and LAD with their gain-function maximizers,
//!   the cut norm of a centered vector and relative contributions.
//! - [`residual`]: correspondence matrices, multiplicative and additive
//!   double-centering, additive triple-centering.
//! - [`taxicab`]: the `ℓ∞→ℓ1` matrix norm (exhaustive and alternating),
//!   cut-norm certificates, Wedderburn deflation and the full taxicab
//!   decomposition with factor scores and contributions.
//! - [`ca`]: classical correspondence analysis on a one-sided Jacobi SVD.
//! - [`tensor`]: the `(∞,∞)→1` norm of triple-centered arrays with its
//!   octant certificate.
//! - [`cluster`]: the `f_p` overall-interaction objective for two-mode
//!   partitions and its maximization.
//!
//! Every routine is a pure function of its inputs.

#![no_std]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod ca;
pub mod cluster;
pub mod dispersion;
mod error;
pub mod matrix;
pub mod residual;
pub mod sign;
pub mod taxicab;
pub mod tensor;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use sign::SignVector;
