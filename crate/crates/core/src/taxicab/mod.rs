//! Taxicab correspondence analysis.
//!
//! One axis of a double-centered matrix `X` is the solution of
//! `δ = max ‖Xu‖₁ = max v'Xu` over sign vectors `u`, `v`, characterized by
//! the transition formulas `v = sign(Xu)`, `u = sign(X'v)`. Because `X` is
//! double-centered, the four blocks cut out by the sign vectors have equal
//! absolute sums, each `δ/4`, which is the cut norm of `X`.
//!
//! [`tca`] repeats the search on Wedderburn-deflated residuals until the
//! residual is exhausted and converts the projections into factor scores.

mod decomposition;
mod norm;
mod seriation;

use alloc::vec::Vec;

use crate::sign::SignVector;

pub use decomposition::{
    deflate, rc_axis, seriate, tca, AxisContributions, TcaAxis, TcaDecomposition, TcaOptions,
    HEAVYWEIGHT_TOLERANCE, STOP_REL,
};
pub use norm::{
    alternating_run, norm, norm_exact, norm_heuristic, AlternatingRun, SolverMode,
    EXHAUSTIVE_MAX_SIDE,
};
pub use seriation::{cut_norm_matrix, SeriationReport};

/// One taxicab principal axis of a residual matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct TaxicabAxis {
    /// `δ = ‖a‖₁ = ‖b‖₁ = v'Xu`
    pub delta: f64,
    /// Column axis, length `m`.
    pub u: SignVector,
    /// Row axis, length `n`.
    pub v: SignVector,
    /// Row projections `Xu`.
    pub a: Vec<f64>,
    /// Column projections `X'v`.
    pub b: Vec<f64>,
    /// Found by exhaustive enumeration rather than alternating search.
    pub exact: bool,
    /// Rows whose projection is zero, so `v` there is `+1` by convention only.
    pub indeterminate_rows: Vec<usize>,
    /// Columns whose projection is zero, so `u` there is `+1` by convention only.
    pub indeterminate_cols: Vec<usize>,
}

impl TaxicabAxis {
    /// Cut norm certified by this axis, `δ/4`.
    pub fn cut_norm(&self) -> f64 {
        self.delta / 4.0
    }
}
