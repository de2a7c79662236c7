use thiserror::Error;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("empty sample")]
    EmptySample,
    #[error("empty matrix")]
    EmptyMatrix,
    #[error("non-finite value at position {0}")]
    NonFinite(usize),
    #[error("not centered: entries sum to {sum:e}")]
    NotCentered { sum: f64 },
    #[error("not double-centered: largest row/column sum is {max_margin:e}")]
    NotDoubleCentered { max_margin: f64 },
    #[error("not triple-centered: largest fiber sum is {max_fiber:e}")]
    NotTripleCentered { max_fiber: f64 },
    #[error("negative count {value} at row {row}, column {col}")]
    NegativeCount { row: usize, col: usize, value: f64 },
    #[error("zero total")]
    ZeroTotal,
    #[error("row {0} is all zero")]
    ZeroRow(usize),
    #[error("column {0} is all zero")]
    ZeroColumn(usize),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("search space of 2^{bits} sign vectors exceeds the exhaustive budget of 2^{budget}; use {hint}")]
    OverBudget {
        bits: usize,
        budget: usize,
        hint: &'static str,
    },
    #[error("cannot deflate null axis")]
    NullAxis,
    #[error("axis {index} out of range ({available} axes)")]
    AxisOutOfRange { index: usize, available: usize },
    #[error("SVD did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(&'static str),
    #[error("invalid parameter: {0}")]
    InvalidParameter(&'static str),
}

impl Error {
    /// True for errors raised because an exhaustive search would be too large.
    pub fn is_budget(&self) -> bool {
        matches!(self, Error::OverBudget { .. })
    }
}
