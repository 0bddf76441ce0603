use thiserror::Error;

use crate::sdp::SolveReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("invalid weights: {0}")]
    InvalidWeights(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix contains non-finite entries")]
    NonFinite,

    /// `witness` satisfies `vᵀMv < 0` (up to rounding).
    #[error("matrix is not positive semidefinite (vᵀMv = {value:e})")]
    NotPsd { witness: Vec<f64>, value: f64 },

    #[error("instance too large for exact oracle: n = {n}, limit = {limit}")]
    TooLarge { n: usize, limit: usize },

    #[error("weight vector is zero")]
    ZeroWeights,

    #[error("point is not in the cone interior: {0}")]
    NotInterior(String),

    #[error("iteration limit reached after {} iterations (gap {:e})", .0.iterations, .0.final_gap)]
    MaxIterations(Box<SolveReport>),

    #[error("numerical breakdown: {reason}")]
    NumericalBreakdown {
        reason: String,
        best: Option<Box<SolveReport>>,
    },

    #[error("vertex map is not a vector {t}-coloring: edge ({i}, {j}) has (t-1)<f(i),f(j)> = {value}")]
    InvalidColoring {
        t: f64,
        i: usize,
        j: usize,
        value: f64,
    },

    #[error("LP solver failure: {0}")]
    Lp(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
