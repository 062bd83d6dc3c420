use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("log-likelihood evaluation failed at {point:?}: {reason}")]
    Evaluation { point: Vec<f64>, reason: String },

    #[error("point {point:?} is outside the domain (needs margin {margin:e})")]
    OutOfDomain { point: Vec<f64>, margin: f64 },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("inconsistent maximizers: likelihood ratio statistic {lambda:e} is negative")]
    InconsistentMaximizers { lambda: f64 },

    #[error("observed information is singular or not positive definite")]
    SingularInformation,

    #[error("score variability matrix is singular")]
    SingularVariability,

    #[error("confidence interval inversion failed: {0}")]
    IntervalFailure(String),

    #[error("posterior is degenerate: every grid density underflowed")]
    DegeneratePosterior,

    #[error("posterior grids do not match")]
    GridMismatch,

    #[error("Laplace mode search failed for y={y}, m={m}, theta={theta}")]
    ModeFailure { y: u32, m: u32, theta: f64 },

    #[error("lattice {rows}x{cols} exceeds the {method} size cap")]
    SizeCap {
        rows: usize,
        cols: usize,
        method: &'static str,
    },

    #[error("parameter outside its valid domain: {0}")]
    Domain(String),

    #[error("proxy level K={k_proxy} must exceed approximation level k={k}")]
    InvalidProxy { k: usize, k_proxy: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("remainder underflow: {0}")]
    Underflow(String),
}
