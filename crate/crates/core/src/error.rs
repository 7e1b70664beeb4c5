use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("entry ({row}, {col}) is negative: {value}")]
    NegativeEntry { row: usize, col: usize, value: f64 },

    #[error("entry ({row}, {col}) is not finite")]
    NonFinite { row: usize, col: usize },

    #[error("row {row} sums to {sum}, expected 1")]
    RowSum { row: usize, sum: f64 },

    /// Row `k + 1` fails to dominate row `k` on the suffix starting at column `r` (1-based).
    #[error("monotonicity violated: row {} does not dominate row {k} at column {r} (deficit {deficit:e})", k + 1)]
    MonotoneViolation { k: usize, r: usize, deficit: f64 },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid lift witness: {0}")]
    WitnessInvalid(String),

    #[error("root finder did not converge after {sweeps} sweeps (residual {residual:e})")]
    Convergence { sweeps: usize, residual: f64 },

    #[error("Perron iteration failed: {0}")]
    PerronFailure(String),

    #[error("similarity output is not stochastic: row {row} sums to {sum}")]
    StochasticityFailure { row: usize, sum: f64 },

    #[error("unsupported dimension n = {0}")]
    UnsupportedN(usize),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter alpha = {alpha} outside the range of family {family}")]
    AlphaOutOfRange { family: String, alpha: f64 },

    #[error("point outside region: {0}")]
    OutOfRegion(String),

    #[error("internal boundary mismatch: {0}")]
    InternalBoundaryMismatch(String),

    #[error("pair is not on curve {curve} (residual {residual:e})")]
    NotOnCurve { curve: String, residual: f64 },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
