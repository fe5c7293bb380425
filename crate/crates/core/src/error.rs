use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("sample must be non-empty")]
    EmptySample,

    #[error("sample too small: need at least {needed}, got {got}")]
    SampleTooSmall { needed: usize, got: usize },

    #[error("non-finite value in sample")]
    NonFinite,

    #[error("ragged rows: expected {expected} columns, row {row} has {got}")]
    Ragged { row: usize, expected: usize, got: usize },

    #[error("first row is not a unit vector (norm {norm})")]
    NotUnit { norm: f64 },

    #[error("matrix is not orthogonal (max |H^T H - I| = {deviation:e})")]
    NotOrthogonal { deviation: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("too few usable grid points for log-CF fit: {got} < 3")]
    TooFewGridPoints { got: usize },

    #[error("probe direction must be nonzero")]
    ZeroDirection,

    #[error("unknown experiment `{0}`")]
    UnknownExperiment(String),
}
