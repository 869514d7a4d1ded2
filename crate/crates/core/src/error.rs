use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("unsupported space: {0}")]
    UnsupportedSpace(String),
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("cone is not pointed")]
    NonPointed,
    #[error("cone has no generators")]
    ZeroGenerators,
    #[error("ambient dimension {dim} exceeds the Hilbert basis guard {limit}")]
    DimensionGuard { dim: usize, limit: usize },
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("decomposition failed: {0}")]
    Decomposition(String),
    #[error("unknown table id: {0}")]
    UnknownTable(String),
    #[error("missing reference: {0}")]
    MissingReference(String),
}

pub type Result<T> = std::result::Result<T, Error>;
