use thiserror::Error;

/// Errors raised by the numerical kernel and the operations built on it.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("total dimension {dim} exceeds the configured maximum {max}")]
    DimensionOverflow { dim: usize, max: usize },
    #[error("matrix must be square, got {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },
    #[error("non-finite matrix entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },
    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("not a density operator: {0}")]
    InvalidState(String),
    #[error("not a trace-preserving channel (max deviation {deviation:e})")]
    NotTracePreserving { deviation: f64 },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },
    #[error("eigen-decomposition did not converge within {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("invalid interchange data: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
