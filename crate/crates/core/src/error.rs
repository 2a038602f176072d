use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or inconsistent input data (bad indices, invalid weights).
    #[error("invalid input: {0}")]
    Input(String),

    /// Input file could not be parsed or validated; `line` is 1-based.
    #[error("{path}:{line}: {message}")]
    Format {
        path: String,
        line: usize,
        message: String,
    },

    /// An operation was called outside its documented domain.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numeric parameter is out of range.
    #[error("invalid parameter: {0}")]
    Parameter(String),

    /// Exact enumeration refused because the instance is over the cap.
    #[error("instance too large for exhaustive mode: size {size} exceeds cap {cap}; use search mode")]
    TooLarge { size: usize, cap: usize },

    /// Numerical degeneracy (singular Gram matrix, zero normalizer).
    #[error("degenerate: {0}")]
    Degenerate(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
