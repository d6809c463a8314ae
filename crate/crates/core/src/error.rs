use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("level {level} is aliased on this grid (highest unaliased level is {max_level:?})")]
    Alias { level: i64, max_level: Option<i64> },

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("grid too coarse: {0}")]
    Resolution(String),

    #[error("pair is not a bounded multiplication domain ({0})")]
    NotBounded(String),

    #[error("malformed grid file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
