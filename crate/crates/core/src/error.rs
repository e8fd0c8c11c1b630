use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid combination {indices:?} for m = {m}: {reason}")]
    InvalidCombination { indices: Vec<usize>, m: usize, reason: &'static str },

    #[error("rank {rank} out of range for C({m}, {n}) = {count}")]
    RankOutOfRange { rank: usize, m: usize, n: usize, count: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(&'static str),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not unitary (deviation {0:e})")]
    NotUnitary(f64),

    #[error("matrix is not Hermitian (deviation {0:e})")]
    NotHermitian(f64),

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("malformed document: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Format(e.to_string())
    }
}
