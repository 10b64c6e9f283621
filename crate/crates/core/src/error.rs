use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid dimension: {0}")]
    InvalidDimension(usize),

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("state is not normalized (squared norm {0})")]
    Normalization(f64),

    #[error("unsupported mode: {0}")]
    UnsupportedMode(&'static str),

    #[error("{what} exceeds the cap of {cap}")]
    Size { what: String, cap: usize },

    #[error("invalid Markov chain: {0}")]
    Chain(String),

    #[error("parse error on line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("fit error: {0}")]
    Fit(String),

    #[error("usage: {0}")]
    Usage(String),

    #[error("descent budget of {0} steps exhausted before a local minimum was verified")]
    DescentBudgetExhausted(usize),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
