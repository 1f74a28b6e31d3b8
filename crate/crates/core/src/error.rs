use thiserror::Error;

/// Errors raised by estimators, the rolling engine and data ingestion.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("validation error: {0}")]
    Validation(String),

    #[error("KL divergence undefined: q is zero where p has mass {mass} (index {index})")]
    DivergenceUndefined { index: usize, mass: f64 },

    #[error("degenerate range: pooled sample has fewer than 2 distinct values")]
    DegenerateRange,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate distance: sample {index} has a zero k-th neighbor distance")]
    DegenerateDistance { index: usize },

    #[error("normalization undefined: zero marginal entropy")]
    UndefinedNormalization,

    #[error("insufficient data: need at least {required} observations, got {available}")]
    InsufficientData { required: usize, available: usize },

    #[error("alignment error: {0}")]
    Alignment(String),

    #[error("unsupported quantity {quantity} for generator {kind}")]
    UnsupportedQuantity { kind: String, quantity: String },

    #[error("ingestion error at line {line}: {message}")]
    Ingestion { line: usize, message: String },

    #[error("empty input")]
    EmptyInput,

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
