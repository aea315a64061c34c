use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("degree {degree} exceeds the supported maximum {max}")]
    DegreeTooLarge { degree: usize, max: usize },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("basis mismatch: {0}")]
    BasisMismatch(String),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("parse error at line {line}: {reason}")]
    Parse { line: usize, reason: String },

    #[error("degenerate trace: zero arc length")]
    DegenerateTrace,

    #[error("a trace needs at least 2 points, got {0}")]
    TooFewPoints(usize),

    #[error("empty model set")]
    EmptyModelSet,

    #[error("empty training set")]
    EmptyTrainingSet,

    #[error("invalid argument: {0}")]
    Invalid(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
