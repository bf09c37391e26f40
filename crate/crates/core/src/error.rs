use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("usage error: {0}")]
    Usage(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("field mismatch: {0}")]
    FieldMismatch(String),

    /// A mathematical precondition failed; the message carries the witness.
    #[error("rejected: {0}")]
    Rejected(String),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code: 2 for mathematical rejection, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Rejected(_) | Error::Invariant(_) => 2,
            _ => 1,
        }
    }
}
