use thiserror::Error;

/// Errors surfaced by every module of the crate.
///
/// The variants map one-to-one onto the CLI exit codes (see [`Error::exit_code`]).
#[derive(Debug, Error)]
pub enum Error {
    /// Caller supplied an input that violates a precondition.
    #[error("usage error: {0}")]
    Usage(String),

    /// The request is well-formed but too large for the selected method.
    #[error("capacity error: {0}")]
    Capacity(String),

    /// Floating-point sampling could not proceed (empty interval, non-positive mass, ...).
    #[error("numeric error: {0}")]
    Numeric(String),

    /// An internal cross-check failed (non-integral count, inconsistent kernel system, ...).
    #[error("consistency failure: {0}")]
    Consistency(String),

    /// A tower cache was rejected on load.
    #[error("cache rejected: {0}")]
    Cache(String),

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub(crate) fn capacity(msg: impl Into<String>) -> Self {
        Error::Capacity(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn consistency(msg: impl Into<String>) -> Self {
        Error::Consistency(msg.into())
    }

    /// Process exit code: 1 verification failure, 2 usage error, 3 capacity error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) | Error::Json(_) => 2,
            Error::Capacity(_) => 3,
            Error::Io(_) => 2,
            Error::Numeric(_) | Error::Consistency(_) | Error::Cache(_) => 1,
        }
    }
}
