use thiserror::Error;

/// Errors surfaced by the library.
///
/// `Validation` covers ill-formed mathematical inputs (broken metrics,
/// non-probability measures, incompatible grids). `CapExceeded` marks inputs
/// too large for an exact solver; callers can raise the cap or switch to an
/// upper-bound mode. `Internal` flags broken invariants that indicate a bug,
/// never bad user input.
#[derive(Debug, Error)]
pub enum Error {
    #[error("validation: {0}")]
    Validation(String),

    #[error("cap exceeded: {0}")]
    CapExceeded(String),

    #[error("parse: {0}")]
    Parse(String),

    #[error("internal invariant violated: {0}")]
    Internal(String),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn cap(msg: impl Into<String>) -> Self {
        Error::CapExceeded(msg.into())
    }

    pub fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
