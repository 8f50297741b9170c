use thiserror::Error;

/// Errors produced anywhere in the laboratory.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    /// A gate or circuit references something that does not exist, or is malformed.
    #[error("structural error: {0}")]
    Structural(String),

    /// An exhaustive or exact computation was requested beyond its size limit.
    #[error("capacity exceeded: {what} is {requested}, limit is {limit}")]
    Capacity {
        what: &'static str,
        requested: u64,
        limit: u64,
    },

    /// A parameter is outside its admissible domain.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Two objects that must agree in size do not.
    #[error("dimension mismatch: {what}: expected {expected}, found {found}")]
    Dimension {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    /// Textual input could not be parsed.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
}

impl Error {
    pub(crate) fn capacity(what: &'static str, requested: u64, limit: u64) -> Self {
        Error::Capacity {
            what,
            requested,
            limit,
        }
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn structural(msg: impl Into<String>) -> Self {
        Error::Structural(msg.into())
    }

    /// True for [`Error::Capacity`]; front ends map this to a distinct exit status.
    pub fn is_capacity(&self) -> bool {
        matches!(self, Error::Capacity { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
