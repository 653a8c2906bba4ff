use std::fmt;

/// Failure categories shared by every module. The CLI maps them to exit codes.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// A configured size or memory budget would be exceeded.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// Malformed input or a violated precondition.
    #[error("invalid input: {0}")]
    Validation(String),
    /// An argument outside the domain of an operation (e.g. an element not in `K(G,c)`).
    #[error("domain error: {0}")]
    Domain(String),
    /// An internal consistency check failed. This always indicates a bug.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn capacity(msg: impl fmt::Display) -> Self {
        Error::Capacity(msg.to_string())
    }
    pub fn validation(msg: impl fmt::Display) -> Self {
        Error::Validation(msg.to_string())
    }
    pub fn domain(msg: impl fmt::Display) -> Self {
        Error::Domain(msg.to_string())
    }
    pub fn internal(msg: impl fmt::Display) -> Self {
        Error::Internal(msg.to_string())
    }
}
