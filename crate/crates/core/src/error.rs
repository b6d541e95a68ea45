use thiserror::Error;

/// Errors raised by circuit construction, simulation, parsing and fitting.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A precondition on the inputs was violated (bad index, size mismatch, ...).
    #[error("domain error: {0}")]
    Domain(String),
    /// The request exceeds a simulation resource cap.
    #[error("resource error: {0}")]
    Resource(String),
    /// Malformed circuit text.
    #[error("line {line}: {reason}")]
    Parse { line: usize, reason: String },
    /// The least-squares system is singular or under-determined.
    #[error("fit error: {0}")]
    Fit(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
