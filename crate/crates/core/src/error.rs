use thiserror::Error;

/// Errors raised by the means library and the certification harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the requested operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A precondition of an algorithm was violated (for example a
    /// non-positive denominator coefficient in a ratio test).
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// A numerical evaluation broke down (underflow, lost bracket).
    #[error("evaluation error: {0}")]
    Evaluation(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::Domain(msg.into()))
}
