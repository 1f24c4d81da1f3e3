use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("degree {degree} lies outside the window [{lo}, {hi}]")]
    WindowViolation { degree: i64, lo: i64, hi: i64 },

    /// An action or product would be needed beyond the top of a truncated window.
    #[error("value of {what} in degree {degree} is beyond the window top {hi}")]
    WindowTruncation { what: String, degree: i64, hi: i64 },

    #[error("objects over different primes ({0} and {1})")]
    PrimeMismatch(u32, u32),

    /// The module is only known up to `horizon`, so Ext is unreliable above it.
    #[error("module is known only up to degree {horizon}, cannot resolve to t = {requested}")]
    InsufficientWindow { horizon: i64, requested: i64 },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid module: {0}")]
    InvalidModule(String),

    /// Malformed description file; the message carries line and column when known.
    #[error("parse error: {0}")]
    Parse(String),

    #[error("dimension mismatch: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, Error>;
