use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("p must be a prime >= 2, got {0}")]
    NotPrime(u64),
    #[error("ring exponent must be 1 or 2, got {0}")]
    BadExponent(u8),
    #[error("{0}")]
    Domain(String),
    #[error("invariant violation: {0}")]
    Invariant(String),
    #[error("enumeration budget exceeded: predicted {predicted} submodules, cap is {cap}")]
    Budget { predicted: u128, cap: u128 },
    #[error("unsupported parameters: {0}")]
    Unsupported(String),
}

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn invariant(msg: impl Into<String>) -> Self {
        Error::Invariant(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
