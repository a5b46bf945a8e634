use thiserror::Error;

/// Errors raised by the library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("resource limit exceeded: {0}")]
    Resource(String),
    #[error("integrity check failed: {0}")]
    Integrity(String),
    #[error("precision target {target:e} not reached (certified bound {achieved:e})")]
    Precision { target: f64, achieved: f64 },
    #[error("cutoff not certified: {0}")]
    CutoffNotCertified(String),
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

