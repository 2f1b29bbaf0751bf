//! Crate-wide error type.

use alloc::string::String;

/// Errors produced by the core library.
///
/// The variants mirror the failure classes surfaced by the public API:
/// configuration problems, malformed data, shape and state violations,
/// numeric breakdowns during training, and undefined metrics.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid config: {0}")]
    Config(String),
    #[error("data error: {0}")]
    Data(String),
    #[error("shape mismatch: {0}")]
    Shape(String),
    #[error("state error: {0}")]
    State(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("metric undefined: {0}")]
    MetricUndefined(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = core::result::Result<T, Error>;
