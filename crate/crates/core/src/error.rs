use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),
    #[error("insufficient truncation: need level {needed}, have {available}")]
    InsufficientTruncation { needed: usize, available: usize },
    #[error("size cap exceeded: more than {cap} {what}")]
    SizeCap { cap: usize, what: &'static str },
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("mismatched inputs: {0}")]
    Mismatch(String),
    #[error("action is not free: {0}")]
    NotFree(String),
    #[error("unitality undefined without degeneracies")]
    UnitalityUndefined,
    #[error("possibly infinite: {0}")]
    PossiblyInfinite(String),
    #[error("hypothesis failed: {0}")]
    Hypothesis(String),
    #[error("internal consistency failure: {0}")]
    Inconsistent(String),
}

pub type Result<T> = std::result::Result<T, Error>;
