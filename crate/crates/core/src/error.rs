use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("value {value} for `{name}` is outside [{lo}, {hi}]")]
    OutOfRange {
        name: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("threshold {theta} is outside the admissible interval [{lo}, {hi}]")]
    InvalidThreshold { theta: f64, lo: f64, hi: f64 },

    #[error("invalid scheme parameters: {0}")]
    InvalidParams(String),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("failed to sample a full-rank generator after {0} attempts")]
    SamplingFailure(usize),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
