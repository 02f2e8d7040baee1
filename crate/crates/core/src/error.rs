use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid polygon: {0}")]
    InvalidPolygon(String),

    #[error("insufficient agents: {required} required, {available} available")]
    InsufficientAgents { required: usize, available: usize },

    #[error("start point lies outside the polygon")]
    UnreachableStart,

    #[error("agent {agent} exceeded its memory budget ({words} > {budget} words)")]
    MemoryBudgetExceeded { agent: u64, words: usize, budget: usize },

    #[error("model violation in round {round}: {rule}")]
    ModelViolation { round: usize, rule: String },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("internal error: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn polygon(msg: impl Into<String>) -> Self {
        Error::InvalidPolygon(msg.into())
    }
}
