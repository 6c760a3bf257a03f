use thiserror::Error;

/// Errors produced while building or querying distributions.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("unknown event label `{0}`")]
    LabelNotFound(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("event set must contain between 1 and {max} events, got {got}")]
    EventCount { got: usize, max: usize },

    #[error("duplicate event label `{0}`")]
    DuplicateLabel(String),

    #[error("event labels must be non-empty and must not contain ','")]
    InvalidLabel(String),

    #[error("value at {path} is invalid: {reason}")]
    InvalidValue { path: String, reason: String },

    #[error("probabilities sum to {sum}, expected 1")]
    NotNormalized { sum: String },

    #[error("event `{0}` has a degenerate marginal (p = 0 or p = 1)")]
    DegenerateEvent(String),

    #[error("terrace probability p({0}) vanishes")]
    SingularDistribution(String),

    #[error("trial count {0} is too small for the given intensities (sum of lambda/n exceeds 1)")]
    InfeasibleTrialCount(u64),

    #[error("{0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;
