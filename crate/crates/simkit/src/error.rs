use thiserror::Error;

#[derive(Debug, Error)]
pub enum SimError {
    #[error("event scheduled in the past: t={requested} < clock={clock}")]
    EventInPast { requested: f64, clock: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("arrival profile has no positive rate")]
    DeadArrivalProfile,

    #[error("need at least {needed} samples, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("relative precision is undefined for a zero mean")]
    ZeroMean,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("model error: {0}")]
    Model(String),
}
