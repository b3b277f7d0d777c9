use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unbalanced marginals: supplies sum to {supply}, demands sum to {demand}")]
    UnbalancedMarginals { supply: u64, demand: u64 },

    #[error("action set has more than {limit} actions")]
    EnumerationLimit { limit: usize },

    #[error("loss {value} for arm {arm} is outside [0, 1]")]
    LossOutOfRange { arm: usize, value: f64 },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("point outside the open domain of the regularizer (arm {arm}, value {value})")]
    Domain { arm: usize, value: f64 },

    #[error("OFTRL solver did not converge after {iterations} iterations (reduced gradient {residual:e})")]
    NonConvergence { iterations: usize, residual: f64 },

    #[error("decomposition failed: {0}")]
    Decomposition(String),

    #[error("network simplex exceeded {0} pivots")]
    PivotLimit(usize),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("environment has no stationary mean under a corruption schedule")]
    NoStationaryMean,

    #[error("config error: {0}")]
    Config(String),

    #[error("trial {trial} failed at round {round}")]
    Trial {
        trial: usize,
        round: u64,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
