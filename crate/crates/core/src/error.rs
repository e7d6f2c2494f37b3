use thiserror::Error;

use crate::dynamics::Trajectory;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("grid mismatch")]
    GridMismatch,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("infinite weight: nonzero coefficient at xi = 0, eta = {eta}")]
    InfiniteWeight { eta: i64 },

    #[error("blow-up detected at t = {t}")]
    BlowUp {
        t: f64,
        partial: Option<Box<Trajectory>>,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("{0}")]
    Format(String),

    #[error("invalid configuration: {}", .0.join("; "))]
    Config(Vec<String>),

    #[error("{experiment} experiment failed: {source}")]
    Experiment {
        experiment: String,
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
