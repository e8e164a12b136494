use thiserror::Error;

/// Errors raised while building instances or running solvers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("sensor range must be positive and finite, got {0}")]
    NonPositiveRange(f64),
    #[error("barrier length must be positive and finite, got {0}")]
    NonPositiveLength(f64),
    #[error("instance has no sensors")]
    NoSensors,
    #[error("infeasible coverage: 2rn = {total} < L = {length}")]
    InfeasibleCoverage { total: f64, length: f64 },
    #[error("sensor {index} at {position} lies outside [0, {length}]")]
    PositionOutOfRange {
        index: usize,
        position: f64,
        length: f64,
    },
    #[error("invalid trajectory: {0}")]
    InvalidTrajectory(String),
    #[error("barrier too short for the construction: {0}")]
    DegenerateLength(String),
    #[error("instance has {n} sensors, brute force is limited to {max}")]
    TooLarge { n: usize, max: usize },
    #[error("online robot walked off the barrier end at {0} without completing coverage")]
    EndOfBarrier(f64),
    #[error("algorithm needs the barrier length, but the environment hides it")]
    UnknownLength,
    #[error("io: {0}")]
    Io(String),
    #[error("parse: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}

impl From<csv::Error> for Error {
    fn from(e: csv::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
