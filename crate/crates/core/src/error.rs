use thiserror::Error;

/// Errors produced by the solvers, transforms and the run orchestration.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum WaveError {
    #[error("invalid flux model: {0}")]
    InvalidFlux(String),

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("non-finite value in {what} at index {index}")]
    NonFinite { what: &'static str, index: usize },

    #[error("extrapolation requested: target [{target_min}, {target_max}] exceeds source [{source_min}, {source_max}]")]
    Extrapolation { target_min: f64, target_max: f64, source_min: f64, source_max: f64 },

    #[error("cumulative energy map is not monotone at node {0}")]
    NonMonotone(usize),

    #[error("nonlocal evaluation failed: {0}")]
    NonlocalFailed(String),

    #[error("q nonpositive at node {index} (q = {value:e}); the run is under-resolved")]
    NonPositiveQ { index: usize, value: f64 },

    #[error("invariant not applicable: {0}")]
    NotApplicable(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for WaveError {
    fn from(err: std::io::Error) -> Self {
        WaveError::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, WaveError>;
