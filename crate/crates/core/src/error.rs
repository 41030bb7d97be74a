use thiserror::Error;

/// Errors raised by the relay models, solvers and the simulation harness.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("degenerate geometry: source and destination coincide")]
    DegenerateGeometry,

    #[error("distance must be positive, got {0}")]
    NonPositiveDistance(f64),

    #[error("SN and DN coincide")]
    SnDnCoincide,

    #[error("no LoS position found")]
    NoLosPosition,

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("interference cap must be non-negative, got {0}")]
    NegativeLeakage(f64),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("channel role {0} carries no path components")]
    MissingComponents(&'static str),

    #[error("solver failure at iteration {iteration} ({problem}): {reason}")]
    Solver { iteration: usize, problem: &'static str, reason: String },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("trial {trial}: {source}")]
    Trial {
        trial: usize,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    /// True for failures of the numerical machinery rather than bad input.
    pub fn is_numerical(&self) -> bool {
        match self {
            Error::Solver { .. } => true,
            Error::Trial { source, .. } => source.is_numerical(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
