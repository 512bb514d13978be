//! Error type shared across the crate.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("step size h = {0} outside (0, 2)")]
    InvalidStepSize(f64),

    #[error("non-finite value encountered in {0}")]
    NonFinite(&'static str),

    #[error("norm weights must be finite and lie in (0, 1]")]
    InvalidWeights,

    #[error("model does not provide a Hessian action")]
    MissingHessian,

    #[error("missing constant for bound evaluation: {0}")]
    MissingConstant(&'static str),

    #[error("operation not available for {0} proposals")]
    UnsupportedProposal(&'static str),

    #[error("contraction factor {0} is not below 1; the iterated bound is vacuous")]
    VacuousContraction(f64),

    #[error("trajectory of {values} values exceeds the in-memory limit of {limit}; use the streaming summary instead")]
    TrajectoryTooLarge { values: usize, limit: usize },

    #[error("only {0} usable points for the power-law fit (need at least 3)")]
    TooFewPoints(usize),

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
