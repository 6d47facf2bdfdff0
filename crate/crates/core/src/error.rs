use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("probability {0} outside the open unit interval")]
    ProbabilityOutOfRange(f64),

    #[error("Halton dimension {requested} exceeds the supported maximum {max}")]
    HaltonDimensionTooLarge { requested: usize, max: usize },

    #[error("state `{state}` is not supported by {operation}")]
    UnsupportedState { state: &'static str, operation: &'static str },

    #[error("method `{method}` cannot be used with state `{state}`")]
    UnsupportedMethod { method: &'static str, state: &'static str },

    #[error("trajectory {index} became non-finite at t = {time}")]
    NonFiniteTrajectory { index: usize, time: f64 },

    #[error("symbol `{0}` mixes position and momentum; the grid solver only handles f(q) + g(p)")]
    MixedSymbol(String),

    #[error("grid too small: boundary amplitude {amplitude:e} exceeds {threshold:e}")]
    GridTooSmall { amplitude: f64, threshold: f64 },

    #[error("time grids do not overlap")]
    EmptyOverlap,

    #[error("fit requires at least {required} points, got {found}")]
    TooFewPoints { required: usize, found: usize },

    #[error("nonpositive value {0} in log-log fit")]
    NonPositive(f64),
}

pub type Result<T> = std::result::Result<T, Error>;
