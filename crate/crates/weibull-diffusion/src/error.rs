//! Error type shared by every module of the crate.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while validating data, simulating paths,
/// evaluating likelihoods, or fitting parameters.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("times and values have different lengths ({times} vs {values})")]
    LengthMismatch { times: usize, values: usize },

    #[error("series too short: {n} points, need at least 3")]
    TooShort { n: usize },

    #[error("non-positive time at row {index}: {value} (the drift has a 1/t singularity, t must be > 0)")]
    NonPositiveTime { index: usize, value: f64 },

    #[error("times not strictly increasing at row {index}")]
    NonIncreasingTimes { index: usize },

    #[error("non-positive state value at row {index}: {value}")]
    NonPositiveValue { index: usize, value: f64 },

    #[error("invalid parameter {name} = {value}: must be finite and > 0")]
    InvalidParam { name: &'static str, value: f64 },

    #[error("invalid Weibull shape {0}: must be finite and > 0")]
    InvalidShape(f64),

    #[error("time {t} is before the process start {eps}")]
    TimeBeforeStart { t: f64, eps: f64 },

    #[error("grid starts at {grid_eps} but the parameters carry eps = {param_eps}")]
    GridMismatch { grid_eps: f64, param_eps: f64 },

    #[error("Euler step drove the state non-positive at index {index}")]
    NonPositiveState { index: usize },

    #[error("closed-form sigma^2 profile requires a uniform time grid")]
    NonUniformGrid,

    #[error("literal sigma^2 estimator has negative radicand {radicand}")]
    SigmaDomain { radicand: f64 },

    #[error("no usable minimum of the profiled objective in ({low}, {high})")]
    BracketFailure { low: f64, high: f64 },

    #[error("score has no sign change over ({low}, {high})")]
    NoSignChange { low: f64, high: f64 },

    #[error("observed information is singular or not positive definite")]
    SingularInformation,

    #[error("estimate did not converge; uncertainty is not available")]
    NotConverged,

    #[error("{failed} of {total} replicates failed (more than 20%)")]
    TooManyFailures { failed: usize, total: usize },

    #[error("study needs at least {min} replications, got {got}")]
    EmptyStudy { got: usize, min: usize },

    #[error("invalid options: {0}")]
    InvalidOptions(String),

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },

    #[error("malformed data at row {row}: {message}")]
    Parse { row: usize, message: String },
}
