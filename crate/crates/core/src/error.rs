use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid noise model: {0}")]
    InvalidNoise(String),

    #[error("no finite variance; pass explicit scale")]
    NoFiniteVariance,

    #[error("unknown noise family `{0}` (expected gaussian, laplace, gengauss or cauchy)")]
    UnknownFamily(String),

    #[error("invalid scene: {0}")]
    InvalidScene(String),

    #[error("bit-error probability {0} outside [0, 1/2)")]
    InvalidPe(f64),

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("optimized form requires τ=0")]
    NonZeroThreshold,

    #[error("every grid point has a degenerate Fisher information")]
    DegenerateStatistic,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("insufficient trials: pf0·trials = {product} < 100")]
    InsufficientTrials { product: f64 },

    #[error("invalid Monte Carlo configuration: {0}")]
    InvalidConfig(String),
}
