use thiserror::Error;

/// Errors produced by evaluation, certification and solver drivers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("quadrature did not converge: requested {requested:e}, achieved {achieved:e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    #[error("empty grid for certificate {0}")]
    EmptyGrid(String),

    #[error("derivative order {requested} exceeds available order {available}")]
    DerivativeOrder { requested: usize, available: usize },

    #[error("insufficient time history: need {need} levels, have {have}")]
    InsufficientHistory { need: usize, have: usize },

    #[error("data support violates obstacle clearance: {0}")]
    SupportViolation(String),

    #[error("malformed obstacle boundary: {0}")]
    MalformedBoundary(String),

    #[error("fit window too short: {have} samples, need {need}")]
    WindowTooShort { have: usize, need: usize },

    #[error("insufficient uncensored runs: {have} of {need}")]
    InsufficientUncensored { have: usize, need: usize },

    #[error("empty series")]
    EmptySeries,

    #[error("missing recorded quantity: {0}")]
    MissingRecording(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("config error: {0}")]
    Config(String),
}

pub type Result<T> = std::result::Result<T, Error>;
