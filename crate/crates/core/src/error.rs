use thiserror::Error;

/// Errors produced by the planning library.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("invalid hybrid time domain: {0}")]
    InvalidDomain(String),

    #[error("invalid hybrid signal: {0}")]
    InvalidSignal(String),

    #[error("initial state lies outside the flow set (margin {margin:e})")]
    InitialStateOutsideFlowSet { margin: f64 },

    #[error("state/input pair is not in the jump set (margin {margin:e})")]
    NotInJumpSet { margin: f64 },

    #[error("jump map is empty at hybrid time ({t}, {j})")]
    JumpMapUndefined { t: f64, j: usize },

    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),

    #[error("invalid planner configuration: {0}")]
    ConfigInvalid(String),

    #[error("assembled plan failed validation: {0}")]
    AssembledPlanInvalid(String),

    #[error("malformed run file: {0}")]
    Format(String),
}

pub type Result<T> = std::result::Result<T, Error>;
