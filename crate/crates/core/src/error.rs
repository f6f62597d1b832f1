use thiserror::Error;

use crate::graph::PositionId;

/// Errors raised while building, validating or solving a noisy game.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum GameError {
    #[error("game graph is not progressively bounded: cycle through position {0}")]
    Cycle(PositionId),
    #[error("invalid game graph: {0}")]
    InvalidGraph(String),
    #[error("invalid move error model: {0}")]
    InvalidModel(String),
    #[error("dimension mismatch at position {position}: expected {expected}, found {found}")]
    DimensionMismatch { position: PositionId, expected: usize, found: usize },
    #[error("probability {0} is outside [0, 1]")]
    ProbabilityOutOfRange(f64),
    #[error("perturbation epsilon must be positive, got {0}")]
    NonPositiveEpsilon(f64),
    #[error("invalid game parameters: {0}")]
    InvalidParameters(String),
    #[error("invalid game spec: {0}")]
    InvalidSpec(String),
}

pub type Result<T, E = GameError> = std::result::Result<T, E>;
