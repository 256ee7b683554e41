use thiserror::Error;

/// Errors raised by the geometric primitives.
///
/// Solvability failures of a boundary-value problem are not errors; they are
/// reported through [`crate::SolvabilityClass`].
#[derive(Debug, Clone, PartialEq, Error)]
pub enum SpiralError {
    #[error("endpoints coincide (chord length {0:e})")]
    DegenerateChord(f64),

    #[error("argument outside the admissible domain: {0}")]
    Domain(String),

    #[error("method not applicable: {0}")]
    NotApplicable(String),

    #[error("circle pairs have different invariants: {0}")]
    InvariantMismatch(String),

    #[error("the two expressions for the transform constant disagree: {0}")]
    InconsistentRatio(String),

    #[error("point maps to the pole of the transform")]
    Pole,

    #[error("invalid geometry: {0}")]
    InvalidGeometry(String),
}

pub type Result<T, E = SpiralError> = std::result::Result<T, E>;
