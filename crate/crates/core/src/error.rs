//! Crate error type.

use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum Error {
    /// A coordinate or intermediate value left the binary64 range.
    #[error("overflow: a coordinate or intermediate value left the binary64 range")]
    Overflow,

    /// A parameter violated its documented domain.
    #[error("invalid parameter: {0}")]
    Param(String),

    /// An orbit left the sector union S before the required horizon.
    #[error("orbit left the sector union S at step {step}")]
    OrbitLeftS { step: usize },

    /// The closed-form and iterate-ratio limit estimates disagree.
    #[error("limit estimates disagree: spherical distance {distance:e} exceeds {allowed:e}")]
    Disagreement { distance: f64, allowed: f64 },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
