use thiserror::Error;

use crate::analysis::ZeroReport;

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,

    #[error("precision of {0} bits is outside the supported range 64..=2048")]
    InvalidPrecision(u32),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("multi-index has {got} entries, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("multi-index {index:?} is not normal: {reason}")]
    NonNormalIndex { index: Vec<u32>, reason: String },

    #[error("series did not certify within {terms} terms")]
    NonConvergent { terms: usize },

    #[error("denominator magnitude {magnitude:e} is below tolerance")]
    DegenerateDenominator { magnitude: f64 },

    #[error("zero classification requires real coefficients")]
    ClassificationUnavailable(Box<ZeroReport>),

    #[error("stirling table holds degree {available}, need {needed}")]
    TableTooSmall { available: usize, needed: usize },

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
