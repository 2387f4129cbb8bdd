use thiserror::Error;

use crate::hilbert::Subsystem;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("truncation {dim} for {what} cannot hold a single excitation (need at least 2)")]
    Truncation { what: &'static str, dim: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: &'static str, reason: String },

    #[error("subsystem {0:?} is not part of this basis")]
    MissingSubsystem(Subsystem),

    #[error("operator dimension {got} does not match subsystem {subsystem:?} dimension {expected}")]
    OperatorDimension { subsystem: Subsystem, expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("initial state is not normalized (norm² = {0})")]
    NotNormalized(f64),

    #[error("time grid is empty")]
    EmptyGrid,

    #[error("time grid must start at 0 and increase strictly (offending index {0})")]
    BadGrid(usize),

    #[error("operator is not Hermitian (‖O − O†‖ = {0:e})")]
    NotHermitian(f64),

    #[error("expectation value has imaginary residue {0:e}")]
    ImaginaryResidue(f64),

    #[error("numerical failure at t = {t} ns: {reason}")]
    Numerical { t: f64, reason: String },

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
