use thiserror::Error;

use crate::testset::ConditionReport;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("degree mismatch: expected {expected}, got {got}")]
    DegreeMismatch { expected: u32, got: u32 },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("weight mismatch: shape has weight {shape}, content has weight {content}")]
    WeightMismatch { shape: u32, content: u32 },

    #[error("polynomial division is not exact")]
    InexactDivision,

    #[error("the minor is the zero polynomial: {0}")]
    ZeroMinor(String),

    #[error("theorem hypotheses not satisfied: {}", .0.violations.join("; "))]
    ConditionsNotSatisfied(Box<ConditionReport>),

    #[error("no suitable base point found within the search budget ({0})")]
    SearchExhausted(String),

    #[error("certificate leg failed: {0}")]
    CertificateFailure(String),

    #[error("power-mean bound violated: {0}")]
    BoundViolated(String),
}
