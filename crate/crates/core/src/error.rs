//! Error type shared across the crate.

use thiserror::Error;

use crate::element::ModelId;
use crate::rational::RationalError;

#[derive(Debug, Clone, Error)]
pub enum GyroError {
    #[error("element of model `{found}` used with model `{expected}`")]
    CrossModel { expected: ModelId, found: ModelId },

    #[error("element payload is not valid for model `{model}`")]
    WrongPayload { model: ModelId },

    #[error("element outside the open unit disk (|z| = {modulus})")]
    OutsideDisk { modulus: f64 },

    #[error("numeric failure in {context}: {detail}")]
    Numeric { context: &'static str, detail: String },

    #[error(transparent)]
    Rational(#[from] RationalError),

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("table validation failed at row {row}{}: {message}", col.map(|c| format!(", column {c}")).unwrap_or_default())]
    Table { row: usize, col: Option<usize>, message: String },

    #[error("{0}")]
    Usage(String),
}

impl GyroError {
    pub fn usage(message: impl Into<String>) -> GyroError {
        GyroError::Usage(message.into())
    }

    pub fn parse(location: impl Into<String>, message: impl Into<String>) -> GyroError {
        GyroError::Parse { location: location.into(), message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, GyroError>;
