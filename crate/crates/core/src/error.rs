use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty point set")]
    EmptyPointSet,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported dimension {dim} for {what}")]
    UnsupportedDimension { dim: usize, what: &'static str },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// A model or sample-family document failed validation.
    #[error("{}", match .index {
        Some(i) => format!("point {i}: {}", .message),
        None => .message.clone(),
    })]
    InvalidModel { index: Option<usize>, message: String },

    #[error("malformed document: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("statistic {0} is not approximable")]
    NotApproximable(String),

    #[error("{what} requires at most {limit} combinations, got {count}")]
    TooLarge {
        what: &'static str,
        count: f64,
        limit: f64,
    },

    #[error("reduction verification failed after {attempts} attempts (deviation {deviation:.4} > {allowed:.4})")]
    VerificationFailed {
        attempts: usize,
        deviation: f64,
        allowed: f64,
    },

    #[error("general position violated: {0}")]
    GeneralPosition(String),

    #[error("basis masses sum to {total} (deficit {deficit:e})")]
    MassDeficit { total: f64, deficit: f64 },
}

impl Error {
    pub(crate) fn model(index: usize, message: impl Into<String>) -> Self {
        Error::InvalidModel {
            index: Some(index),
            message: message.into(),
        }
    }

    pub(crate) fn param(message: impl Into<String>) -> Self {
        Error::InvalidParameter(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
