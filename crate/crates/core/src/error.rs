//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right} ({context})")]
    DimensionMismatch {
        left: usize,
        right: usize,
        context: &'static str,
    },

    #[error("constraint violated: {0}")]
    Constraint(String),

    #[error("singular matrix: {0}")]
    Singular(String),

    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("did not converge: {0}")]
    NonConvergence(String),

    #[error("insufficient statistics: {0}")]
    Statistics(String),

    #[error("drive resonant with phonon mode {mode} at frequency {freq}")]
    Resonance { mode: usize, freq: f64 },

    #[error("planar crystal structurally unstable: {0}")]
    StructuralInstability(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Coarse failure class, used by the CLI to pick an exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailureClass {
    Config,
    Numerical,
    NonConvergence,
}

impl Error {
    pub fn class(&self) -> FailureClass {
        match self {
            Error::Config(_) | Error::Io(_) | Error::Json(_) | Error::Csv(_) => {
                FailureClass::Config
            }
            Error::NonConvergence(_) => FailureClass::NonConvergence,
            _ => FailureClass::Numerical,
        }
    }

    pub(crate) fn dim(left: usize, right: usize, context: &'static str) -> Self {
        Error::DimensionMismatch {
            left,
            right,
            context,
        }
    }

    pub(crate) fn constraint(msg: impl Into<String>) -> Self {
        Error::Constraint(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
