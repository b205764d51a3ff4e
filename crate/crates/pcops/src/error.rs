//! Error type shared across the crate.

use thiserror::Error;

/// Errors raised by operator construction, evaluation, iteration, and checks.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// Dimension mismatch between operands.
    #[error("dimension mismatch: expected {expected}, got {got}{}", ctx(.context))]
    Dim {
        expected: usize,
        got: usize,
        context: String,
    },

    /// A non-finite value (NaN or infinity) appeared during evaluation.
    #[error("non-finite value in {context}")]
    Numeric { context: String },

    /// A parameter lies outside its validity window.
    #[error("{name} = {value} outside {window}")]
    Param {
        name: &'static str,
        value: f64,
        window: String,
    },

    /// An operand does not carry the certificate required by an operation.
    #[error("certificate error: {0}")]
    Cert(String),

    /// The requested certificate conversion is not among the supported
    /// equivalences.
    #[error("unsupported certificate conversion: {0}")]
    Conversion(String),

    /// A check was given input it cannot process (e.g. a trace too short).
    #[error("invalid input: {0}")]
    Input(String),

    /// Fixed-point search exhausted its iteration cap.
    #[error("no convergence within {iterations} iterations (best residual {best_residual:e})")]
    NoConvergence {
        iterations: usize,
        best_residual: f64,
    },
}

fn ctx(context: &str) -> String {
    if context.is_empty() {
        String::new()
    } else {
        format!(" ({context})")
    }
}

impl Error {
    pub(crate) fn dim(expected: usize, got: usize, context: impl Into<String>) -> Self {
        Error::Dim {
            expected,
            got,
            context: context.into(),
        }
    }

    pub(crate) fn numeric(context: impl Into<String>) -> Self {
        Error::Numeric {
            context: context.into(),
        }
    }

    pub(crate) fn param(name: &'static str, value: f64, window: impl Into<String>) -> Self {
        Error::Param {
            name,
            value,
            window: window.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
