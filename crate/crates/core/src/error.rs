//! Error taxonomy shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A caller-supplied value violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Input lies outside the mathematical domain of an operation
    /// (e.g. log-SNR at t = 0 or t = 1).
    #[error("domain error: {0}")]
    Domain(String),

    /// A NaN or infinity appeared. Sampling aborts with the failing step
    /// index instead of clamping; smoothing must not mask blow-ups.
    #[error("numeric failure{}: {context}", step.map(|k| format!(" at step {k}")).unwrap_or_default())]
    Numeric {
        step: Option<usize>,
        context: String,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn numeric(context: impl Into<String>) -> Self {
        Error::Numeric {
            step: None,
            context: context.into(),
        }
    }

    /// Attach a step index to a numeric failure, if not already present.
    pub(crate) fn at_step(self, k: usize) -> Self {
        match self {
            Error::Numeric {
                step: None,
                context,
            } => Error::Numeric {
                step: Some(k),
                context,
            },
            other => other,
        }
    }

    /// Step index carried by a numeric failure, if any.
    pub fn step(&self) -> Option<usize> {
        match self {
            Error::Numeric { step, .. } => *step,
            _ => None,
        }
    }
}
