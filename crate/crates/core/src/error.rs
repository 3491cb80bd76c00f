use thiserror::Error;

/// Errors produced by construction, validation and evaluation routines.
#[derive(Debug, Error)]
pub enum Error {
    /// A value or combination of values violates a construction invariant.
    #[error("validation: {0}")]
    Validation(String),

    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain: {0}")]
    Domain(String),

    /// An integrand produced a non-finite value.
    #[error("integrand returned a non-finite value at abscissa {abscissa}")]
    NonFiniteIntegrand { abscissa: f64 },

    /// Adaptive quadrature exhausted its subdivision budget.
    #[error(
        "quadrature did not converge: {context} (best estimate {value}, error {error_estimate})"
    )]
    NonConverged {
        context: String,
        value: f64,
        error_estimate: f64,
    },

    /// An internal cross-check failed; indicates a bug or a pathological input.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn validation(msg: impl Into<String>) -> Self {
        Error::Validation(msg.into())
    }

    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}
