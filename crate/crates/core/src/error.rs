use thiserror::Error;

/// Failure modes shared by every evaluator in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A denominator factor `1 - a q^j` vanished.
    #[error("pole: factor {index} of {context} vanishes")]
    Pole { context: String, index: i64 },

    #[error("no convergence in {context} after {terms} terms")]
    NonConvergence { context: String, terms: usize },

    /// Parameters lie outside the convergence region of a series or product formula.
    #[error("outside convergence region: {0}")]
    Region(String),

    /// Parameters lie outside the domain of an operation (positivity window, index range, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("singular point: {0}")]
    SingularPoint(String),

    #[error("non-finite value in {0}")]
    NonFinite(String),

    /// An evaluator broke its contract (e.g. not a function of x alone).
    #[error("contract violation: {0}")]
    Contract(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub fn pole(context: impl Into<String>, index: i64) -> Self {
        Error::Pole { context: context.into(), index }
    }

    pub fn non_convergence(context: impl Into<String>, terms: usize) -> Self {
        Error::NonConvergence { context: context.into(), terms }
    }

    /// True for failures of the numerics themselves rather than of the inputs.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::Pole { .. } | Error::NonConvergence { .. } | Error::NonFinite(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
