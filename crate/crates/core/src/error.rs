use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An argument lies outside the domain of the operation.
    #[error("{0}")]
    Domain(String),

    /// A structural precondition on the input series or parameters failed.
    #[error("precondition violated: {0}")]
    Precondition(String),

    /// The root problem has no sign change on the requested interval.
    #[error("no sign change on [{lo}, {hi}]: g(lo) = {g_lo}, g(hi) = {g_hi}")]
    Bracketing { lo: f64, hi: f64, g_lo: f64, g_hi: f64 },

    /// The certified truncation order would exceed the configured cap.
    #[error("truncation order {needed} exceeds cap {cap} (r = {r})")]
    TruncationCap { r: f64, needed: f64, cap: usize },

    /// Non-finite values, quadrature budget exhaustion and similar failures.
    #[error("numerical failure: {0}")]
    Numerical(String),

    /// Not enough signal to draw a conclusion.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn precondition(msg: impl Into<String>) -> Self {
        Error::Precondition(msg.into())
    }

    pub(crate) fn numerical(msg: impl Into<String>) -> Self {
        Error::Numerical(msg.into())
    }

    /// Domain and precondition errors are caller mistakes; the rest are
    /// failures of the numerics.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Precondition(_))
    }
}
