use thiserror::Error;

/// Errors raised by the numerical and design layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },

    #[error("root finder did not converge after {iterations} iterations; best bracket [{lo}, {hi}]")]
    RootNotConverged { iterations: usize, lo: f64, hi: f64 },

    #[error("quadrature did not converge: estimate {estimate} with error bound {error}")]
    QuadratureNotConverged { estimate: f64, error: f64 },

    /// A likelihood ratio has a zero denominator (power of exactly one, or
    /// a stage probability of exactly zero).
    #[error("degenerate outcome: {0}")]
    Degenerate(String),

    #[error("configuration error: {0}")]
    Config(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    /// True when the error comes from an iterative numerical method failing
    /// to converge, as opposed to invalid input.
    pub fn is_non_convergence(&self) -> bool {
        matches!(self, Error::RootNotConverged { .. } | Error::QuadratureNotConverged { .. })
    }
}

pub type Result<T> = std::result::Result<T, Error>;
