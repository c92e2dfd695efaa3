use thiserror::Error;

/// Errors raised by the spectral computations.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension n = {n} is not supported: n >= {min} required")]
    DimensionTooSmall { n: i64, min: i64 },

    #[error("resource cap exceeded: {what} needs {needed} but the cap is {cap}")]
    ResourceCap { what: &'static str, needed: u128, cap: u128 },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("q = {re}{im:+}i lies outside the strip {lo} < Re(q) < {hi}")]
    OutOfStrip { re: f64, im: f64, lo: f64, hi: f64 },

    #[error("pole at {0}")]
    Pole(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that signal an exhausted term, node or line budget.
    pub fn is_resource_exhaustion(&self) -> bool {
        matches!(self, Error::ResourceCap { .. } | Error::NonConvergence(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn require_dimension(n: i64, min: i64) -> Result<()> {
    if n < min {
        Err(Error::DimensionTooSmall { n, min })
    } else {
        Ok(())
    }
}
