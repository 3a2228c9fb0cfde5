use thiserror::Error;

/// Errors raised by the numerical routines of this crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("enumeration size {requested} exceeds the cap of {cap}")]
    EnumerationCap { requested: usize, cap: usize },

    #[error("window low end {window_low} would truncate entries (needs <= {required})")]
    WindowTooHigh { window_low: i64, required: i64 },

    #[error("coefficient table covers [{have_lo}, {have_hi}] but [{need_lo}, {need_hi}] is required")]
    CoefficientWindow {
        have_lo: i64,
        have_hi: i64,
        need_lo: i64,
        need_hi: i64,
    },

    #[error("no convergence: {what} (residual {residual:.3e})")]
    NonConvergence { what: String, residual: f64 },

    #[error("kernel invariant violated: {0}")]
    KernelInvariant(String),

    #[error("criticality condition failed: {0}")]
    Criticality(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidInput(msg.into())
    }

    pub(crate) fn no_convergence(what: impl Into<String>, residual: f64) -> Self {
        Error::NonConvergence {
            what: what.into(),
            residual,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
