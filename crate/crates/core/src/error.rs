use thiserror::Error;

/// Errors produced by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// A parameter is missing or outside its admissible range.
    #[error("invalid parameter `{name}`: {reason}")]
    Parameter { name: String, reason: String },

    /// The operation is not defined for the given input (negative time, empty subspace, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The truncation would need more modes than allowed.
    #[error("capacity exceeded: {required} modes required, limit is {limit}")]
    Capacity { required: usize, limit: usize },

    /// A non-finite value appeared while assembling or solving.
    #[error("numeric failure: {0}")]
    Numeric(String),

    /// The controllability Gramian cannot be inverted reliably.
    #[error("ill-conditioned gramian (condition number {condition:.3e}, limit {limit:.1e})")]
    Conditioning { condition: f64, limit: f64 },

    /// The observation set sees nothing of some spectral subspace.
    #[error("degenerate observation set: {0}")]
    DegenerateSet(String),

    /// Zero extension between nested boxes lost too much of the state.
    #[error("embedding fidelity {tolerance:.3e} exceeds {limit:.1e}")]
    Fidelity { tolerance: f64, limit: f64 },

    /// The set or potential kind cannot be handled on this domain.
    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Parameter {
            name: name.into(),
            reason: reason.into(),
        }
    }
}

/// Returns a parameter error unless `cond` holds.
pub(crate) fn ensure(cond: bool, name: &str, reason: &str) -> Result<()> {
    if cond {
        Ok(())
    } else {
        Err(Error::param(name, reason))
    }
}
