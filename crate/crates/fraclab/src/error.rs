//! Error taxonomy shared by every module.

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Input outside the domain of definition of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A parameter outside the supported numerical range (quadrature would
    /// degenerate rather than merely lose accuracy).
    #[error("range error: {0}")]
    Range(String),

    /// A truncated integral carries too much mass beyond the grid.
    #[error("truncation error: {reason} (estimated tail fraction {tail_fraction:.3e})")]
    Truncation { reason: String, tail_fraction: f64 },

    /// Two evaluation routes that must agree disagreed.
    #[error("internal consistency error: {0}")]
    Inconsistency(String),

    /// Configuration file or flag could not be parsed/validated.
    #[error("config error: {0}")]
    Config(String),

    /// Every start of a multi-start solve failed to converge.
    #[error("convergence failure: {0}")]
    Convergence(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
