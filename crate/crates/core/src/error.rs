use thiserror::Error;

/// Errors raised by the analytic and simulation routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside the domain of a mathematical function.
    #[error("domain error in {func}: {detail}")]
    Domain { func: &'static str, detail: String },

    /// A caller-supplied argument violates a precondition.
    #[error("invalid argument `{name}`: {detail}")]
    Argument { name: &'static str, detail: String },

    /// A quadrature or evaluation produced a non-finite or out-of-range value.
    #[error("numerical failure in {context}: {detail}")]
    Numerical { context: &'static str, detail: String },

    /// The requested operation is only defined for a restricted parameter regime.
    #[error("unsupported regime for {op}: {detail}")]
    UnsupportedRegime { op: &'static str, detail: String },

    /// The tightness ratio is undefined because the averaged SSOP vanishes.
    #[error("undefined ratio: averaged SSOP is zero")]
    UndefinedRatio,
}

impl Error {
    pub(crate) fn argument(name: &'static str, detail: impl Into<String>) -> Self {
        Error::Argument {
            name,
            detail: detail.into(),
        }
    }

    pub(crate) fn numerical(context: &'static str, detail: impl Into<String>) -> Self {
        Error::Numerical {
            context,
            detail: detail.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
