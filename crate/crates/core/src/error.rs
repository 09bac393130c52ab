use thiserror::Error;

/// Errors produced by the region, representation and oracle routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("unsupported partition {0}")]
    UnsupportedPartition(String),

    #[error("degenerate input: {0}")]
    DegenerateInput(String),

    #[error("constraints infeasible (best residual {residual:.3e})")]
    Infeasible { residual: f64 },

    #[error("unsupported size n = {0}")]
    UnsupportedSize(usize),

    #[error("verification mismatch: {0}")]
    VerificationMismatch(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::InvalidArgument(msg.into()))
}
