use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// An argument lies outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unsupported input: {0}")]
    Unsupported(String),

    /// Dense simulation requested for more spins than the oracle allows.
    #[error("dense oracle limited to N <= {max}, got N = {n}")]
    ResourceGuard { n: u32, max: u32 },

    #[error("operator is not Hermitian (residual {0:e})")]
    NotHermitian(f64),

    #[error("operator is not unitary (residual {0:e})")]
    NotUnitary(f64),

    /// A numeric routine produced a non-finite or inconsistent result.
    #[error("numeric failure: {0}")]
    Numeric(String),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
