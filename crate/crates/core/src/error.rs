use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("modulus has a zero diagonal entry at position {0}")]
    ZeroModulus(usize),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix does not have full column rank")]
    RankDeficient,

    #[error("input is not reduced: {0}")]
    NotReduced(String),

    #[error("not a Smith form: {0}")]
    NotSmith(String),

    #[error("not a Hermite basis: {0}")]
    NotHermite(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    /// Reported by a randomized engine; the deterministic engines in this
    /// crate never produce it.
    #[error("randomized computation reported FAIL")]
    Fail,

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error::DimensionMismatch(msg.into()))
}
