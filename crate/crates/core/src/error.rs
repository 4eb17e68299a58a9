use thiserror::Error;

/// Errors raised by ring, module and certificate operations.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown basis element `{0}`")]
    UnknownBasis(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("invalid input: {0}")]
    Invalid(String),
    #[error("refused: {0}")]
    Refused(String),
    #[error("`{0}` lies beyond the depth covered by the divisibility certificate")]
    BeyondCertificate(String),
    #[error("recursion guard tripped while {0}")]
    RecursionGuard(&'static str),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::Invalid(msg.into())
}
