use thiserror::Error;

/// Errors produced by the library and surfaced verbatim by the CLI.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("modulus {0} is not prime")]
    NotPrime(u64),

    #[error("modulus {0} is out of range (need 2 <= p < 2^63)")]
    ModulusOutOfRange(u64),

    #[error("field context mismatch: Z_{left} vs Z_{right}")]
    FieldMismatch { left: u64, right: u64 },

    #[error("shape error: {0}")]
    Shape(String),

    #[error("capacity exceeded: {needed} terms needed, cap is {cap}")]
    Capacity { needed: String, cap: usize },

    #[error("characteristic too small: need p > {required}, have p = {p}")]
    Characteristic { required: String, p: u64 },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("partition error: {0}")]
    Partition(String),

    #[error("empty input: {0}")]
    Empty(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn shape(msg: impl Into<String>) -> Error {
    Error::Shape(msg.into())
}

pub(crate) fn precondition(msg: impl Into<String>) -> Error {
    Error::Precondition(msg.into())
}
