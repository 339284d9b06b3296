use thiserror::Error;

/// Errors raised by the library. Failed bound checks are reported as data,
/// never through this type.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("size limit: {0}")]
    Size(String),
    #[error("parity: {0}")]
    Parity(String),
    #[error("domain mismatch: {0}")]
    Domain(String),
    #[error("shape: {0}")]
    Shape(String),
    #[error("contract violated: {0}")]
    Contract(String),
    #[error("incomplete table: {0}")]
    Completeness(String),
    #[error("config: {0}")]
    Config(String),
    #[error("numeric: {0}")]
    Numeric(String),
    #[error("mode: {0}")]
    Mode(String),
    #[error("condition (C2) fails: {0}")]
    ConditionC2(String),
    #[error("condition (C3) fails: {0}")]
    ConditionC3(String),
    #[error("parse: {0}")]
    Parse(String),
    #[error("io: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
