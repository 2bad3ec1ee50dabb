use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid dimension d = {0}: {1}")]
    InvalidDimension(i64, &'static str),
    #[error("operation requires even dimension, got d = {0}")]
    UnsupportedParity(usize),
    #[error("invalid quantum numbers: {0}")]
    InvalidQuantumNumbers(String),
    #[error("unsupported channel: {0}")]
    UnsupportedChannel(String),
    #[error("potential kind {kind} is incompatible with representation {rep}")]
    IncompatibleKind { kind: String, rep: String },
    #[error("shape mismatch: {0}")]
    Mismatch(String),
    #[error("function is singular at the origin")]
    SingularPoint,
    #[error("pole in hypergeometric series: b = {0}")]
    Pole(String),
    #[error("argument outside the domain: {0}")]
    Domain(String),
    #[error("no convergence: {0}")]
    Convergence(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
