use thiserror::Error;

/// Errors surfaced by the library. Every variant is a domain error; usage
/// errors are the CLI's concern.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("digit string must not be empty")]
    EmptyString,

    #[error("digit at position {position} is zero; digits must be positive")]
    ZeroDigit { position: usize },

    #[error("value {value} is outside the open interval (0, 1)")]
    OutOfUnitInterval { value: String },

    #[error("interval endpoints must satisfy 0 <= lo <= hi <= 1 (got lo={lo}, hi={hi})")]
    BadInterval { lo: String, hi: String },

    #[error("{what} = {got} exceeds the configured limit {limit}")]
    SizeLimit { what: &'static str, got: String, limit: String },

    #[error("digits must be pairwise distinct (repeated digit {digit})")]
    RepeatedDigit { digit: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("string is not stable: p = {p}, 2q' = {twice_q_prev}")]
    NotStable { p: String, twice_q_prev: String },

    #[error("construction check failed: {0}")]
    VerificationFailed(String),

    #[error("quadrature did not converge within {cap} subdivisions")]
    Quadrature { cap: usize },

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
