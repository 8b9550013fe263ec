use thiserror::Error;

/// Errors returned by the library.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    Singular,
    #[error("requested rank {rank} exceeds {max}")]
    RankTooLarge { rank: usize, max: usize },
    #[error("division by the zero q-polynomial")]
    DivisionByZero,
    #[error("decoding failed: no codeword within rank distance {radius}")]
    Decode { radius: usize },
    #[error("decryption verification failed: {0}")]
    Verify(String),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("malformed encoding: {0}")]
    Malformed(String),
    #[error("truncated input: expected {expected} bytes, got {got}")]
    Truncated { expected: usize, got: usize },
    #[error("unknown parameter set `{0}`")]
    UnknownParameterSet(String),
    #[error("no admissible degree for the support-minors estimate")]
    NoAdmissibleDegree,
}

pub type Result<T> = std::result::Result<T, Error>;
