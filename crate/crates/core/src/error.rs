use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("non-finite value: {0}")]
    Numeric(String),

    #[error("length mismatch: {left} vs {right}")]
    Length { left: usize, right: usize },

    #[error("empty input: {0}")]
    EmptyInput(&'static str),

    #[error("correlation undefined: rank series is constant")]
    DegenerateCorrelation,

    #[error("test undefined: {0}")]
    DegenerateTest(&'static str),

    #[error("exact enumeration over n = {n} exceeds the budget of {max}")]
    BudgetExceeded { n: usize, max: usize },

    #[error("format error: {0}")]
    Format(String),

    #[error("out of range: {0}")]
    Range(String),

    #[error("unknown label: {0}")]
    Label(String),

    #[error("integrity check failed for {path}: expected {expected}, found {found}")]
    Integrity {
        path: String,
        expected: String,
        found: String,
    },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    /// Process exit code for the CLI: 2 for I/O failures, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io(_) => 2,
            _ => 1,
        }
    }
}
