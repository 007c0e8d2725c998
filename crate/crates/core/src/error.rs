use std::io;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("training corpus is empty after normalization")]
    EmptyCorpus,
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("text yields no n-grams")]
    EmptyText,
    #[error("profile set is empty")]
    EmptyProfileSet,
    #[error("profiles disagree on n-gram orders: {0}")]
    MismatchedOrders(String),
    #[error("cannot split an empty token sequence")]
    EmptyTokens,
    #[error("invalid language tag {0:?}")]
    InvalidTag(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("line {line}: missing field {field:?}")]
    MissingField { line: usize, field: String },
    #[error("requested {requested} documents but the population has {available}")]
    InsufficientPopulation { requested: usize, available: usize },
    #[error("input is empty")]
    EmptyInput,
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("expected counts must be strictly positive")]
    ZeroExpected,
    #[error("argument out of domain: {0}")]
    Domain(String),
    #[error("invalid synthetic corpus spec: {0}")]
    InvalidSpec(String),
    #[error("unsupported profile version {found} (expected {expected})")]
    UnsupportedVersion { found: u32, expected: u32 },
    #[error("malformed profile: {0}")]
    MalformedProfile(String),
    #[error(transparent)]
    Io(#[from] io::Error),
}
