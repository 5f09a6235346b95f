use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different number fields")]
    FieldMismatch,
    #[error("field `{0}` carries no Galois data")]
    GaloisDataMissing(String),
    #[error("invalid Galois data: {0}")]
    InvalidGaloisData(String),
    #[error("defining polynomial rejected: {0}")]
    InvalidField(String),
    #[error("zero input")]
    ZeroInput,
    #[error("enclosure too wide; refine before calling")]
    NeedsRefinement,
    #[error("divisor enclosure contains zero")]
    UndecidableDivision,
    #[error("embedding index {index} out of range (field has {count})")]
    BadEmbedding { index: usize, count: usize },
    #[error("conjugates of {0} lie outside the declared field")]
    ConjugatesOutsideField(String),
    #[error("tuple violates (P2); partition refused: {0}")]
    PartitionRefused(String),
    #[error("comparison undecided at {0} bits")]
    Undecided(u32),
    #[error("bad input: {0}")]
    BadInput(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
    #[error("config error at `{key}`: {msg}")]
    Config { key: String, msg: String },
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
