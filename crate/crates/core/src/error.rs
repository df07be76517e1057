use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("non-finite input value {0}")]
    NonFinite(f64),

    #[error("invalid membership function: {0}")]
    InvalidMembership(String),

    #[error("invalid curve sampling: {0}")]
    InvalidSampling(String),

    #[error("invalid variable spec `{name}`: {reason}")]
    InvalidSpec { name: String, reason: String },

    #[error("record `{record}` has no value for column `{column}`")]
    MissingColumn { record: String, column: String },

    #[error("record `{record}`: column `{column}` has invalid value {value}")]
    InvalidMeasurement {
        record: String,
        column: String,
        value: f64,
    },

    #[error("invalid fuzzy soft set: {0}")]
    InvalidSet(String),

    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unknown parameter label `{0}`")]
    UnknownParameter(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{count} parameters exceed the reduction cap of {cap}")]
    TooManyParameters { count: usize, cap: usize },

    #[error("table parse error at line {line}: {reason}")]
    Table { line: u64, reason: String },

    #[error("csv error at row {row}, column `{column}`: {reason}")]
    Data {
        row: u64,
        column: String,
        reason: String,
    },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("unknown sample `{0}`")]
    UnknownSample(String),

    #[error("invalid comparison table: {0}")]
    InvalidComparison(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
