use thiserror::Error;

/// Errors produced by the rulefuse library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dataset is empty")]
    EmptyDataset,

    #[error("source rule set list is empty")]
    EmptySources,

    #[error("schema mismatch: {0}")]
    SchemaMismatch(String),

    #[error("length mismatch: {0}")]
    LengthMismatch(String),

    #[error("invalid config field `{field}`: {why}")]
    InvalidConfig { field: &'static str, why: String },

    #[error("invalid value: {0}")]
    InvalidValue(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
