use thiserror::Error;

#[derive(Debug, Error)]
pub enum DataError {
    #[error("format error: {0}")]
    Format(String),
    #[error("row {row}: {msg}")]
    Row { row: usize, msg: String },
    #[error("configuration error: {0}")]
    Config(String),
    #[error("range error: {0}")]
    Range(String),
    #[error(transparent)]
    Oracle(#[from] tinlab_oracles::OracleError),
}

pub type Result<T> = std::result::Result<T, DataError>;
