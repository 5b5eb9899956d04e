use thiserror::Error;

#[derive(Debug, Error)]
pub enum NetError {
    #[error("configuration error: {0}")]
    Config(String),
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error(transparent)]
    Graph(#[from] tinlab_graph::GraphError),
    #[error(transparent)]
    Oracle(#[from] tinlab_oracles::OracleError),
}

pub type Result<T> = std::result::Result<T, NetError>;
