use thiserror::Error;

use crate::graph::NodeId;

/// Errors raised by graph construction, evaluation and parameter updates.
#[derive(Debug, Error)]
pub enum GraphError {
    #[error("dimension error: {0}")]
    Dimension(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("usage error: {0}")]
    Usage(String),
    #[error("graph contains a cycle through node {0}")]
    Cycle(NodeId),
    #[error("unknown node id {0}")]
    UnknownNode(NodeId),
    #[error("input '{0}' is not bound")]
    UnboundInput(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, GraphError>;
