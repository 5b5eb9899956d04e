//! Minimal reverse-mode automatic differentiation over the operator set that
//! classical technical indicators decompose into: weighted sums, subtraction,
//! bias-regularized division, clipping, 1-D min/max pooling, mean, mean
//! absolute deviation and pointwise activations.
//!
//! A [`Graph`] is a DAG of these operators plus input and parameter leaf
//! nodes. `forward` evaluates in topological order, `backward` accumulates
//! gradients into trainable parameters, and [`optim`] applies SGD or Adam
//! updates. [`gradcheck`] verifies the whole thing against central finite
//! differences.
//!
//! Graphs are plain values: one graph is used from a single thread at a time,
//! but graphs and tensors move freely between threads.

mod error;
mod export;
pub mod gradcheck;
mod graph;
pub mod optim;
mod tensor;

pub use error::{GraphError, Result};
pub use export::{export_params, import_params};
pub use graph::{
    Activation, GradMap, Graph, InputRef, Node, NodeId, NodeKind, OpKind, ParamMeta,
};
pub use tensor::Tensor;
