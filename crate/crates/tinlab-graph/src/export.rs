//! Textual parameter export/import. One line per parameter node, values in
//! full-precision scientific notation so round-trips are bit exact.

use crate::error::{GraphError, Result};
use crate::graph::{Graph, NodeKind};

const HEADER: &str = "tinlab-params v1";

/// Serialize every parameter as `param <node id> <name> <len> <values...>`.
pub fn export_params(graph: &Graph) -> String {
    let mut out = String::from(HEADER);
    out.push('\n');
    for node in graph.nodes() {
        if let NodeKind::Param(meta) = &node.kind {
            let values = graph.param_values(node.id).expect("param node");
            out.push_str(&format!("param {} {} {}", node.id, meta.name, values.len()));
            for v in values {
                out.push_str(&format!(" {:.17e}", v));
            }
            out.push('\n');
        }
    }
    out
}

/// Load parameter values produced by `export_params` into a structurally
/// identical graph. Every parameter must be present exactly once and match
/// by id, name and length.
pub fn import_params(graph: &mut Graph, text: &str) -> Result<()> {
    let mut lines = text.lines().enumerate();
    match lines.next() {
        Some((_, line)) if line.trim() == HEADER => {}
        _ => {
            return Err(GraphError::Parse { line: 1, msg: format!("expected header '{HEADER}'") });
        }
    }
    let mut seen = std::collections::BTreeSet::new();
    for (idx, line) in lines {
        let line_no = idx + 1;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut parts = line.split_whitespace();
        if parts.next() != Some("param") {
            return Err(GraphError::Parse { line: line_no, msg: "expected 'param' record".into() });
        }
        let id: usize = parse_field(parts.next(), line_no, "node id")?;
        let name = parts
            .next()
            .ok_or_else(|| GraphError::Parse { line: line_no, msg: "missing name".into() })?;
        let len: usize = parse_field(parts.next(), line_no, "length")?;
        let values: Vec<f64> = parts
            .map(|tok| {
                tok.parse::<f64>().map_err(|_| GraphError::Parse {
                    line: line_no,
                    msg: format!("bad float '{tok}'"),
                })
            })
            .collect::<Result<_>>()?;
        if values.len() != len {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("declared {len} values, found {}", values.len()),
            });
        }
        let node_id = crate::graph::NodeId(id);
        let meta = graph.param_meta(node_id).map_err(|_| GraphError::Parse {
            line: line_no,
            msg: format!("graph has no parameter node {id}"),
        })?;
        if meta.name != name {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("parameter {id} is named '{}', file says '{name}'", meta.name),
            });
        }
        let dst = graph.param_values_mut(node_id)?;
        if dst.len() != len {
            return Err(GraphError::Parse {
                line: line_no,
                msg: format!("parameter {id} has length {}, file says {len}", dst.len()),
            });
        }
        dst.copy_from_slice(&values);
        seen.insert(id);
    }
    let missing: Vec<String> = graph
        .param_ids()
        .into_iter()
        .filter(|id| !seen.contains(&id.index()))
        .map(|id| id.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(GraphError::Parse {
            line: 0,
            msg: format!("file is missing parameters: {}", missing.join(", ")),
        });
    }
    Ok(())
}

fn parse_field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    tok.and_then(|t| t.parse().ok())
        .ok_or_else(|| GraphError::Parse { line, msg: format!("missing or invalid {what}") })
}
