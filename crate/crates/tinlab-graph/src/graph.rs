//! Compute graph: a DAG of the operators that indicator topologies are made
//! of, with reverse-mode gradient accumulation into parameter nodes.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{GraphError, Result};
use crate::tensor::Tensor;

/// Identifier of a node inside one graph. Ids are dense and never reused.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct NodeId(pub(crate) usize);

impl NodeId {
    pub fn index(self) -> usize {
        self.0
    }
}

impl fmt::Display for NodeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Activation selector for `OpKind::Activation`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Identity,
    Relu,
}

/// The closed operator set. Nothing else can appear in a graph.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum OpKind {
    /// Dot product of the concatenated value inputs with a weight parameter.
    /// The last input ref must cover a parameter node in full.
    WeightedSum,
    /// Elementwise `a - b` over exactly two same-length inputs.
    Subtract,
    /// Elementwise `num / (den + eps)`; `den` must be nonnegative.
    DivBias { eps: f64 },
    /// Elementwise clamp to `[lo, hi]`.
    Clip { lo: f64, hi: f64 },
    /// Sliding-window minimum, stride 1.
    MinPool1d { window: usize },
    /// Sliding-window maximum, stride 1.
    MaxPool1d { window: usize },
    /// Arithmetic mean of the concatenated inputs.
    Mean,
    /// Mean absolute deviation around the mean of the concatenated inputs.
    Mad,
    /// Elementwise activation.
    Activation(Activation),
}

impl OpKind {
    pub fn name(&self) -> &'static str {
        match self {
            OpKind::WeightedSum => "weighted_sum",
            OpKind::Subtract => "subtract",
            OpKind::DivBias { .. } => "div_bias",
            OpKind::Clip { .. } => "clip",
            OpKind::MinPool1d { .. } => "min_pool1d",
            OpKind::MaxPool1d { .. } => "max_pool1d",
            OpKind::Mean => "mean",
            OpKind::Mad => "mad",
            OpKind::Activation(_) => "activation",
        }
    }
}

/// A window into another node's output. `offset..offset+len` selects which
/// entries the consuming operator reads, which is how the same price input
/// feeds moving-average layers at several time offsets.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct InputRef {
    pub node: NodeId,
    pub offset: usize,
    pub len: usize,
}

impl InputRef {
    pub fn new(node: NodeId, offset: usize, len: usize) -> Self {
        Self { node, offset, len }
    }
}

/// Optimizer bookkeeping attached to a parameter node. The tensor itself
/// lives in the graph's value arena.
#[derive(Debug, Clone, Default)]
pub struct ParamMeta {
    pub name: String,
    pub trainable: bool,
    pub m1: Option<Vec<f64>>,
    pub m2: Option<Vec<f64>>,
    pub step_count: u64,
}

#[derive(Debug, Clone)]
pub enum NodeKind {
    Input { name: String },
    Param(ParamMeta),
    Op(OpKind),
}

#[derive(Debug, Clone)]
pub struct Node {
    pub id: NodeId,
    pub kind: NodeKind,
    pub inputs: Vec<InputRef>,
    pub out_len: usize,
}

/// Gradient of every trainable parameter, keyed by parameter node id.
pub type GradMap = BTreeMap<NodeId, Vec<f64>>;

#[derive(Debug, Clone, Default)]
pub struct Graph {
    nodes: Vec<Node>,
    values: Vec<Tensor>,
    topo: Vec<usize>,
    inputs: BTreeMap<String, usize>,
    params: Vec<usize>,
    bound: Vec<bool>,
    forward_valid: bool,
    scratch_a: Vec<f64>,
    scratch_b: Vec<f64>,
}

impl Graph {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn node(&self, id: NodeId) -> Result<&Node> {
        self.nodes.get(id.0).ok_or(GraphError::UnknownNode(id))
    }

    pub fn nodes(&self) -> impl Iterator<Item = &Node> {
        self.nodes.iter()
    }

    pub fn out_len(&self, id: NodeId) -> Result<usize> {
        Ok(self.node(id)?.out_len)
    }

    /// Reference covering a node's whole output.
    pub fn full(&self, id: NodeId) -> Result<InputRef> {
        Ok(InputRef::new(id, 0, self.out_len(id)?))
    }

    /// Reference covering `offset..offset+len` of a node's output.
    pub fn slice(&self, id: NodeId, offset: usize, len: usize) -> Result<InputRef> {
        let total = self.out_len(id)?;
        if len == 0 || offset + len > total {
            return Err(GraphError::Dimension(format!(
                "slice {}..{} out of range for node {} of length {}",
                offset,
                offset + len,
                id,
                total
            )));
        }
        Ok(InputRef::new(id, offset, len))
    }

    pub fn input_names(&self) -> impl Iterator<Item = &str> {
        self.inputs.keys().map(String::as_str)
    }

    pub fn input_id(&self, name: &str) -> Option<NodeId> {
        self.inputs.get(name).map(|&i| NodeId(i))
    }

    pub fn param_ids(&self) -> Vec<NodeId> {
        self.params.iter().map(|&i| NodeId(i)).collect()
    }

    pub fn param_meta(&self, id: NodeId) -> Result<&ParamMeta> {
        match &self.node(id)?.kind {
            NodeKind::Param(meta) => Ok(meta),
            _ => Err(GraphError::Usage(format!("node {id} is not a parameter"))),
        }
    }

    pub(crate) fn param_meta_mut(&mut self, id: NodeId) -> Result<&mut ParamMeta> {
        match &mut self.nodes.get_mut(id.0).ok_or(GraphError::UnknownNode(id))?.kind {
            NodeKind::Param(meta) => Ok(meta),
            _ => Err(GraphError::Usage(format!("node {id} is not a parameter"))),
        }
    }

    pub fn param_values(&self, id: NodeId) -> Result<&[f64]> {
        self.param_meta(id)?;
        Ok(self.values[id.0].values())
    }

    /// Mutable access to a parameter's values. Invalidates any previous
    /// forward pass.
    pub fn param_values_mut(&mut self, id: NodeId) -> Result<&mut [f64]> {
        self.param_meta(id)?;
        self.forward_valid = false;
        Ok(self.values[id.0].values_mut())
    }

    /// True once any optimizer step has touched a trainable parameter.
    pub fn any_param_stepped(&self) -> bool {
        self.params.iter().any(|&i| match &self.nodes[i].kind {
            NodeKind::Param(meta) => meta.step_count > 0,
            _ => false,
        })
    }

    pub fn add_input(&mut self, name: &str, len: usize) -> Result<NodeId> {
        if len == 0 {
            return Err(GraphError::Dimension("input length must be >= 1".into()));
        }
        if self.inputs.contains_key(name) {
            return Err(GraphError::Config(format!("duplicate input name '{name}'")));
        }
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            id,
            kind: NodeKind::Input { name: name.to_string() },
            inputs: Vec::new(),
            out_len: len,
        });
        self.values.push(Tensor::zeros(len));
        self.bound.push(false);
        self.inputs.insert(name.to_string(), id.0);
        self.topo.push(id.0);
        self.forward_valid = false;
        Ok(id)
    }

    pub fn add_param(&mut self, name: &str, values: Vec<f64>, trainable: bool) -> Result<NodeId> {
        if values.is_empty() {
            return Err(GraphError::Dimension("parameter must be non-empty".into()));
        }
        if name.is_empty() || name.contains(char::is_whitespace) {
            return Err(GraphError::Config(format!("invalid parameter name '{name}'")));
        }
        if self.params.iter().any(|&i| matches!(&self.nodes[i].kind, NodeKind::Param(m) if m.name == name)) {
            return Err(GraphError::Config(format!("duplicate parameter name '{name}'")));
        }
        let tensor = Tensor::vector(values)?;
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node {
            id,
            kind: NodeKind::Param(ParamMeta {
                name: name.to_string(),
                trainable,
                m1: None,
                m2: None,
                step_count: 0,
            }),
            inputs: Vec::new(),
            out_len: tensor.len(),
        });
        self.values.push(tensor);
        self.bound.push(true);
        self.params.push(id.0);
        self.topo.push(id.0);
        self.forward_valid = false;
        Ok(id)
    }

    /// Append an operator node. Inputs may only reference existing nodes, so
    /// insertion alone can never create a cycle; `rewire` is the mutation
    /// that can, and it is checked there.
    pub fn add_op(&mut self, kind: OpKind, inputs: Vec<InputRef>) -> Result<NodeId> {
        let out_len = self.validate_op(&kind, &inputs)?;
        let id = NodeId(self.nodes.len());
        self.nodes.push(Node { id, kind: NodeKind::Op(kind), inputs, out_len });
        self.values.push(Tensor::zeros(out_len));
        self.bound.push(true);
        self.topo.push(id.0);
        self.forward_valid = false;
        Ok(id)
    }

    /// Replace a node's input wiring, recomputing the topological order.
    /// Rejects unknown ids, shape changes and cycles.
    pub fn rewire(&mut self, id: NodeId, inputs: Vec<InputRef>) -> Result<()> {
        let kind = match &self.node(id)?.kind {
            NodeKind::Op(kind) => *kind,
            _ => return Err(GraphError::Usage(format!("node {id} is not an operator"))),
        };
        let out_len = self.validate_op(&kind, &inputs)?;
        if out_len != self.nodes[id.0].out_len {
            return Err(GraphError::Dimension(format!(
                "rewiring node {id} would change its output length"
            )));
        }
        let old = std::mem::replace(&mut self.nodes[id.0].inputs, inputs);
        match self.recompute_topo() {
            Ok(()) => {
                self.forward_valid = false;
                Ok(())
            }
            Err(err) => {
                self.nodes[id.0].inputs = old;
                self.recompute_topo().expect("previous wiring was acyclic");
                Err(err)
            }
        }
    }

    fn validate_ref(&self, r: &InputRef) -> Result<()> {
        let node = self.node(r.node)?;
        if r.len == 0 || r.offset + r.len > node.out_len {
            return Err(GraphError::Dimension(format!(
                "reference {}..{} out of range for node {} of length {}",
                r.offset,
                r.offset + r.len,
                r.node,
                node.out_len
            )));
        }
        Ok(())
    }

    fn validate_op(&self, kind: &OpKind, inputs: &[InputRef]) -> Result<usize> {
        for r in inputs {
            self.validate_ref(r)?;
        }
        let total = |refs: &[InputRef]| refs.iter().map(|r| r.len).sum::<usize>();
        match kind {
            OpKind::WeightedSum => {
                if inputs.len() < 2 {
                    return Err(GraphError::Dimension(
                        "weighted_sum needs at least one value input and a weight parameter".into(),
                    ));
                }
                let (values, weight) = inputs.split_at(inputs.len() - 1);
                let w = &weight[0];
                match &self.node(w.node)?.kind {
                    NodeKind::Param(_) => {}
                    _ => {
                        return Err(GraphError::Usage(
                            "last weighted_sum input must reference a parameter node".into(),
                        ))
                    }
                }
                if w.offset != 0 || w.len != self.nodes[w.node.0].out_len {
                    return Err(GraphError::Usage(
                        "weighted_sum must reference its weight parameter in full".into(),
                    ));
                }
                if total(values) != w.len {
                    return Err(GraphError::Dimension(format!(
                        "weighted_sum has {} values but {} weights",
                        total(values),
                        w.len
                    )));
                }
                Ok(1)
            }
            OpKind::Subtract => {
                if inputs.len() != 2 || inputs[0].len != inputs[1].len {
                    return Err(GraphError::Dimension(
                        "subtract needs exactly two same-length inputs".into(),
                    ));
                }
                Ok(inputs[0].len)
            }
            OpKind::DivBias { eps } => {
                if *eps <= 0.0 || !eps.is_finite() {
                    return Err(GraphError::Config("div_bias eps must be positive".into()));
                }
                if inputs.len() != 2 || inputs[0].len != inputs[1].len {
                    return Err(GraphError::Dimension(
                        "div_bias needs exactly two same-length inputs".into(),
                    ));
                }
                Ok(inputs[0].len)
            }
            OpKind::Clip { lo, hi } => {
                if !(lo < hi) {
                    return Err(GraphError::Config(format!(
                        "clip bounds must satisfy lo < hi, got [{lo}, {hi}]"
                    )));
                }
                if inputs.is_empty() {
                    return Err(GraphError::Dimension("clip needs an input".into()));
                }
                Ok(total(inputs))
            }
            OpKind::MinPool1d { window } | OpKind::MaxPool1d { window } => {
                let n = total(inputs);
                if inputs.is_empty() || n == 0 {
                    return Err(GraphError::Dimension("pooling needs an input".into()));
                }
                if *window == 0 || *window > n {
                    return Err(GraphError::Dimension(format!(
                        "pool window {window} out of range for input of length {n}"
                    )));
                }
                Ok(n - window + 1)
            }
            OpKind::Mean | OpKind::Mad => {
                if inputs.is_empty() || total(inputs) == 0 {
                    return Err(GraphError::Dimension("mean/mad need a non-empty input".into()));
                }
                Ok(1)
            }
            OpKind::Activation(_) => {
                if inputs.is_empty() {
                    return Err(GraphError::Dimension("activation needs an input".into()));
                }
                Ok(total(inputs))
            }
        }
    }

    // Convenience constructors mirroring the operator set.

    pub fn weighted_sum(&mut self, values: &[InputRef], weights: NodeId) -> Result<NodeId> {
        let mut inputs = values.to_vec();
        inputs.push(self.full(weights)?);
        self.add_op(OpKind::WeightedSum, inputs)
    }

    pub fn subtract(&mut self, a: InputRef, b: InputRef) -> Result<NodeId> {
        self.add_op(OpKind::Subtract, vec![a, b])
    }

    pub fn div_bias(&mut self, num: InputRef, den: InputRef, eps: f64) -> Result<NodeId> {
        self.add_op(OpKind::DivBias { eps }, vec![num, den])
    }

    pub fn clip(&mut self, x: InputRef, lo: f64, hi: f64) -> Result<NodeId> {
        self.add_op(OpKind::Clip { lo, hi }, vec![x])
    }

    pub fn min_pool1d(&mut self, x: InputRef, window: usize) -> Result<NodeId> {
        self.add_op(OpKind::MinPool1d { window }, vec![x])
    }

    pub fn max_pool1d(&mut self, x: InputRef, window: usize) -> Result<NodeId> {
        self.add_op(OpKind::MaxPool1d { window }, vec![x])
    }

    pub fn mean(&mut self, xs: &[InputRef]) -> Result<NodeId> {
        self.add_op(OpKind::Mean, xs.to_vec())
    }

    pub fn mad(&mut self, xs: &[InputRef]) -> Result<NodeId> {
        self.add_op(OpKind::Mad, xs.to_vec())
    }

    pub fn activation(&mut self, x: InputRef, kind: Activation) -> Result<NodeId> {
        self.add_op(OpKind::Activation(kind), vec![x])
    }

    /// Kahn's algorithm over the node-level dependency edges.
    fn recompute_topo(&mut self) -> Result<()> {
        let n = self.nodes.len();
        let mut indegree = vec![0usize; n];
        let mut dependents: Vec<Vec<usize>> = vec![Vec::new(); n];
        for node in &self.nodes {
            let mut seen: Vec<usize> = Vec::new();
            for r in &node.inputs {
                if r.node.0 == node.id.0 {
                    return Err(GraphError::Cycle(node.id));
                }
                if !seen.contains(&r.node.0) {
                    seen.push(r.node.0);
                    indegree[node.id.0] += 1;
                    dependents[r.node.0].push(node.id.0);
                }
            }
        }
        let mut queue: std::collections::VecDeque<usize> =
            (0..n).filter(|&i| indegree[i] == 0).collect();
        let mut order = Vec::with_capacity(n);
        while let Some(i) = queue.pop_front() {
            order.push(i);
            for &d in &dependents[i] {
                indegree[d] -= 1;
                if indegree[d] == 0 {
                    queue.push_back(d);
                }
            }
        }
        if order.len() != n {
            let stuck = (0..n).find(|&i| indegree[i] > 0).unwrap_or(0);
            return Err(GraphError::Cycle(NodeId(stuck)));
        }
        self.topo = order;
        Ok(())
    }

    pub fn topo_order(&self) -> Vec<NodeId> {
        self.topo.iter().map(|&i| NodeId(i)).collect()
    }

    /// Bind an input slot to concrete values. Lengths must match the slot.
    pub fn bind(&mut self, name: &str, values: &[f64]) -> Result<()> {
        let idx = *self
            .inputs
            .get(name)
            .ok_or_else(|| GraphError::Usage(format!("no input named '{name}'")))?;
        if values.len() != self.nodes[idx].out_len {
            return Err(GraphError::Dimension(format!(
                "input '{}' expects {} values, got {}",
                name,
                self.nodes[idx].out_len,
                values.len()
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(GraphError::Domain(format!("input '{name}' holds a non-finite value")));
        }
        self.values[idx].set_values(values);
        self.bound[idx] = true;
        self.forward_valid = false;
        Ok(())
    }

    /// Evaluate every operator in topological order.
    pub fn forward(&mut self) -> Result<()> {
        for (name, &idx) in &self.inputs {
            if !self.bound[idx] {
                return Err(GraphError::UnboundInput(name.clone()));
            }
        }
        let mut scratch = std::mem::take(&mut self.scratch_a);
        let order = self.topo.clone();
        for i in order {
            if !matches!(self.nodes[i].kind, NodeKind::Op(_)) {
                continue;
            }
            let mut out = std::mem::take(&mut self.values[i]);
            let result = self.eval_op(i, &mut out, &mut scratch);
            self.values[i] = out;
            result?;
            if self.values[i].values().iter().any(|v| !v.is_finite()) {
                self.scratch_a = scratch;
                return Err(GraphError::Domain(format!(
                    "node {} produced a non-finite value",
                    i
                )));
            }
        }
        self.scratch_a = scratch;
        self.forward_valid = true;
        Ok(())
    }

    /// Output of a node after `forward`.
    pub fn value(&self, id: NodeId) -> Result<&[f64]> {
        if !self.forward_valid {
            return Err(GraphError::Usage("graph has no valid forward pass".into()));
        }
        self.node(id)?;
        Ok(self.values[id.0].values())
    }

    pub fn value_scalar(&self, id: NodeId) -> Result<f64> {
        let v = self.value(id)?;
        if v.len() != 1 {
            return Err(GraphError::Usage(format!("node {id} is not scalar")));
        }
        Ok(v[0])
    }

    fn read(&self, r: &InputRef) -> &[f64] {
        &self.values[r.node.0].values()[r.offset..r.offset + r.len]
    }

    fn concat_into(&self, refs: &[InputRef], out: &mut Vec<f64>) {
        out.clear();
        for r in refs {
            out.extend_from_slice(self.read(r));
        }
    }

    fn eval_op(&self, idx: usize, out: &mut Tensor, scratch: &mut Vec<f64>) -> Result<()> {
        let node = &self.nodes[idx];
        let kind = match &node.kind {
            NodeKind::Op(kind) => *kind,
            _ => unreachable!("eval_op called on a non-operator node"),
        };
        let dst = out.values_mut();
        match kind {
            OpKind::WeightedSum => {
                let (values, weight) = node.inputs.split_at(node.inputs.len() - 1);
                let w = self.read(&weight[0]);
                let mut acc = 0.0;
                let mut k = 0;
                for r in values {
                    for &x in self.read(r) {
                        acc += w[k] * x;
                        k += 1;
                    }
                }
                dst[0] = acc;
            }
            OpKind::Subtract => {
                let a = self.read(&node.inputs[0]);
                let b = self.read(&node.inputs[1]);
                for i in 0..a.len() {
                    dst[i] = a[i] - b[i];
                }
            }
            OpKind::DivBias { eps } => {
                let num = self.read(&node.inputs[0]);
                let den = self.read(&node.inputs[1]);
                for i in 0..num.len() {
                    if den[i] < 0.0 {
                        return Err(GraphError::Domain(format!(
                            "div_bias denominator is negative ({}) at node {}",
                            den[i], idx
                        )));
                    }
                    dst[i] = num[i] / (den[i] + eps);
                }
            }
            OpKind::Clip { lo, hi } => {
                let mut k = 0;
                for r in &node.inputs {
                    for &x in self.read(r) {
                        dst[k] = x.clamp(lo, hi);
                        k += 1;
                    }
                }
            }
            OpKind::MinPool1d { window } => {
                self.concat_into(&node.inputs, scratch);
                for (j, out_v) in dst.iter_mut().enumerate() {
                    let mut best = scratch[j];
                    for &x in &scratch[j + 1..j + window] {
                        if x < best {
                            best = x;
                        }
                    }
                    *out_v = best;
                }
            }
            OpKind::MaxPool1d { window } => {
                self.concat_into(&node.inputs, scratch);
                for (j, out_v) in dst.iter_mut().enumerate() {
                    let mut best = scratch[j];
                    for &x in &scratch[j + 1..j + window] {
                        if x > best {
                            best = x;
                        }
                    }
                    *out_v = best;
                }
            }
            OpKind::Mean => {
                let mut acc = 0.0;
                let mut n = 0usize;
                for r in &node.inputs {
                    for &x in self.read(r) {
                        acc += x;
                        n += 1;
                    }
                }
                dst[0] = acc / n as f64;
            }
            OpKind::Mad => {
                self.concat_into(&node.inputs, scratch);
                let n = scratch.len() as f64;
                let mean = scratch.iter().sum::<f64>() / n;
                dst[0] = scratch.iter().map(|&x| (x - mean).abs()).sum::<f64>() / n;
            }
            OpKind::Activation(act) => {
                let mut k = 0;
                for r in &node.inputs {
                    for &x in self.read(r) {
                        dst[k] = match act {
                            Activation::Identity => x,
                            Activation::Relu => x.max(0.0),
                        };
                        k += 1;
                    }
                }
            }
        }
        Ok(())
    }

    /// Reverse pass from `output`, seeded with `seed`. Returns gradients of
    /// every trainable parameter; non-trainable gradients are discarded.
    pub fn backward(&mut self, output: NodeId, seed: &[f64]) -> Result<GradMap> {
        if !self.forward_valid {
            return Err(GraphError::Usage(
                "backward requires a forward pass on the current bindings".into(),
            ));
        }
        let out_len = self.out_len(output)?;
        if seed.len() != out_len {
            return Err(GraphError::Dimension(format!(
                "seed length {} does not match output length {}",
                seed.len(),
                out_len
            )));
        }
        for t in &mut self.values {
            t.reset_grad();
        }
        self.values[output.0].grad_mut().copy_from_slice(seed);

        let mut scratch_a = std::mem::take(&mut self.scratch_a);
        let mut scratch_b = std::mem::take(&mut self.scratch_b);
        let order = self.topo.clone();
        for &i in order.iter().rev() {
            if matches!(self.nodes[i].kind, NodeKind::Op(_)) {
                let upstream = self.values[i].take_grad().expect("grad was reset");
                self.prop_op(i, &upstream, &mut scratch_a, &mut scratch_b);
                self.values[i].put_grad(upstream);
            }
        }
        self.scratch_a = scratch_a;
        self.scratch_b = scratch_b;

        let mut grads = GradMap::new();
        for &p in &self.params {
            if let NodeKind::Param(meta) = &self.nodes[p].kind {
                if meta.trainable {
                    grads.insert(NodeId(p), self.values[p].grad().expect("grad was reset").to_vec());
                }
            }
        }
        Ok(grads)
    }

    /// Gradient buffer of a node after `backward` (mainly for inspection).
    pub fn grad(&self, id: NodeId) -> Result<Option<&[f64]>> {
        self.node(id)?;
        Ok(self.values[id.0].grad())
    }

    fn add_grad(&mut self, r: &InputRef, src: &[f64]) {
        let g = self.values[r.node.0].grad_mut();
        for (i, &v) in src.iter().enumerate() {
            g[r.offset + i] += v;
        }
    }

    fn add_grad_at(&mut self, r: &InputRef, inner: usize, v: f64) {
        self.values[r.node.0].grad_mut()[r.offset + inner] += v;
    }

    fn prop_op(&mut self, idx: usize, upstream: &[f64], sa: &mut Vec<f64>, sb: &mut Vec<f64>) {
        let node_inputs = self.nodes[idx].inputs.clone();
        let kind = match &self.nodes[idx].kind {
            NodeKind::Op(kind) => *kind,
            _ => unreachable!(),
        };
        match kind {
            OpKind::WeightedSum => {
                let g = upstream[0];
                if g == 0.0 {
                    return;
                }
                let (values, weight) = node_inputs.split_at(node_inputs.len() - 1);
                let wref = weight[0];
                sa.clear();
                sa.extend_from_slice(self.read(&wref)); // weights
                self.concat_into(values, sb); // concatenated inputs
                let mut k = 0;
                for r in values {
                    for inner in 0..r.len {
                        self.add_grad_at(r, inner, g * sa[k]);
                        k += 1;
                    }
                }
                let gw = self.values[wref.node.0].grad_mut();
                for (i, &x) in sb.iter().enumerate() {
                    gw[i] += g * x;
                }
            }
            OpKind::Subtract => {
                self.add_grad(&node_inputs[0], upstream);
                sa.clear();
                sa.extend(upstream.iter().map(|&g| -g));
                self.add_grad(&node_inputs[1], sa);
            }
            OpKind::DivBias { eps } => {
                sa.clear();
                sa.extend_from_slice(self.read(&node_inputs[0])); // num
                sb.clear();
                sb.extend_from_slice(self.read(&node_inputs[1])); // den
                for i in 0..upstream.len() {
                    let d = sb[i] + eps;
                    self.add_grad_at(&node_inputs[0], i, upstream[i] / d);
                    self.add_grad_at(&node_inputs[1], i, -upstream[i] * sa[i] / (d * d));
                }
            }
            OpKind::Clip { lo, hi } => {
                let mut k = 0;
                for r in &node_inputs {
                    sa.clear();
                    sa.extend_from_slice(self.read(r));
                    for (inner, &x) in sa.iter().enumerate() {
                        if x > lo && x < hi {
                            self.add_grad_at(r, inner, upstream[k]);
                        }
                        k += 1;
                    }
                }
            }
            OpKind::MinPool1d { window } | OpKind::MaxPool1d { window } => {
                let is_min = matches!(kind, OpKind::MinPool1d { .. });
                self.concat_into(&node_inputs, sa);
                // Ties route to the first index attaining the extremum.
                for (j, &g) in upstream.iter().enumerate() {
                    if g == 0.0 {
                        continue;
                    }
                    let mut arg = j;
                    for t in j + 1..j + window {
                        let better = if is_min { sa[t] < sa[arg] } else { sa[t] > sa[arg] };
                        if better {
                            arg = t;
                        }
                    }
                    let (r, inner) = locate(&node_inputs, arg);
                    self.add_grad_at(&r, inner, g);
                }
            }
            OpKind::Mean => {
                let n: usize = node_inputs.iter().map(|r| r.len).sum();
                let g = upstream[0] / n as f64;
                for r in &node_inputs {
                    for inner in 0..r.len {
                        self.add_grad_at(r, inner, g);
                    }
                }
            }
            OpKind::Mad => {
                self.concat_into(&node_inputs, sa);
                let n = sa.len() as f64;
                let mean = sa.iter().sum::<f64>() / n;
                // sign(0) = 0 keeps the subgradient symmetric at kinks.
                let signs: &mut Vec<f64> = sb;
                signs.clear();
                signs.extend(sa.iter().map(|&x| {
                    if x > mean {
                        1.0
                    } else if x < mean {
                        -1.0
                    } else {
                        0.0
                    }
                }));
                let sign_mean = signs.iter().sum::<f64>() / n;
                let g = upstream[0];
                let mut k = 0;
                for r in &node_inputs {
                    for inner in 0..r.len {
                        self.add_grad_at(r, inner, g * (signs[k] - sign_mean) / n);
                        k += 1;
                    }
                }
            }
            OpKind::Activation(act) => {
                let mut k = 0;
                for r in &node_inputs {
                    sa.clear();
                    sa.extend_from_slice(self.read(r));
                    for (inner, &x) in sa.iter().enumerate() {
                        let pass = match act {
                            Activation::Identity => true,
                            Activation::Relu => x > 0.0,
                        };
                        if pass {
                            self.add_grad_at(r, inner, upstream[k]);
                        }
                        k += 1;
                    }
                }
            }
        }
    }
}

/// Map a position in the concatenation of `refs` back to (ref, inner index).
fn locate(refs: &[InputRef], pos: usize) -> (InputRef, usize) {
    let mut k = pos;
    for r in refs {
        if k < r.len {
            return (*r, k);
        }
        k -= r.len;
    }
    unreachable!("position {pos} out of range");
}
