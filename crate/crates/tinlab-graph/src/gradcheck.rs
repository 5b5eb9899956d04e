//! Central-difference gradient checking, plus a seeded sweep that exercises
//! every operator kind on small random graphs.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{GraphError, Result};
use crate::graph::{Activation, Graph, NodeId};

#[derive(Debug, Clone, Copy)]
pub struct WorstEntry {
    pub param: NodeId,
    pub index: usize,
    pub analytic: f64,
    pub numeric: f64,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct GradCheckReport {
    pub max_rel_err: f64,
    pub entries_checked: usize,
    pub worst: Option<WorstEntry>,
}

/// Compare `backward` against central differences for every entry of every
/// trainable parameter. The graph output must be scalar and all inputs must
/// already be bound.
///
/// Relative error uses the denominator `max(|analytic|, |numeric|, 1e-8)`.
pub fn grad_check(graph: &mut Graph, output: NodeId, h: f64) -> Result<GradCheckReport> {
    if !(h > 0.0) {
        return Err(GraphError::Config("perturbation h must be positive".into()));
    }
    if graph.out_len(output)? != 1 {
        return Err(GraphError::Usage("grad_check requires a scalar output".into()));
    }
    graph.forward()?;
    let analytic = graph.backward(output, &[1.0])?;

    let mut report = GradCheckReport::default();
    for (&param, grad) in &analytic {
        for i in 0..grad.len() {
            let orig = graph.param_values(param)?[i];
            graph.param_values_mut(param)?[i] = orig + h;
            graph.forward()?;
            let f_plus = graph.value_scalar(output)?;
            graph.param_values_mut(param)?[i] = orig - h;
            graph.forward()?;
            let f_minus = graph.value_scalar(output)?;
            graph.param_values_mut(param)?[i] = orig;

            let numeric = (f_plus - f_minus) / (2.0 * h);
            let a = grad[i];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            report.entries_checked += 1;
            if rel > report.max_rel_err {
                report.max_rel_err = rel;
                report.worst = Some(WorstEntry { param, index: i, analytic: a, numeric });
            }
        }
    }
    // Leave the graph in a consistent state for the caller.
    graph.forward()?;
    Ok(report)
}

/// One row of the per-operator sweep.
#[derive(Debug, Clone)]
pub struct SweepRow {
    pub op: String,
    pub cases: usize,
    pub max_rel_err: f64,
}

const SWEEP_OPS: &[&str] = &[
    "weighted_sum",
    "subtract",
    "div_bias",
    "clip",
    "min_pool1d",
    "max_pool1d",
    "mean",
    "mad",
    "activation",
];

/// Build `cases` random scalar-output graphs per operator kind and gradient
/// check each one. Clip and relu points keep a margin from their kinks and
/// pooling inputs are spaced so window extrema are unique; everywhere else
/// the operators are smooth.
pub fn op_sweep(seed: u64, cases: usize, h: f64) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(SWEEP_OPS.len());
    for (op_idx, &op) in SWEEP_OPS.iter().enumerate() {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed ^ (op_idx as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15),
        );
        let mut max_rel = 0.0f64;
        for _ in 0..cases {
            let (mut graph, output) = build_case(op, &mut rng)?;
            let report = grad_check(&mut graph, output, h)?;
            max_rel = max_rel.max(report.max_rel_err);
        }
        rows.push(SweepRow { op: op.to_string(), cases, max_rel_err: max_rel });
    }
    Ok(rows)
}

fn uniform_vec(rng: &mut ChaCha8Rng, n: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..n).map(|_| rng.random_range(lo..hi)).collect()
}

/// Values with pairwise gaps of at least 0.2, in shuffled order.
fn distinct_vec(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        let j = rng.random_range(0..=i);
        idx.swap(i, j);
    }
    idx.into_iter()
        .map(|i| i as f64 * 0.3 + rng.random_range(0.0..0.1))
        .collect()
}

/// Keep every entry at least `margin` away from each point in `kinks`.
fn push_off_kinks(values: &mut [f64], kinks: &[f64], margin: f64) {
    for v in values.iter_mut() {
        for &k in kinks {
            if (*v - k).abs() < margin {
                *v = k + margin * if *v >= k { 1.5 } else { -1.5 };
            }
        }
    }
}

fn build_case(op: &str, rng: &mut ChaCha8Rng) -> Result<(Graph, NodeId)> {
    let n = rng.random_range(2..=8usize);
    let mut g = Graph::new();
    let output = match op {
        "weighted_sum" => {
            let x = g.add_param("x", uniform_vec(rng, n, -2.0, 2.0), true)?;
            let w = g.add_param("w", uniform_vec(rng, n, -2.0, 2.0), true)?;
            let x_ref = g.full(x)?;
            g.weighted_sum(&[x_ref], w)?
        }
        "subtract" => {
            let a = g.add_param("a", uniform_vec(rng, n, -2.0, 2.0), true)?;
            let b = g.add_param("b", uniform_vec(rng, n, -2.0, 2.0), true)?;
            let s = g.subtract(g.full(a)?, g.full(b)?)?;
            let s_ref = g.full(s)?;
            g.mean(&[s_ref])?
        }
        "div_bias" => {
            let num = g.add_param("num", uniform_vec(rng, n, -2.0, 2.0), true)?;
            let den = g.add_param("den", uniform_vec(rng, n, 0.5, 2.0), true)?;
            let d = g.div_bias(g.full(num)?, g.full(den)?, 1e-8)?;
            let d_ref = g.full(d)?;
            g.mean(&[d_ref])?
        }
        "clip" => {
            let (lo, hi) = (-1.0, 1.0);
            let mut values = uniform_vec(rng, n, -2.0, 2.0);
            push_off_kinks(&mut values, &[lo, hi], 5e-3);
            let x = g.add_param("x", values, true)?;
            let c = g.clip(g.full(x)?, lo, hi)?;
            let c_ref = g.full(c)?;
            g.mean(&[c_ref])?
        }
        "min_pool1d" | "max_pool1d" => {
            let window = rng.random_range(1..=n);
            let x = g.add_param("x", distinct_vec(rng, n), true)?;
            let x_ref = g.full(x)?;
            let p = if op == "min_pool1d" {
                g.min_pool1d(x_ref, window)?
            } else {
                g.max_pool1d(x_ref, window)?
            };
            let p_ref = g.full(p)?;
            g.mean(&[p_ref])?
        }
        "mean" => {
            let x = g.add_param("x", uniform_vec(rng, n, -2.0, 2.0), true)?;
            let x_ref = g.full(x)?;
            g.mean(&[x_ref])?
        }
        "mad" => {
            let mut values = uniform_vec(rng, n, -2.0, 2.0);
            // keep every point away from the window mean so the |.| kink
            // stays outside the finite-difference stencil
            for _ in 0..32 {
                let mean = values.iter().sum::<f64>() / n as f64;
                let mut adjusted = false;
                for v in values.iter_mut() {
                    if (*v - mean).abs() < 5e-3 {
                        *v += 0.1;
                        adjusted = true;
                    }
                }
                if !adjusted {
                    break;
                }
            }
            let x = g.add_param("x", values, true)?;
            let x_ref = g.full(x)?;
            g.mad(&[x_ref])?
        }
        "activation" => {
            let mut values = uniform_vec(rng, n, -2.0, 2.0);
            push_off_kinks(&mut values, &[0.0], 5e-3);
            let x = g.add_param("x", values, true)?;
            let a = g.activation(g.full(x)?, Activation::Relu)?;
            let a_ref = g.full(a)?;
            g.mean(&[a_ref])?
        }
        _ => return Err(GraphError::Config(format!("unknown sweep op '{op}'"))),
    };
    Ok((g, output))
}

/// The operator names covered by `op_sweep`, for report alignment.
pub fn sweep_op_names() -> &'static [&'static str] {
    SWEEP_OPS
}
