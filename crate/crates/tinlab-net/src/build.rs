//! Turn an [`IndicatorNetworkSpec`] into a compute graph whose untrained
//! outputs equal the corresponding oracle.

use std::collections::BTreeMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};

use tinlab_graph::{Graph, InputRef, NodeId};

use crate::error::{NetError, Result};
use crate::spec::{IndicatorKind, IndicatorNetworkSpec, InitScheme};
use crate::weights::{ema_weights, sma_weights};

/// A built indicator network: the spec it came from, the graph, and the node
/// ids of its named outputs.
#[derive(Debug, Clone)]
pub struct IndicatorNetwork {
    pub spec: IndicatorNetworkSpec,
    pub graph: Graph,
    /// Values the input window must have per named input slot.
    pub input_len: usize,
    pub outputs: BTreeMap<String, NodeId>,
}

impl IndicatorNetwork {
    /// Output node id by name.
    pub fn output(&self, name: &str) -> Result<NodeId> {
        self.outputs
            .get(name)
            .copied()
            .ok_or_else(|| NetError::Usage(format!("network has no output '{name}'")))
    }

    /// True when the network still carries its exact replication weights.
    pub fn is_pristine_replica(&self) -> bool {
        self.spec.init.is_replicate() && !self.graph.any_param_stepped()
    }
}

/// Build any network kind from its spec. `seed` only matters for the
/// stochastic init schemes.
pub fn build(spec: &IndicatorNetworkSpec, seed: u64) -> Result<IndicatorNetwork> {
    spec.validate()?;
    let mut net = match spec.kind {
        IndicatorKind::Ma | IndicatorKind::Ema => topo_ma(spec)?,
        IndicatorKind::Macd => topo_macd(spec)?,
        IndicatorKind::Rsi => topo_rsi(spec)?,
        IndicatorKind::Roc => topo_roc(spec)?,
        IndicatorKind::Stoch => topo_stoch(spec)?,
        IndicatorKind::Cci => topo_cci(spec)?,
        IndicatorKind::Qnet => topo_qnet(spec)?,
    };
    apply_init(&mut net.graph, &spec.init, seed)?;
    Ok(net)
}

pub fn build_ma_in(n: usize, init: InitScheme, seed: u64) -> Result<IndicatorNetwork> {
    let kind_spec = match init {
        InitScheme::ReplicateEma => IndicatorNetworkSpec::ema(n),
        _ => IndicatorNetworkSpec::ma(n),
    };
    build(&kind_spec.with_init(init), seed)
}

pub fn build_macd_in(
    fast: usize,
    slow: usize,
    signal: usize,
    init: InitScheme,
    seed: u64,
) -> Result<IndicatorNetwork> {
    build(&IndicatorNetworkSpec::macd(fast, slow, signal).with_init(init), seed)
}

pub fn build_rsi_in(n: usize, init: InitScheme, seed: u64) -> Result<IndicatorNetwork> {
    build(&IndicatorNetworkSpec::rsi(n).with_init(init), seed)
}

pub fn build_roc_in(n: usize, init: InitScheme, seed: u64) -> Result<IndicatorNetwork> {
    build(&IndicatorNetworkSpec::roc(n).with_init(init), seed)
}

pub fn build_stoch_in(n: usize, m: usize, init: InitScheme, seed: u64) -> Result<IndicatorNetwork> {
    build(&IndicatorNetworkSpec::stoch(n, m).with_init(init), seed)
}

pub fn build_cci_in(n: usize, init: InitScheme, seed: u64) -> Result<IndicatorNetwork> {
    build(&IndicatorNetworkSpec::cci(n).with_init(init), seed)
}

pub fn build_q_in(
    input_len: usize,
    hidden: usize,
    feature_dim: usize,
    init: InitScheme,
    seed: u64,
) -> Result<IndicatorNetwork> {
    build(&IndicatorNetworkSpec::qnet(input_len, hidden, feature_dim).with_init(init), seed)
}

/// Which replication family the moving-average weights follow.
fn ma_family_weights(spec: &IndicatorNetworkSpec, n: usize) -> Result<Vec<f64>> {
    match (spec.kind, spec.init) {
        (_, InitScheme::ReplicateSma) => sma_weights(n),
        (_, InitScheme::ReplicateEma) => ema_weights(n),
        // Stochastic inits start from the kind's canonical replication.
        (IndicatorKind::Ma, _) => sma_weights(n),
        _ => ema_weights(n),
    }
}

fn topo_ma(spec: &IndicatorNetworkSpec) -> Result<IndicatorNetwork> {
    let n = spec.window("n")?;
    let mut g = Graph::new();
    let price = g.add_input("price", n)?;
    let w = g.add_param("ma_weights", ma_family_weights(spec, n)?, true)?;
    let price_ref = g.full(price)?;
    let out = g.weighted_sum(&[price_ref], w)?;
    let mut outputs = BTreeMap::new();
    outputs.insert("ma".to_string(), out);
    Ok(IndicatorNetwork { spec: spec.clone(), graph: g, input_len: n, outputs })
}

/// Parallel fast/slow moving-average layers at each time offset the signal
/// window needs, a subtraction layer, a smoothing layer and the histogram.
fn topo_macd(spec: &IndicatorNetworkSpec) -> Result<IndicatorNetwork> {
    let fast = spec.window("fast")?;
    let slow = spec.window("slow")?;
    let sig = spec.window("signal")?;
    let input_len = slow + sig - 1;

    let mut g = Graph::new();
    let price = g.add_input("price", input_len)?;
    let w_fast = g.add_param("fast_ma", ma_family_weights(spec, fast)?, true)?;
    let w_slow = g.add_param("slow_ma", ma_family_weights(spec, slow)?, true)?;
    // The signal line smooths with geometric-decay weights in both families.
    let w_sig = g.add_param("signal_smooth", ema_weights(sig)?, true)?;

    // oldest offset first, so the smoothing layer reads time in order
    let mut macd_nodes = Vec::with_capacity(sig);
    for back in (0..sig).rev() {
        let fast_ref = g.slice(price, input_len - back - fast, fast)?;
        let slow_ref = g.slice(price, input_len - back - slow, slow)?;
        let fast_ma = g.weighted_sum(&[fast_ref], w_fast)?;
        let slow_ma = g.weighted_sum(&[slow_ref], w_slow)?;
        let node = if spec.conventional_sign {
            g.subtract(g.full(fast_ma)?, g.full(slow_ma)?)?
        } else {
            g.subtract(g.full(slow_ma)?, g.full(fast_ma)?)?
        };
        macd_nodes.push(node);
    }
    let macd_now = *macd_nodes.last().expect("sig >= 1");
    let macd_refs: Vec<InputRef> =
        macd_nodes.iter().map(|&id| g.full(id)).collect::<tinlab_graph::Result<_>>()?;
    let signal = g.weighted_sum(&macd_refs, w_sig)?;
    let histogram = g.subtract(g.full(macd_now)?, g.full(signal)?)?;

    let mut outputs = BTreeMap::new();
    outputs.insert("macd".to_string(), macd_now);
    outputs.insert("signal".to_string(), signal);
    outputs.insert("histogram".to_string(), histogram);
    Ok(IndicatorNetwork { spec: spec.clone(), graph: g, input_len, outputs })
}

/// Pairwise differences, two clip branches for gains and losses, window
/// means, bias-regularized division and a fixed 0-100 scale.
fn topo_rsi(spec: &IndicatorNetworkSpec) -> Result<IndicatorNetwork> {
    let n = spec.window("n")?;
    let input_len = n + 1;
    let mut g = Graph::new();
    let price = g.add_input("price", input_len)?;
    let newer = g.slice(price, 1, n)?;
    let older = g.slice(price, 0, n)?;
    let diffs = g.subtract(newer, older)?;
    let zero = g.add_param("zero", vec![0.0; n], false)?;
    let gains = g.clip(g.full(diffs)?, 0.0, f64::INFINITY)?;
    let negated = g.subtract(g.full(zero)?, g.full(diffs)?)?;
    let losses = g.clip(g.full(negated)?, 0.0, f64::INFINITY)?;
    let w_gain = g.add_param("gain_mean", sma_weights(n)?, true)?;
    let w_loss = g.add_param("loss_mean", sma_weights(n)?, true)?;
    let gain_mean = {
        let r = g.full(gains)?;
        g.weighted_sum(&[r], w_gain)?
    };
    let loss_mean = {
        let r = g.full(losses)?;
        g.weighted_sum(&[r], w_loss)?
    };
    let w_pair = g.add_param("gain_loss_sum", vec![1.0, 1.0], false)?;
    let total = {
        let refs = [g.full(gain_mean)?, g.full(loss_mean)?];
        g.weighted_sum(&refs, w_pair)?
    };
    let ratio = g.div_bias(g.full(gain_mean)?, g.full(total)?, spec.eps)?;
    let w_scale = g.add_param("percent_scale", vec![100.0], false)?;
    let out = {
        let r = g.full(ratio)?;
        g.weighted_sum(&[r], w_scale)?
    };
    let mut outputs = BTreeMap::new();
    outputs.insert("rsi".to_string(), out);
    Ok(IndicatorNetwork { spec: spec.clone(), graph: g, input_len, outputs })
}

fn topo_roc(spec: &IndicatorNetworkSpec) -> Result<IndicatorNetwork> {
    let n = spec.window("n")?;
    let input_len = n + 1;
    let mut g = Graph::new();
    let price = g.add_input("price", input_len)?;
    let now = g.slice(price, n, 1)?;
    let lag = g.slice(price, 0, 1)?;
    let num = g.subtract(now, lag)?;
    let ratio = g.div_bias(g.full(num)?, lag, spec.eps)?;
    let w_scale = g.add_param("percent_scale", vec![100.0], false)?;
    let out = {
        let r = g.full(ratio)?;
        g.weighted_sum(&[r], w_scale)?
    };
    let mut outputs = BTreeMap::new();
    outputs.insert("roc".to_string(), out);
    Ok(IndicatorNetwork { spec: spec.clone(), graph: g, input_len, outputs })
}

/// Max pooling over highs, min pooling over lows, range division and a
/// simple-moving-average layer for %D.
fn topo_stoch(spec: &IndicatorNetworkSpec) -> Result<IndicatorNetwork> {
    let n = spec.window("n")?;
    let m = spec.window("m")?;
    let input_len = n + m - 1;
    let mut g = Graph::new();
    let high = g.add_input("high", input_len)?;
    let low = g.add_input("low", input_len)?;
    let close = g.add_input("close", input_len)?;

    let highest = g.max_pool1d(g.full(high)?, n)?; // [m]
    let lowest = g.min_pool1d(g.full(low)?, n)?; // [m]
    let close_win = g.slice(close, n - 1, m)?;
    let num = g.subtract(close_win, g.full(lowest)?)?;
    let range = g.subtract(g.full(highest)?, g.full(lowest)?)?;
    let ratio = g.div_bias(g.full(num)?, g.full(range)?, spec.eps)?;

    let w_k = g.add_param("percent_k_scale", vec![100.0], false)?;
    let k_out = {
        let newest = g.slice(ratio, m - 1, 1)?;
        g.weighted_sum(&[newest], w_k)?
    };
    // %D = SMA_m of %K folds the 100x scale into the smoothing weights.
    let d_weights: Vec<f64> = sma_weights(m)?.into_iter().map(|w| w * 100.0).collect();
    let w_d = g.add_param("percent_d_smooth", d_weights, true)?;
    let d_out = {
        let r = g.full(ratio)?;
        g.weighted_sum(&[r], w_d)?
    };

    let mut outputs = BTreeMap::new();
    outputs.insert("k".to_string(), k_out);
    outputs.insert("d".to_string(), d_out);
    Ok(IndicatorNetwork { spec: spec.clone(), graph: g, input_len, outputs })
}

/// Typical-price mixing layer, nested mean and deviation nodes, and the
/// fixed 0.015 Lambert scaling.
fn topo_cci(spec: &IndicatorNetworkSpec) -> Result<IndicatorNetwork> {
    let n = spec.window("n")?;
    let mut g = Graph::new();
    let high = g.add_input("high", n)?;
    let low = g.add_input("low", n)?;
    let close = g.add_input("close", n)?;
    let w_tp = g.add_param("typical_price_mix", vec![1.0 / 3.0; 3], false)?;
    let mut tp_nodes = Vec::with_capacity(n);
    for j in 0..n {
        let refs = [g.slice(high, j, 1)?, g.slice(low, j, 1)?, g.slice(close, j, 1)?];
        tp_nodes.push(g.weighted_sum(&refs, w_tp)?);
    }
    let tp_refs: Vec<InputRef> =
        tp_nodes.iter().map(|&id| g.full(id)).collect::<tinlab_graph::Result<_>>()?;
    let center = g.mean(&tp_refs)?;
    let deviation = g.mad(&tp_refs)?;
    let num = {
        let newest = g.full(*tp_nodes.last().expect("n >= 1"))?;
        g.subtract(newest, g.full(center)?)?
    };
    let ratio = g.div_bias(g.full(num)?, g.full(deviation)?, spec.eps)?;
    let w_scale = g.add_param("cci_scale", vec![1.0 / 0.015], false)?;
    let out = {
        let r = g.full(ratio)?;
        g.weighted_sum(&[r], w_scale)?
    };
    let mut outputs = BTreeMap::new();
    outputs.insert("cci".to_string(), out);
    Ok(IndicatorNetwork { spec: spec.clone(), graph: g, input_len: n, outputs })
}

/// Fully connected `feature_dim * input -> hidden -> 3` Q-network. The
/// replicate init seeds each hidden unit with the weights of an exponential
/// moving average over a distinct window, spread across `[2, input/2]` and
/// repeated per feature channel; the action layer starts at zero.
fn topo_qnet(spec: &IndicatorNetworkSpec) -> Result<IndicatorNetwork> {
    let input_len = spec.window("input")?;
    let hidden = spec.window("hidden")?;
    let d = spec.feature_dim;
    let total_in = d * input_len;

    let mut g = Graph::new();
    let obs = g.add_input("obs", total_in)?;
    let mut hidden_nodes = Vec::with_capacity(hidden);
    for i in 0..hidden {
        let weights = qnet_hidden_profile(i, hidden, input_len, d)?;
        let w = g.add_param(&format!("hidden_{i}"), weights, true)?;
        let obs_ref = g.full(obs)?;
        let unit = g.weighted_sum(&[obs_ref], w)?;
        let act = g.activation(g.full(unit)?, spec.activation)?;
        hidden_nodes.push(act);
    }
    let hidden_refs: Vec<InputRef> =
        hidden_nodes.iter().map(|&id| g.full(id)).collect::<tinlab_graph::Result<_>>()?;
    let mut outputs = BTreeMap::new();
    for a in 0..3usize {
        let w = g.add_param(&format!("action_{a}"), vec![0.0; hidden], true)?;
        let q = g.weighted_sum(&hidden_refs, w)?;
        outputs.insert(format!("q{a}"), q);
    }
    Ok(IndicatorNetwork { spec: spec.clone(), graph: g, input_len, outputs })
}

/// EMA profile for hidden unit `i`: window spread over `[2, input_len/2]`,
/// placed at the most recent end of every feature channel block.
fn qnet_hidden_profile(i: usize, hidden: usize, input_len: usize, d: usize) -> Result<Vec<f64>> {
    let lo = 2usize.min(input_len);
    let hi = (input_len / 2).max(lo);
    let window = if hidden == 1 {
        hi
    } else {
        let frac = i as f64 / (hidden - 1) as f64;
        (lo as f64 + frac * (hi - lo) as f64).round() as usize
    };
    let window = window.clamp(1, input_len);
    let profile = ema_weights(window)?;
    let mut weights = vec![0.0; d * input_len];
    for c in 0..d {
        let block_end = (c + 1) * input_len;
        weights[block_end - window..block_end].copy_from_slice(&profile);
    }
    Ok(weights)
}

/// Post-construction adjustment of trainable parameters for the stochastic
/// init schemes; replicate inits leave the exact weights in place.
fn apply_init(graph: &mut Graph, init: &InitScheme, seed: u64) -> Result<()> {
    match *init {
        InitScheme::ReplicateSma | InitScheme::ReplicateEma => Ok(()),
        InitScheme::PerturbedReplicate { sigma } => {
            if sigma == 0.0 {
                return Ok(());
            }
            let normal = Normal::new(0.0, sigma)
                .map_err(|e| NetError::Config(format!("bad perturbation sigma: {e}")))?;
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for id in trainable_ids(graph) {
                for v in graph.param_values_mut(id)? {
                    *v += normal.sample(&mut rng);
                }
            }
            Ok(())
        }
        InitScheme::RandomUniform { lo, hi } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for id in trainable_ids(graph) {
                for v in graph.param_values_mut(id)? {
                    *v = rng.random_range(lo..hi);
                }
            }
            Ok(())
        }
    }
}

fn trainable_ids(graph: &Graph) -> Vec<NodeId> {
    graph
        .param_ids()
        .into_iter()
        .filter(|&id| graph.param_meta(id).map(|m| m.trainable).unwrap_or(false))
        .collect()
}

/// Debug fault injection: nudge the first trainable weight by `delta` so
/// replication checks visibly fail.
pub fn corrupt_first_weight(net: &mut IndicatorNetwork, delta: f64) -> Result<()> {
    let id = trainable_ids(&net.graph)
        .first()
        .copied()
        .or_else(|| net.graph.param_ids().first().copied())
        .ok_or_else(|| NetError::Usage("network has no parameters".into()))?;
    net.graph.param_values_mut(id)?[0] += delta;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use tinlab_oracles::{ema, sma, EmaMode};

    #[test]
    fn sma_replica_matches_oracle_on_one_window() {
        let mut net = build_ma_in(5, InitScheme::ReplicateSma, 0).unwrap();
        let window = [1.0, 2.0, 3.0, 4.0, 5.0];
        net.graph.bind("price", &window).unwrap();
        net.graph.forward().unwrap();
        let out = net.graph.value_scalar(net.output("ma").unwrap()).unwrap();
        assert!((out - 3.0).abs() < 1e-15);
        assert_eq!(out, sma(&window, 5).unwrap()[0]);
    }

    #[test]
    fn ema_replica_matches_truncated_oracle() {
        let mut net = build_ma_in(2, InitScheme::ReplicateEma, 0).unwrap();
        net.graph.bind("price", &[1.0, 2.0]).unwrap();
        net.graph.forward().unwrap();
        let out = net.graph.value_scalar(net.output("ma").unwrap()).unwrap();
        assert!((out - 1.75).abs() < 1e-15);
        assert_eq!(out, ema(&[1.0, 2.0], 2, EmaMode::Truncated).unwrap()[0]);
    }

    #[test]
    fn perturbed_with_zero_sigma_is_exact_replicate() {
        let a = build_ma_in(8, InitScheme::ReplicateSma, 1).unwrap();
        let b = build_ma_in(8, InitScheme::PerturbedReplicate { sigma: 0.0 }, 1).unwrap();
        let ids = a.graph.param_ids();
        for id in ids {
            assert_eq!(a.graph.param_values(id).unwrap(), b.graph.param_values(id).unwrap());
        }
    }

    #[test]
    fn macd_constant_input_gives_zero_outputs() {
        let mut net = build_macd_in(3, 6, 4, InitScheme::ReplicateEma, 0).unwrap();
        let window = vec![77.7; net.input_len];
        net.graph.bind("price", &window).unwrap();
        net.graph.forward().unwrap();
        for name in ["macd", "signal", "histogram"] {
            let v = net.graph.value_scalar(net.output(name).unwrap()).unwrap();
            assert!(v.abs() < 1e-9, "{name} = {v}");
        }
    }

    #[test]
    fn macd_sign_flag_negates_output() {
        let window: Vec<f64> = (0..10).map(|i| 100.0 + (i as f64) * 0.5).collect();
        let mut default = build_macd_in(2, 5, 6, InitScheme::ReplicateEma, 0).unwrap();
        assert_eq!(default.input_len, 10);
        default.graph.bind("price", &window).unwrap();
        default.graph.forward().unwrap();
        let base = default
            .graph
            .value_scalar(default.output("macd").unwrap())
            .unwrap();

        let spec = IndicatorNetworkSpec::macd(2, 5, 6);
        let mut flipped = build(
            &IndicatorNetworkSpec { conventional_sign: true, ..spec },
            0,
        )
        .unwrap();
        flipped.graph.bind("price", &window).unwrap();
        flipped.graph.forward().unwrap();
        let conv = flipped
            .graph
            .value_scalar(flipped.output("macd").unwrap())
            .unwrap();
        assert!((base + conv).abs() < 1e-15);
    }

    #[test]
    fn rsi_saturates_on_monotone_window() {
        let mut net = build_rsi_in(6, InitScheme::ReplicateSma, 0).unwrap();
        let up: Vec<f64> = (0..7).map(|i| 10.0 + i as f64).collect();
        net.graph.bind("price", &up).unwrap();
        net.graph.forward().unwrap();
        let v = net.graph.value_scalar(net.output("rsi").unwrap()).unwrap();
        assert!((v - 100.0).abs() < 1e-6);
    }

    #[test]
    fn roc_flat_window_is_zero() {
        let mut net = build_roc_in(4, InitScheme::ReplicateSma, 0).unwrap();
        net.graph.bind("price", &[3.0; 5]).unwrap();
        net.graph.forward().unwrap();
        let v = net.graph.value_scalar(net.output("roc").unwrap()).unwrap();
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn stoch_close_at_window_high_reads_100() {
        let mut net = build_stoch_in(3, 2, InitScheme::ReplicateSma, 0).unwrap();
        assert_eq!(net.input_len, 4);
        net.graph.bind("high", &[5.0, 6.0, 7.0, 8.0]).unwrap();
        net.graph.bind("low", &[1.0, 2.0, 3.0, 4.0]).unwrap();
        net.graph.bind("close", &[4.0, 5.0, 6.0, 8.0]).unwrap();
        net.graph.forward().unwrap();
        let k = net.graph.value_scalar(net.output("k").unwrap()).unwrap();
        assert!((k - 100.0).abs() < 1e-6);
    }

    #[test]
    fn cci_constant_prices_give_zero() {
        let mut net = build_cci_in(5, InitScheme::ReplicateSma, 0).unwrap();
        net.graph.bind("high", &[9.0; 5]).unwrap();
        net.graph.bind("low", &[9.0; 5]).unwrap();
        net.graph.bind("close", &[9.0; 5]).unwrap();
        net.graph.forward().unwrap();
        let v = net.graph.value_scalar(net.output("cci").unwrap()).unwrap();
        assert!(v.abs() < 1e-9);
    }

    #[test]
    fn qnet_parameter_counts_match_shape_arithmetic() {
        let net = build_q_in(52, 26, 1, InitScheme::ReplicateEma, 0).unwrap();
        let total: usize = net
            .graph
            .param_ids()
            .iter()
            .map(|&id| net.graph.param_values(id).unwrap().len())
            .sum();
        assert_eq!(total, 52 * 26 + 26 * 3);

        let wide = build_q_in(52, 26, 2, InitScheme::ReplicateEma, 0).unwrap();
        let first_layer: usize = wide
            .graph
            .param_ids()
            .iter()
            .filter(|&&id| wide.graph.param_meta(id).unwrap().name.starts_with("hidden_"))
            .map(|&id| wide.graph.param_values(id).unwrap().len())
            .sum();
        assert_eq!(first_layer, 2 * 52 * 26);
        let out_layer: usize = wide
            .graph
            .param_ids()
            .iter()
            .filter(|&&id| wide.graph.param_meta(id).unwrap().name.starts_with("action_"))
            .map(|&id| wide.graph.param_values(id).unwrap().len())
            .sum();
        assert_eq!(out_layer, 26 * 3);
    }

    #[test]
    fn qnet_zero_input_gives_zero_q_values() {
        let mut net = build_q_in(10, 4, 1, InitScheme::ReplicateEma, 0).unwrap();
        net.graph.bind("obs", &vec![0.0; 10]).unwrap();
        net.graph.forward().unwrap();
        for a in 0..3 {
            let q = net
                .graph
                .value_scalar(net.output(&format!("q{a}")).unwrap())
                .unwrap();
            assert_eq!(q, 0.0);
        }
    }

    #[test]
    fn random_uniform_qnet_is_seed_deterministic() {
        let init = InitScheme::RandomUniform { lo: -0.1, hi: 0.1 };
        let a = build_q_in(12, 5, 1, init, 42).unwrap();
        let b = build_q_in(12, 5, 1, init, 42).unwrap();
        let c = build_q_in(12, 5, 1, init, 43).unwrap();
        let flat = |net: &IndicatorNetwork| -> Vec<f64> {
            net.graph
                .param_ids()
                .iter()
                .flat_map(|&id| net.graph.param_values(id).unwrap().to_vec())
                .collect()
        };
        assert_eq!(flat(&a), flat(&b));
        assert_ne!(flat(&a), flat(&c));
    }
}
