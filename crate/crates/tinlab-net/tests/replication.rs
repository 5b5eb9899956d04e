//! Replication invariant: every indicator network with a replicate init must
//! match its oracle across sliding windows of random series.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use tinlab_net::{
    build, build_ma_in, corrupt_first_weight, verify_replication, IndicatorNetworkSpec,
    InitScheme,
};
use tinlab_oracles::SeriesView;

const LINEAR_TOL: f64 = 1e-9;
const REGULARIZED_TOL: f64 = 1e-6;
const SERIES_LEN: usize = 300;
const SERIES_PER_CASE: usize = 20;

fn random_series(rng: &mut ChaCha8Rng, len: usize) -> SeriesView {
    let mut close = Vec::with_capacity(len);
    let mut high = Vec::with_capacity(len);
    let mut low = Vec::with_capacity(len);
    let mut p: f64 = rng.random_range(30.0..150.0);
    for _ in 0..len {
        p *= 1.0 + rng.random_range(-0.025..0.025);
        close.push(p);
        high.push(p * (1.0 + rng.random_range(0.0..0.015)));
        low.push(p * (1.0 - rng.random_range(0.0..0.015)));
    }
    SeriesView::with_hlc(high, low, close).unwrap()
}

fn check(spec: IndicatorNetworkSpec, tol: f64, label: &str) {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE ^ tol.to_bits());
    for series_idx in 0..SERIES_PER_CASE {
        let data = random_series(&mut rng, SERIES_LEN);
        let mut net = build(&spec, series_idx as u64).unwrap();
        let report = verify_replication(&mut net, &data, tol).unwrap();
        assert!(
            report.pass,
            "{label} series {series_idx}: max abs err {} at index {} output '{}' (tol {tol})",
            report.max_abs_err, report.argmax_index, report.argmax_output
        );
    }
}

#[test]
fn sma_and_ema_networks_replicate() {
    for n in [2usize, 5, 12, 26] {
        check(IndicatorNetworkSpec::ma(n), LINEAR_TOL, &format!("ma({n})"));
        check(IndicatorNetworkSpec::ema(n), LINEAR_TOL, &format!("ema({n})"));
    }
}

#[test]
fn macd_networks_replicate() {
    for (fast, slow, sig) in [(2usize, 5usize, 2usize), (12, 26, 9)] {
        check(
            IndicatorNetworkSpec::macd(fast, slow, sig),
            LINEAR_TOL,
            &format!("macd({fast},{slow},{sig}) ema"),
        );
        check(
            IndicatorNetworkSpec::macd(fast, slow, sig).with_init(InitScheme::ReplicateSma),
            LINEAR_TOL,
            &format!("macd({fast},{slow},{sig}) sma"),
        );
    }
}

#[test]
fn rsi_and_roc_networks_replicate() {
    for n in [2usize, 5, 12, 26] {
        check(IndicatorNetworkSpec::rsi(n), REGULARIZED_TOL, &format!("rsi({n})"));
        check(IndicatorNetworkSpec::roc(n), REGULARIZED_TOL, &format!("roc({n})"));
    }
}

#[test]
fn stoch_and_cci_networks_replicate() {
    for n in [2usize, 5, 12, 26] {
        check(
            IndicatorNetworkSpec::stoch(n, 3),
            REGULARIZED_TOL,
            &format!("stoch({n},3)"),
        );
        check(IndicatorNetworkSpec::cci(n), REGULARIZED_TOL, &format!("cci({n})"));
    }
}

#[test]
fn corrupted_weight_fails_replication() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let data = random_series(&mut rng, 120);
    let mut net = build(&IndicatorNetworkSpec::macd(5, 12, 4), 0).unwrap();
    corrupt_first_weight(&mut net, 1e-3).unwrap();
    let report = verify_replication(&mut net, &data, LINEAR_TOL).unwrap();
    assert!(!report.pass);
    assert!(report.max_abs_err > LINEAR_TOL);
    // the first affected window is the first window overall
    assert_eq!(report.argmax_index >= net.input_len - 1, true);
}

#[test]
fn trained_or_stochastic_networks_are_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    let data = random_series(&mut rng, 60);

    let mut perturbed = build_ma_in(5, InitScheme::PerturbedReplicate { sigma: 0.01 }, 3).unwrap();
    assert!(verify_replication(&mut perturbed, &data, LINEAR_TOL).is_err());

    let mut trained = build_ma_in(5, InitScheme::ReplicateSma, 3).unwrap();
    let w = trained.graph.param_ids()[0];
    let mut grads = tinlab_graph::GradMap::new();
    grads.insert(w, vec![0.0; 5]);
    tinlab_graph::optim::sgd_step(&mut trained.graph, &grads, 0.1).unwrap();
    assert!(!trained.is_pristine_replica());
    assert!(verify_replication(&mut trained, &data, LINEAR_TOL).is_err());
}
