//! Scale and additivity properties of the metric functions.

use proptest::prelude::*;

use tinlab_metrics::{cumulative_sum, sharpe, sortino};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn sharpe_is_scale_invariant(
        returns in proptest::collection::vec(-0.1f64..0.1, 2..60),
        scale in 0.001f64..1000.0,
    ) {
        let scaled: Vec<f64> = returns.iter().map(|r| r * scale).collect();
        let a = sharpe(&returns, false).unwrap();
        let b = sharpe(&scaled, false).unwrap();
        match (a.value(), b.value()) {
            (Some(x), Some(y)) => prop_assert!((x - y).abs() <= 1e-12, "{x} vs {y}"),
            (None, None) => {}
            other => prop_assert!(false, "definedness changed under scaling: {other:?}"),
        }
    }

    #[test]
    fn cumulative_sum_is_additive_over_splits(
        returns in proptest::collection::vec(-0.1f64..0.1, 2..80),
        cut in 0usize..80,
    ) {
        let cut = cut.min(returns.len());
        let whole = cumulative_sum(&returns);
        let split = cumulative_sum(&returns[..cut]) + cumulative_sum(&returns[cut..]);
        prop_assert!((whole - split).abs() <= 1e-15 * (1.0 + whole.abs()));
    }

    #[test]
    fn sortino_dominates_sharpe_when_downside_is_smaller(
        returns in proptest::collection::vec(-0.05f64..0.08, 3..60),
    ) {
        let m: f64 = returns.iter().sum::<f64>() / returns.len() as f64;
        let std = (returns.iter().map(|r| (r - m).powi(2)).sum::<f64>()
            / (returns.len() - 1) as f64)
            .sqrt();
        let downside = (returns.iter().map(|r| r.min(0.0).powi(2)).sum::<f64>()
            / returns.len() as f64)
            .sqrt();
        if let (Some(sh), Some(so)) = (
            sharpe(&returns, false).unwrap().value(),
            sortino(&returns, false).unwrap().value(),
        ) {
            // the ordering claim only holds for a nonnegative mean
            if downside <= std && m >= 0.0 {
                prop_assert!(so >= sh - 1e-12, "sortino {so} < sharpe {sh}");
            }
        }
    }
}
