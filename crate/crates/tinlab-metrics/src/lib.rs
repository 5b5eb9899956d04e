//! Risk-adjusted performance metrics and report assembly.
//!
//! Conventions: risk-free rate 0, sample standard deviation with the `n - 1`
//! denominator, downside deviation against a 0 target with the `n`
//! denominator, optional `sqrt(252)` annualization (off by default).
//! Zero-variance series yield an explicit [`Metric::Undefined`] instead of
//! infinities.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use tinlab_env::EpisodeResult;

mod report;
mod svg;

pub use report::{build_report, PerformanceReport, StrategyMetrics, SymbolMetrics};
pub use svg::cumulative_return_svg;

#[derive(Debug, Error)]
pub enum MetricsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("dimension error: {0}")]
    Dimension(String),
}

pub type Result<T> = std::result::Result<T, MetricsError>;

pub const TRADING_DAYS_PER_YEAR: f64 = 252.0;

/// A metric value that may be undefined (zero variance, no downside moves).
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Metric {
    Defined(f64),
    Undefined,
}

impl Metric {
    pub fn value(self) -> Option<f64> {
        match self {
            Metric::Defined(v) => Some(v),
            Metric::Undefined => None,
        }
    }

    pub fn is_defined(self) -> bool {
        matches!(self, Metric::Defined(_))
    }
}

impl fmt::Display for Metric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Metric::Defined(v) => write!(f, "{v:.4}"),
            Metric::Undefined => f.write_str("undefined"),
        }
    }
}

/// `r_t = e_t / e_{t-1} - 1` over a strictly positive equity curve.
pub fn simple_returns(equity_curve: &[f64]) -> Result<Vec<f64>> {
    if equity_curve.len() < 2 {
        return Err(MetricsError::Dimension(format!(
            "need at least 2 equity points, got {}",
            equity_curve.len()
        )));
    }
    if let Some(e) = equity_curve.iter().find(|&&e| !(e > 0.0)) {
        return Err(MetricsError::Domain(format!("equity must stay positive, found {e}")));
    }
    Ok(equity_curve.windows(2).map(|w| w[1] / w[0] - 1.0).collect())
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Mean return over sample standard deviation.
pub fn sharpe(returns: &[f64], annualize: bool) -> Result<Metric> {
    if returns.len() < 2 {
        return Err(MetricsError::Dimension(format!(
            "sharpe needs at least 2 returns, got {}",
            returns.len()
        )));
    }
    let m = mean(returns);
    let var = returns.iter().map(|r| (r - m).powi(2)).sum::<f64>() / (returns.len() - 1) as f64;
    let std = var.sqrt();
    if std == 0.0 {
        return Ok(Metric::Undefined);
    }
    let mut ratio = m / std;
    if annualize {
        ratio *= TRADING_DAYS_PER_YEAR.sqrt();
    }
    Ok(Metric::Defined(ratio))
}

/// Mean return over downside deviation (target 0).
pub fn sortino(returns: &[f64], annualize: bool) -> Result<Metric> {
    if returns.len() < 2 {
        return Err(MetricsError::Dimension(format!(
            "sortino needs at least 2 returns, got {}",
            returns.len()
        )));
    }
    let m = mean(returns);
    let downside =
        (returns.iter().map(|r| r.min(0.0).powi(2)).sum::<f64>() / returns.len() as f64).sqrt();
    if downside == 0.0 {
        return Ok(Metric::Undefined);
    }
    let mut ratio = m / downside;
    if annualize {
        ratio *= TRADING_DAYS_PER_YEAR.sqrt();
    }
    Ok(Metric::Defined(ratio))
}

/// Plain sum of simple returns (not compounded).
pub fn cumulative_sum(returns: &[f64]) -> f64 {
    returns.iter().sum()
}

/// Mean daily return across symbols, index by index; symbols contribute
/// wherever they have data.
pub(crate) fn equal_weight_mean(series: &[Vec<f64>]) -> Vec<f64> {
    let max_len = series.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = Vec::with_capacity(max_len);
    for t in 0..max_len {
        let mut acc = 0.0;
        let mut count = 0usize;
        for s in series {
            if let Some(&r) = s.get(t) {
                acc += r;
                count += 1;
            }
        }
        out.push(acc / count as f64);
    }
    out
}

pub(crate) fn episode_returns(result: &EpisodeResult) -> Result<Vec<f64>> {
    simple_returns(&result.equity_curve)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn simple_returns_examples() {
        let first = simple_returns(&[1.0, 1.1]).unwrap();
        assert!((first[0] - 0.1).abs() < 1e-12);
        assert!(simple_returns(&[2.0; 5]).unwrap().iter().all(|&r| r == 0.0));
        let r = simple_returns(&[1.0, 1.1, 0.99]).unwrap();
        assert!((r[0] - 0.1).abs() < 1e-12);
        assert!((r[1] + 0.1).abs() < 1e-12);
        assert!(simple_returns(&[1.0, -0.5]).is_err());
        assert!(simple_returns(&[1.0]).is_err());
    }

    #[test]
    fn sharpe_examples() {
        let zero_mean = sharpe(&[0.01, -0.01, 0.01, -0.01], false).unwrap();
        assert!((zero_mean.value().unwrap()).abs() < 1e-12);

        // mean 0.02 over sample std sqrt(2e-4) is exactly sqrt(2)
        let hand = sharpe(&[0.01, 0.03], false).unwrap().value().unwrap();
        assert!((hand - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!((hand - 1.41421356).abs() < 1e-5);

        assert_eq!(sharpe(&[0.05; 4], false).unwrap(), Metric::Undefined);
    }

    #[test]
    fn sharpe_annualization_scales_by_sqrt_252() {
        let daily = sharpe(&[0.01, 0.03], false).unwrap().value().unwrap();
        let annual = sharpe(&[0.01, 0.03], true).unwrap().value().unwrap();
        assert!((annual - daily * 252.0f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn sortino_examples() {
        let hand = sortino(&[0.02, -0.01], false).unwrap().value().unwrap();
        assert!((hand - 0.70710678).abs() < 1e-5);
        assert_eq!(sortino(&[0.01, 0.02, 0.0], false).unwrap(), Metric::Undefined);
        assert_eq!(sortino(&[0.0, 0.0], false).unwrap(), Metric::Undefined);
    }

    #[test]
    fn cumulative_sum_examples() {
        assert_eq!(cumulative_sum(&[0.1, -0.1]), 0.0);
        assert_eq!(cumulative_sum(&[]), 0.0);
        assert!((cumulative_sum(&[0.05, 0.05, 0.02]) - 0.12).abs() < 1e-15);
    }

    #[test]
    fn undefined_metric_renders_explicitly() {
        assert_eq!(Metric::Undefined.to_string(), "undefined");
        assert_eq!(Metric::Defined(1.5).to_string(), "1.5000");
    }
}
