//! Assemble overall and per-symbol performance tables from episode results.

use std::collections::BTreeMap;

use tinlab_env::EpisodeResult;

use crate::{
    cumulative_sum, episode_returns, equal_weight_mean, sharpe, sortino, Metric, MetricsError,
    Result,
};

#[derive(Debug, Clone, Copy)]
pub struct StrategyMetrics {
    pub sharpe: Metric,
    pub sortino: Metric,
    pub cumulative_sum: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct SymbolMetrics {
    pub sharpe: Metric,
    pub sortino: Metric,
}

/// Overall row per strategy plus a symbol-by-strategy ratio table.
#[derive(Debug, Clone)]
pub struct PerformanceReport {
    pub strategies: Vec<String>,
    pub overall: BTreeMap<String, StrategyMetrics>,
    pub per_symbol: BTreeMap<String, BTreeMap<String, SymbolMetrics>>,
    /// Cumulative sum path of the equal-weight mean daily return.
    pub curves: BTreeMap<String, Vec<f64>>,
    pub warnings: Vec<String>,
}

/// `results[symbol][strategy]` must be nonempty. Symbols with fewer than two
/// equity points are excluded with a warning instead of failing the report.
pub fn build_report(
    results: &BTreeMap<String, BTreeMap<String, EpisodeResult>>,
    annualize: bool,
) -> Result<PerformanceReport> {
    if results.is_empty() {
        return Err(MetricsError::Dimension("no results to report".into()));
    }
    let mut strategies: Vec<String> = Vec::new();
    for per_strategy in results.values() {
        for name in per_strategy.keys() {
            if !strategies.contains(name) {
                strategies.push(name.clone());
            }
        }
    }
    strategies.sort();

    let mut warnings = Vec::new();
    let mut per_symbol: BTreeMap<String, BTreeMap<String, SymbolMetrics>> = BTreeMap::new();
    let mut per_strategy_returns: BTreeMap<String, Vec<Vec<f64>>> = BTreeMap::new();

    for (symbol, per_strategy) in results {
        for strategy in &strategies {
            let Some(result) = per_strategy.get(strategy) else { continue };
            if result.equity_curve.len() < 2 {
                warnings.push(format!(
                    "{symbol}/{strategy}: fewer than 2 equity points, excluded"
                ));
                continue;
            }
            let returns = episode_returns(result)?;
            per_symbol.entry(symbol.clone()).or_default().insert(
                strategy.clone(),
                SymbolMetrics {
                    sharpe: sharpe(&returns, annualize)?,
                    sortino: sortino(&returns, annualize)?,
                },
            );
            per_strategy_returns.entry(strategy.clone()).or_default().push(returns);
        }
    }

    let mut overall = BTreeMap::new();
    let mut curves = BTreeMap::new();
    for strategy in &strategies {
        let Some(series) = per_strategy_returns.get(strategy) else { continue };
        if series.is_empty() {
            continue;
        }
        let mean_returns = equal_weight_mean(series);
        if mean_returns.len() < 2 {
            warnings.push(format!("{strategy}: overall series too short, excluded"));
            continue;
        }
        overall.insert(
            strategy.clone(),
            StrategyMetrics {
                sharpe: sharpe(&mean_returns, annualize)?,
                sortino: sortino(&mean_returns, annualize)?,
                cumulative_sum: cumulative_sum(&mean_returns),
            },
        );
        let mut acc = 0.0;
        curves.insert(
            strategy.clone(),
            mean_returns
                .iter()
                .map(|r| {
                    acc += r;
                    acc
                })
                .collect(),
        );
    }

    Ok(PerformanceReport { strategies, overall, per_symbol, curves, warnings })
}

impl PerformanceReport {
    /// Overall table: one row per strategy with the three headline metrics.
    pub fn overall_csv(&self) -> String {
        let mut out = String::from("Strategy,Sharpe Ratio,Sortino Ratio,Cumulative Sum\n");
        for (strategy, m) in &self.overall {
            out.push_str(&format!(
                "{strategy},{},{},{}\n",
                m.sharpe, m.sortino, m.cumulative_sum
            ));
        }
        out
    }

    /// Symbol table: Sharpe and Sortino per strategy, one row per symbol.
    pub fn per_symbol_csv(&self) -> String {
        let mut out = String::from("Symbol");
        for strategy in &self.strategies {
            out.push_str(&format!(",{strategy} Sharpe,{strategy} Sortino"));
        }
        out.push('\n');
        for (symbol, per_strategy) in &self.per_symbol {
            out.push_str(symbol);
            for strategy in &self.strategies {
                match per_strategy.get(strategy) {
                    Some(m) => out.push_str(&format!(",{},{}", m.sharpe, m.sortino)),
                    None => out.push_str(",,"),
                }
            }
            out.push('\n');
        }
        out
    }

    /// Fixed-width rendering of both tables for terminals and logs.
    pub fn text_table(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{:<16} {:>14} {:>14} {:>15}\n",
            "Strategy", "Sharpe Ratio", "Sortino Ratio", "Cumulative Sum"
        ));
        for (strategy, m) in &self.overall {
            out.push_str(&format!(
                "{:<16} {:>14} {:>14} {:>15.4}\n",
                strategy,
                m.sharpe.to_string(),
                m.sortino.to_string(),
                m.cumulative_sum
            ));
        }
        out.push('\n');
        out.push_str(&format!("{:<10}", "Symbol"));
        for strategy in &self.strategies {
            out.push_str(&format!(" {:>16} {:>16}", format!("{strategy} Shp"), format!("{strategy} Srt")));
        }
        out.push('\n');
        for (symbol, per_strategy) in &self.per_symbol {
            out.push_str(&format!("{symbol:<10}"));
            for strategy in &self.strategies {
                match per_strategy.get(strategy) {
                    Some(m) => out.push_str(&format!(
                        " {:>16} {:>16}",
                        m.sharpe.to_string(),
                        m.sortino.to_string()
                    )),
                    None => out.push_str(&format!(" {:>16} {:>16}", "-", "-")),
                }
            }
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chrono::NaiveDate;
    use tinlab_env::Action;

    fn episode(rewards: &[f64]) -> EpisodeResult {
        let mut equity_curve = vec![1.0];
        for r in rewards {
            let next = equity_curve.last().unwrap() * (1.0 + r);
            equity_curve.push(next);
        }
        EpisodeResult {
            equity_curve,
            actions: vec![Action::Hold; rewards.len()],
            rewards: rewards.to_vec(),
            dates: (0..rewards.len())
                .map(|i| NaiveDate::from_ymd_opt(2021, 1, 1).unwrap() + chrono::Days::new(i as u64))
                .collect(),
            trade_count: 0,
        }
    }

    #[test]
    fn single_symbol_overall_equals_per_symbol() {
        let mut results = BTreeMap::new();
        let mut strategies = BTreeMap::new();
        strategies.insert("demo".to_string(), episode(&[0.01, -0.02, 0.03]));
        results.insert("AAA".to_string(), strategies);
        let report = build_report(&results, false).unwrap();
        let overall = report.overall["demo"];
        let symbol = report.per_symbol["AAA"]["demo"];
        assert!((overall.sharpe.value().unwrap() - symbol.sharpe.value().unwrap()).abs() < 1e-12);
        assert!((overall.sortino.value().unwrap() - symbol.sortino.value().unwrap()).abs() < 1e-12);
    }

    #[test]
    fn mirror_image_returns_cancel_in_the_overall_row() {
        let mut results = BTreeMap::new();
        let mut a = BTreeMap::new();
        a.insert("demo".to_string(), episode(&[0.01, -0.02, 0.005]));
        results.insert("AAA".to_string(), a);
        let mut b = BTreeMap::new();
        b.insert("demo".to_string(), episode(&[-0.01, 0.02, -0.005]));
        results.insert("BBB".to_string(), b);
        let report = build_report(&results, false).unwrap();
        let overall = report.overall["demo"];
        // returns are not exactly mirror after compounding, but the mean of
        // the raw reward mirrors exactly through simple returns
        assert!(overall.cumulative_sum.abs() < 1e-10);
        assert!(overall.sharpe.value().unwrap().abs() < 1e-6);
    }

    #[test]
    fn short_curves_are_excluded_with_a_warning() {
        let mut results = BTreeMap::new();
        let mut a = BTreeMap::new();
        a.insert("demo".to_string(), episode(&[]));
        results.insert("AAA".to_string(), a);
        let mut b = BTreeMap::new();
        b.insert("demo".to_string(), episode(&[0.01, 0.02, -0.01]));
        results.insert("BBB".to_string(), b);
        let report = build_report(&results, false).unwrap();
        assert_eq!(report.warnings.len(), 1);
        assert!(report.per_symbol.get("AAA").is_none());
        assert!(report.overall.contains_key("demo"));
    }

    #[test]
    fn csv_headers_match_the_table_schema() {
        let mut results = BTreeMap::new();
        let mut strategies = BTreeMap::new();
        strategies.insert("demo".to_string(), episode(&[0.01, -0.02]));
        results.insert("AAA".to_string(), strategies);
        let report = build_report(&results, false).unwrap();
        assert!(report
            .overall_csv()
            .starts_with("Strategy,Sharpe Ratio,Sortino Ratio,Cumulative Sum\n"));
        assert!(report.per_symbol_csv().starts_with("Symbol,demo Sharpe,demo Sortino\n"));
    }
}
