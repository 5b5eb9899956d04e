//! Slide an indicator network across a series and compare every aligned
//! output against its oracle.

use tinlab_oracles as oracle;
use tinlab_oracles::SeriesView;

use crate::build::IndicatorNetwork;
use crate::error::{NetError, Result};
use crate::spec::{IndicatorKind, InitScheme};

#[derive(Debug, Clone)]
pub struct ReplicationReport {
    pub kind: IndicatorKind,
    /// Number of (window, output) comparisons performed.
    pub samples: usize,
    pub max_abs_err: f64,
    /// Raw series index where the worst deviation occurred.
    pub argmax_index: usize,
    /// Output name where the worst deviation occurred.
    pub argmax_output: String,
    pub tol: f64,
    pub pass: bool,
}

/// One oracle series plus the first raw index it is aligned to.
struct Target {
    output: &'static str,
    series: Vec<f64>,
    first_valid: usize,
}

/// Verify that an untrained replicate-initialized network reproduces its
/// oracle across `data`. Trained or stochastically initialized networks are
/// rejected: their outputs are no longer claims about the oracle.
pub fn verify_replication(
    net: &mut IndicatorNetwork,
    data: &SeriesView,
    tol: f64,
) -> Result<ReplicationReport> {
    if !net.spec.init.is_replicate() {
        return Err(NetError::Usage(format!(
            "replication check needs a replicate init, network was built with {:?}",
            net.spec.init
        )));
    }
    if net.graph.any_param_stepped() {
        return Err(NetError::Usage(
            "replication check needs untrained parameters; this network has optimizer steps".into(),
        ));
    }
    data.validate()?;
    let input_len = net.input_len;
    if data.len() < input_len {
        return Err(NetError::Dimension(format!(
            "series of length {} is shorter than the network window {}",
            data.len(),
            input_len
        )));
    }

    let eps = net.spec.eps;
    let targets = build_targets(net, data, eps)?;
    let needs_hlc = matches!(net.spec.kind, IndicatorKind::Stoch | IndicatorKind::Cci);

    let mut report = ReplicationReport {
        kind: net.spec.kind,
        samples: 0,
        max_abs_err: 0.0,
        argmax_index: input_len - 1,
        argmax_output: String::new(),
        tol,
        pass: true,
    };

    for t in (input_len - 1)..data.len() {
        let start = t + 1 - input_len;
        if needs_hlc {
            let (high, low, close) = data.hlc()?;
            net.graph.bind("high", &high[start..=t])?;
            net.graph.bind("low", &low[start..=t])?;
            net.graph.bind("close", &close[start..=t])?;
        } else {
            net.graph.bind("price", &data.values[start..=t])?;
        }
        net.graph.forward()?;
        for target in &targets {
            let got = net.graph.value_scalar(net.output(target.output)?)?;
            let want = target.series[t - target.first_valid];
            let err = (got - want).abs();
            report.samples += 1;
            if err > report.max_abs_err {
                report.max_abs_err = err;
                report.argmax_index = t;
                report.argmax_output = target.output.to_string();
            }
        }
    }
    report.pass = report.max_abs_err <= tol;
    Ok(report)
}

fn build_targets(net: &IndicatorNetwork, data: &SeriesView, eps: f64) -> Result<Vec<Target>> {
    let spec = &net.spec;
    Ok(match spec.kind {
        IndicatorKind::Ma | IndicatorKind::Ema => {
            let n = spec.window("n")?;
            let series = match spec.init {
                InitScheme::ReplicateEma => oracle::ema(&data.values, n, oracle::EmaMode::Truncated)?,
                _ => oracle::sma(&data.values, n)?,
            };
            vec![Target { output: "ma", series, first_valid: n - 1 }]
        }
        IndicatorKind::Macd => {
            let fast = spec.window("fast")?;
            let slow = spec.window("slow")?;
            let sig = spec.window("signal")?;
            let ma = match spec.init {
                InitScheme::ReplicateSma => oracle::MaMode::Sma,
                _ => oracle::MaMode::Ema,
            };
            let params = oracle::MacdParams {
                fast,
                slow,
                signal: sig,
                ma,
                conventional_sign: spec.conventional_sign,
            };
            let out = oracle::macd(&data.values, &params)?;
            let first = slow + sig - 2;
            vec![
                Target { output: "macd", series: out.macd, first_valid: first },
                Target { output: "signal", series: out.signal, first_valid: first },
                Target { output: "histogram", series: out.histogram, first_valid: first },
            ]
        }
        IndicatorKind::Rsi => {
            let n = spec.window("n")?;
            vec![Target {
                output: "rsi",
                series: oracle::rsi(&data.values, n, eps)?,
                first_valid: n,
            }]
        }
        IndicatorKind::Roc => {
            let n = spec.window("n")?;
            vec![Target {
                output: "roc",
                series: oracle::roc(&data.values, n, eps)?,
                first_valid: n,
            }]
        }
        IndicatorKind::Stoch => {
            let n = spec.window("n")?;
            let m = spec.window("m")?;
            let (high, low, close) = data.hlc()?;
            let k = oracle::stoch_k(high, low, close, n, eps)?;
            let d = oracle::stoch_d(&k, m)?;
            vec![
                Target { output: "k", series: k, first_valid: n - 1 },
                Target { output: "d", series: d, first_valid: n + m - 2 },
            ]
        }
        IndicatorKind::Cci => {
            let n = spec.window("n")?;
            let (high, low, close) = data.hlc()?;
            vec![Target {
                output: "cci",
                series: oracle::cci(high, low, close, n, eps)?,
                first_valid: n - 1,
            }]
        }
        IndicatorKind::Qnet => {
            return Err(NetError::Usage(
                "qnet has no classical oracle; replication applies to indicator kinds".into(),
            ))
        }
    })
}
