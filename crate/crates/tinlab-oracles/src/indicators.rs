//! The reference indicator implementations. Every function is a plain loop
//! over slices so it can stand as ground truth for the network builders.
//!
//! Alignment convention: outputs start at the first time step where every
//! window involved is full, with no padding. An output at index `j`
//! corresponds to raw index `j + (first_valid)` of the input series.

use crate::error::{OracleError, Result};

/// Division regularizer used when verifying replication fidelity.
pub const ORACLE_EPS: f64 = 1e-12;
/// Division regularizer used when networks are being trained.
pub const TRAIN_EPS: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmaMode {
    /// `e_t = alpha * p_t + (1 - alpha) * e_{t-1}`, seeded with `e_0 = p_0`.
    Recursive,
    /// Geometric-decay weights restricted to an `n`-window and renormalized
    /// to sum 1. This is the form a single weighted-sum layer can represent.
    Truncated,
}

/// Which moving average the MACD stages use.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MaMode {
    Sma,
    Ema,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MacdParams {
    pub fast: usize,
    pub slow: usize,
    pub signal: usize,
    pub ma: MaMode,
    /// The default sign is `slow MA - fast MA`; setting this flips it to the
    /// conventional `fast MA - slow MA`.
    pub conventional_sign: bool,
}

impl MacdParams {
    pub fn ema(fast: usize, slow: usize, signal: usize) -> Self {
        Self { fast, slow, signal, ma: MaMode::Ema, conventional_sign: false }
    }

    pub fn sma(fast: usize, slow: usize, signal: usize) -> Self {
        Self { fast, slow, signal, ma: MaMode::Sma, conventional_sign: false }
    }

    /// Shortest input that produces one aligned output triple.
    pub fn min_len(&self) -> usize {
        self.slow + self.signal - 1
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MacdSeries {
    pub macd: Vec<f64>,
    pub signal: Vec<f64>,
    pub histogram: Vec<f64>,
}

fn check_window(n: usize, len: usize, what: &str) -> Result<()> {
    if n == 0 || n > len {
        return Err(OracleError::Dimension(format!(
            "{what} window {n} out of range for series of length {len}"
        )));
    }
    Ok(())
}

/// Simple moving average; output `j` is the mean of the `n` values ending at
/// raw index `j + n - 1`.
pub fn sma(values: &[f64], n: usize) -> Result<Vec<f64>> {
    check_window(n, values.len(), "sma")?;
    let mut out = Vec::with_capacity(values.len() - n + 1);
    for j in 0..=values.len() - n {
        let sum: f64 = values[j..j + n].iter().sum();
        out.push(sum / n as f64);
    }
    Ok(out)
}

/// Normalized geometric-decay weights for a truncated EMA, oldest first.
fn truncated_ema_weights(n: usize) -> Vec<f64> {
    let alpha = 2.0 / (n as f64 + 1.0);
    let mut w: Vec<f64> = (0..n)
        .map(|i| alpha * (1.0 - alpha).powi((n - 1 - i) as i32))
        .collect();
    let norm: f64 = w.iter().sum();
    for v in &mut w {
        *v /= norm;
    }
    w
}

/// Exponential moving average with `alpha = 2 / (n + 1)`.
///
/// Recursive mode is a plain recurrence and emits one value per input;
/// truncated mode emits `len - n + 1` window-aligned values and requires a
/// full window.
pub fn ema(values: &[f64], n: usize, mode: EmaMode) -> Result<Vec<f64>> {
    if n == 0 || values.is_empty() {
        return Err(OracleError::Dimension(format!(
            "ema window {n} invalid for series of length {}",
            values.len()
        )));
    }
    if mode == EmaMode::Truncated {
        check_window(n, values.len(), "ema")?;
    }
    match mode {
        EmaMode::Recursive => {
            let alpha = 2.0 / (n as f64 + 1.0);
            let mut out = Vec::with_capacity(values.len());
            let mut e = values[0];
            out.push(e);
            for &p in &values[1..] {
                e = alpha * p + (1.0 - alpha) * e;
                out.push(e);
            }
            Ok(out)
        }
        EmaMode::Truncated => {
            let w = truncated_ema_weights(n);
            let mut out = Vec::with_capacity(values.len() - n + 1);
            for j in 0..=values.len() - n {
                let mut acc = 0.0;
                for i in 0..n {
                    acc += w[i] * values[j + i];
                }
                out.push(acc);
            }
            Ok(out)
        }
    }
}

/// MACD line, signal line and histogram, all aligned to the first index where
/// the slow window and the signal window are both full.
pub fn macd(values: &[f64], params: &MacdParams) -> Result<MacdSeries> {
    if params.fast >= params.slow {
        return Err(OracleError::Config(format!(
            "macd fast window {} must be smaller than slow window {}",
            params.fast, params.slow
        )));
    }
    if params.signal == 0 {
        return Err(OracleError::Config("macd signal window must be >= 1".into()));
    }
    check_window(params.slow, values.len(), "macd slow")?;
    if values.len() < params.min_len() {
        return Err(OracleError::Dimension(format!(
            "macd needs at least {} values, got {}",
            params.min_len(),
            values.len()
        )));
    }
    let ma = |n: usize| -> Result<Vec<f64>> {
        match params.ma {
            MaMode::Sma => sma(values, n),
            MaMode::Ema => ema(values, n, EmaMode::Truncated),
        }
    };
    let fast_ma = ma(params.fast)?;
    let slow_ma = ma(params.slow)?;
    // both series end at the last raw index; trim the fast one at the front
    let skip = params.slow - params.fast;
    let mut line: Vec<f64> = slow_ma
        .iter()
        .zip(&fast_ma[skip..])
        .map(|(s, f)| if params.conventional_sign { f - s } else { s - f })
        .collect();
    let signal = ema(&line, params.signal, EmaMode::Truncated)?;
    line.drain(..params.signal - 1);
    let histogram: Vec<f64> = line.iter().zip(&signal).map(|(m, s)| m - s).collect();
    Ok(MacdSeries { macd: line, signal, histogram })
}

/// Cutler-style RSI: window means of gains and losses, not recursive
/// smoothing, so one linear layer can represent it.
pub fn rsi(values: &[f64], n: usize, eps: f64) -> Result<Vec<f64>> {
    if values.len() < n + 1 {
        return Err(OracleError::Dimension(format!(
            "rsi needs at least {} values, got {}",
            n + 1,
            values.len()
        )));
    }
    check_window(n, values.len() - 1, "rsi")?;
    let diffs: Vec<f64> = values.windows(2).map(|w| w[1] - w[0]).collect();
    let mut out = Vec::with_capacity(diffs.len() - n + 1);
    for j in 0..=diffs.len() - n {
        let mut gains = 0.0;
        let mut losses = 0.0;
        for &d in &diffs[j..j + n] {
            gains += d.max(0.0);
            losses += (-d).max(0.0);
        }
        let g = gains / n as f64;
        let l = losses / n as f64;
        out.push(100.0 * g / (g + l + eps));
    }
    Ok(out)
}

/// Rate of change over an `n`-step lag, in percent.
pub fn roc(values: &[f64], n: usize, eps: f64) -> Result<Vec<f64>> {
    if values.len() <= n || n == 0 {
        return Err(OracleError::Dimension(format!(
            "roc needs more than {n} values, got {}",
            values.len()
        )));
    }
    if let Some(p) = values.iter().find(|&&p| p <= 0.0) {
        return Err(OracleError::Domain(format!("roc requires positive prices, found {p}")));
    }
    Ok((0..values.len() - n)
        .map(|j| 100.0 * (values[n + j] - values[j]) / (values[j] + eps))
        .collect())
}

/// Stochastic %K: position of the close within the window's high-low range.
pub fn stoch_k(high: &[f64], low: &[f64], close: &[f64], n: usize, eps: f64) -> Result<Vec<f64>> {
    if high.len() != low.len() || low.len() != close.len() {
        return Err(OracleError::Dimension(format!(
            "stochastic channels must align: high {}, low {}, close {}",
            high.len(),
            low.len(),
            close.len()
        )));
    }
    check_window(n, close.len(), "stoch_k")?;
    let mut out = Vec::with_capacity(close.len() - n + 1);
    for j in 0..=close.len() - n {
        let hh = high[j..j + n].iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let ll = low[j..j + n].iter().cloned().fold(f64::INFINITY, f64::min);
        out.push(100.0 * (close[j + n - 1] - ll) / (hh - ll + eps));
    }
    Ok(out)
}

/// Stochastic %D is the `m`-period simple moving average of %K.
pub fn stoch_d(k_series: &[f64], m: usize) -> Result<Vec<f64>> {
    sma(k_series, m)
}

/// Commodity channel index with the standard 0.015 scaling constant.
pub fn cci(high: &[f64], low: &[f64], close: &[f64], n: usize, eps: f64) -> Result<Vec<f64>> {
    if high.len() != low.len() || low.len() != close.len() {
        return Err(OracleError::Dimension(format!(
            "cci channels must align: high {}, low {}, close {}",
            high.len(),
            low.len(),
            close.len()
        )));
    }
    check_window(n, close.len(), "cci")?;
    let tp: Vec<f64> = (0..close.len())
        .map(|i| (high[i] + low[i] + close[i]) / 3.0)
        .collect();
    let mut out = Vec::with_capacity(tp.len() - n + 1);
    for j in 0..=tp.len() - n {
        let window = &tp[j..j + n];
        let mean = window.iter().sum::<f64>() / n as f64;
        let mad = window.iter().map(|&x| (x - mean).abs()).sum::<f64>() / n as f64;
        out.push((tp[j + n - 1] - mean) / (0.015 * (mad + eps)));
    }
    Ok(out)
}

/// On-balance volume, seeded at 0; ties in the close contribute nothing.
pub fn obv(close: &[f64], volume: &[f64]) -> Result<Vec<f64>> {
    if close.len() != volume.len() {
        return Err(OracleError::Dimension(format!(
            "obv channels must align: close {}, volume {}",
            close.len(),
            volume.len()
        )));
    }
    if close.is_empty() {
        return Err(OracleError::Dimension("obv needs at least one bar".into()));
    }
    if let Some(v) = volume.iter().find(|&&v| v < 0.0) {
        return Err(OracleError::Domain(format!("obv requires nonnegative volume, found {v}")));
    }
    let mut out = Vec::with_capacity(close.len());
    let mut acc = 0.0;
    out.push(acc);
    for t in 1..close.len() {
        let sign = if close[t] > close[t - 1] {
            1.0
        } else if close[t] < close[t - 1] {
            -1.0
        } else {
            0.0
        };
        acc += sign * volume[t];
        out.push(acc);
    }
    Ok(out)
}
