//! Weight initialization vectors that make a single weighted-sum layer equal
//! a classical moving average.

use crate::error::{NetError, Result};

/// Uniform weights `1/n`; the layer becomes a simple moving average.
pub fn sma_weights(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(NetError::Config("sma weights need n >= 1".into()));
    }
    Ok(vec![1.0 / n as f64; n])
}

/// Normalized geometric-decay weights with `alpha = 2 / (n + 1)`, indexed
/// oldest first (`w[n-1]` multiplies the most recent value). A layer with
/// these weights equals the truncated EMA oracle by construction.
pub fn ema_weights(n: usize) -> Result<Vec<f64>> {
    if n == 0 {
        return Err(NetError::Config("ema weights need n >= 1".into()));
    }
    let alpha = 2.0 / (n as f64 + 1.0);
    let mut w: Vec<f64> = (0..n)
        .map(|i| alpha * (1.0 - alpha).powi((n - 1 - i) as i32))
        .collect();
    let norm: f64 = w.iter().sum();
    for v in &mut w {
        *v /= norm;
    }
    Ok(w)
}
