//! Per-symbol feature matrices and fixed-length observation windows.

use chrono::NaiveDate;
use tinlab_oracles::obv;

use crate::bars::OhlcvBar;
use crate::error::{DataError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// Adjusted close, used both as the model input and as the execution
    /// price in the simulator.
    Price,
    /// On-balance volume derived from adjusted close and volume.
    Obv,
}

impl Channel {
    pub fn as_str(&self) -> &'static str {
        match self {
            Channel::Price => "price",
            Channel::Obv => "obv",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "price" => Ok(Channel::Price),
            "obv" => Ok(Channel::Obv),
            other => Err(DataError::Config(format!(
                "unknown channel '{other}' (expected price or obv)"
            ))),
        }
    }
}

/// How `window` scales the raw rows.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum WindowMode {
    /// Price entries divided by the window's final price; OBV entries divided
    /// by `max(1, max |obv|)` within the window.
    #[default]
    LastPriceRelative,
    /// Raw values, for replication checks that need untouched prices.
    Raw,
}

#[derive(Debug, Clone)]
pub struct FeatureMatrix {
    pub symbol: String,
    pub channels: Vec<Channel>,
    /// `rows[t][c]` is channel `c` at date index `t`, untransformed.
    pub rows: Vec<Vec<f64>>,
    pub dates: Vec<NaiveDate>,
}

impl FeatureMatrix {
    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn width(&self) -> usize {
        self.channels.len()
    }

    pub fn channel_index(&self, channel: Channel) -> Option<usize> {
        self.channels.iter().position(|&c| c == channel)
    }

    /// Raw column for one channel.
    pub fn column(&self, channel: Channel) -> Result<Vec<f64>> {
        let idx = self
            .channel_index(channel)
            .ok_or_else(|| DataError::Config(format!("matrix has no '{}' channel", channel.as_str())))?;
        Ok(self.rows.iter().map(|r| r[idx]).collect())
    }

    /// Execution price at index `t`.
    pub fn price(&self, t: usize) -> Result<f64> {
        let idx = self
            .channel_index(Channel::Price)
            .ok_or_else(|| DataError::Config("matrix has no price channel".into()))?;
        self.rows
            .get(t)
            .map(|r| r[idx])
            .ok_or_else(|| DataError::Range(format!("index {t} out of range ({} rows)", self.len())))
    }
}

/// OBV channel over adjusted close and volume.
pub fn compute_obv(bars: &[OhlcvBar]) -> Result<Vec<f64>> {
    if bars.is_empty() {
        return Err(DataError::Format("no bars".into()));
    }
    let close: Vec<f64> = bars.iter().map(|b| b.adj_close).collect();
    let volume: Vec<f64> = bars.iter().map(|b| b.volume).collect();
    Ok(obv(&close, &volume)?)
}

pub fn to_feature_matrix(symbol: &str, bars: &[OhlcvBar], channels: &[Channel]) -> Result<FeatureMatrix> {
    if bars.is_empty() {
        return Err(DataError::Format("no bars".into()));
    }
    if channels.is_empty() {
        return Err(DataError::Config("at least one channel is required".into()));
    }
    let mut columns: Vec<Vec<f64>> = Vec::with_capacity(channels.len());
    for channel in channels {
        columns.push(match channel {
            Channel::Price => bars.iter().map(|b| b.adj_close).collect(),
            Channel::Obv => compute_obv(bars)?,
        });
    }
    let rows: Vec<Vec<f64>> = (0..bars.len())
        .map(|t| columns.iter().map(|c| c[t]).collect())
        .collect();
    Ok(FeatureMatrix {
        symbol: symbol.to_string(),
        channels: channels.to_vec(),
        rows,
        dates: bars.iter().map(|b| b.date).collect(),
    })
}

/// Observation ending at row `t`: `len` rows per channel, concatenated
/// channel-major (all price entries, then all obv entries).
pub fn window(fm: &FeatureMatrix, t: usize, len: usize, mode: WindowMode) -> Result<Vec<f64>> {
    if len == 0 {
        return Err(DataError::Config("window length must be >= 1".into()));
    }
    if t >= fm.len() || t + 1 < len {
        return Err(DataError::Range(format!(
            "window of {len} ending at {t} does not fit in {} rows",
            fm.len()
        )));
    }
    let start = t + 1 - len;
    let mut out = Vec::with_capacity(len * fm.width());
    for (c, channel) in fm.channels.iter().enumerate() {
        let raw: Vec<f64> = (start..=t).map(|i| fm.rows[i][c]).collect();
        match (mode, channel) {
            (WindowMode::Raw, _) => out.extend_from_slice(&raw),
            (WindowMode::LastPriceRelative, Channel::Price) => {
                let last = raw[len - 1];
                out.extend(raw.iter().map(|v| v / last));
            }
            (WindowMode::LastPriceRelative, Channel::Obv) => {
                let scale = raw.iter().map(|v| v.abs()).fold(1.0f64, f64::max);
                out.extend(raw.iter().map(|v| v / scale));
            }
        }
    }
    if out.iter().any(|v| !v.is_finite()) {
        return Err(DataError::Range(format!("window ending at {t} holds a non-finite value")));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bar(day: u32, adj_close: f64, volume: f64) -> OhlcvBar {
        OhlcvBar {
            date: NaiveDate::from_ymd_opt(2021, 1, day).unwrap(),
            open: adj_close,
            high: adj_close * 1.01,
            low: adj_close * 0.99,
            close: adj_close,
            adj_close,
            volume,
        }
    }

    #[test]
    fn obv_matches_recurrence() {
        let bars = vec![bar(1, 1.0, 10.0), bar(2, 2.0, 20.0), bar(3, 2.0, 30.0), bar(4, 1.0, 40.0)];
        assert_eq!(compute_obv(&bars).unwrap(), vec![0.0, 20.0, 20.0, -20.0]);
        assert_eq!(compute_obv(&bars[..1]).unwrap(), vec![0.0]);
    }

    #[test]
    fn feature_matrix_width_tracks_channels() {
        let bars = vec![bar(1, 10.0, 1.0), bar(2, 11.0, 2.0)];
        let fm = to_feature_matrix("TEST", &bars, &[Channel::Price]).unwrap();
        assert_eq!(fm.width(), 1);
        let fm = to_feature_matrix("TEST", &bars, &[Channel::Price, Channel::Obv]).unwrap();
        assert_eq!(fm.width(), 2);
        assert_eq!(fm.column(Channel::Obv).unwrap(), compute_obv(&bars).unwrap());
        assert!(to_feature_matrix("TEST", &[], &[Channel::Price]).is_err());
    }

    #[test]
    fn constant_price_window_normalizes_to_ones() {
        let bars: Vec<OhlcvBar> = (1..=5).map(|d| bar(d, 50.0, 10.0)).collect();
        let fm = to_feature_matrix("TEST", &bars, &[Channel::Price]).unwrap();
        let obs = window(&fm, 3, 4, WindowMode::LastPriceRelative).unwrap();
        assert_eq!(obs, vec![1.0; 4]);
    }

    #[test]
    fn price_window_is_relative_to_final_price() {
        let bars = vec![bar(1, 100.0, 1.0), bar(2, 110.0, 1.0)];
        let fm = to_feature_matrix("TEST", &bars, &[Channel::Price]).unwrap();
        let obs = window(&fm, 1, 2, WindowMode::LastPriceRelative).unwrap();
        assert!((obs[0] - 100.0 / 110.0).abs() < 1e-15);
        assert_eq!(obs[1], 1.0);
    }

    #[test]
    fn zero_obv_stays_zero_through_the_guard() {
        let bars: Vec<OhlcvBar> = (1..=4).map(|d| bar(d, 42.0, 99.0)).collect();
        let fm = to_feature_matrix("TEST", &bars, &[Channel::Price, Channel::Obv]).unwrap();
        let obs = window(&fm, 3, 3, WindowMode::LastPriceRelative).unwrap();
        assert_eq!(&obs[3..], &[0.0, 0.0, 0.0]);
    }

    #[test]
    fn insufficient_history_is_a_range_error() {
        let bars = vec![bar(1, 10.0, 1.0), bar(2, 11.0, 2.0)];
        let fm = to_feature_matrix("TEST", &bars, &[Channel::Price]).unwrap();
        assert!(matches!(
            window(&fm, 0, 2, WindowMode::LastPriceRelative),
            Err(DataError::Range(_))
        ));
    }
}
