use crate::error::{OracleError, Result};

/// A primary value series with optional aligned high/low/close/volume
/// channels. This is the shared input shape for every oracle; the stochastic
/// and CCI oracles need the extra channels, everything else reads `values`.
#[derive(Debug, Clone, Default)]
pub struct SeriesView {
    pub values: Vec<f64>,
    pub high: Option<Vec<f64>>,
    pub low: Option<Vec<f64>>,
    pub close: Option<Vec<f64>>,
    pub volume: Option<Vec<f64>>,
}

impl SeriesView {
    pub fn from_values(values: Vec<f64>) -> Result<Self> {
        let view = Self { values, ..Self::default() };
        view.validate()?;
        Ok(view)
    }

    pub fn with_hlc(high: Vec<f64>, low: Vec<f64>, close: Vec<f64>) -> Result<Self> {
        let view = Self {
            values: close.clone(),
            high: Some(high),
            low: Some(low),
            close: Some(close),
            volume: None,
        };
        view.validate()?;
        Ok(view)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.values.len();
        for (name, channel) in [
            ("high", &self.high),
            ("low", &self.low),
            ("close", &self.close),
            ("volume", &self.volume),
        ] {
            if let Some(c) = channel {
                if c.len() != n {
                    return Err(OracleError::Dimension(format!(
                        "channel '{name}' has length {}, expected {n}",
                        c.len()
                    )));
                }
                if c.iter().any(|v| !v.is_finite()) {
                    return Err(OracleError::Domain(format!(
                        "channel '{name}' holds a non-finite value"
                    )));
                }
            }
        }
        if self.values.iter().any(|v| !v.is_finite()) {
            return Err(OracleError::Domain("values hold a non-finite entry".into()));
        }
        if let (Some(high), Some(low)) = (&self.high, &self.low) {
            for (i, (h, l)) in high.iter().zip(low).enumerate() {
                if l > h {
                    return Err(OracleError::Domain(format!(
                        "low exceeds high at index {i}: {l} > {h}"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn hlc(&self) -> Result<(&[f64], &[f64], &[f64])> {
        match (&self.high, &self.low, &self.close) {
            (Some(h), Some(l), Some(c)) => Ok((h, l, c)),
            _ => Err(OracleError::Dimension(
                "series is missing high/low/close channels".into(),
            )),
        }
    }
}
