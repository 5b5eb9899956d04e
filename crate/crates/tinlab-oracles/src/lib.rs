//! Independent, loop-based reference implementations of the classical
//! indicators that the network builders replicate: SMA, EMA, MACD, RSI, ROC,
//! stochastic %K/%D, CCI and OBV.
//!
//! All functions are pure and safe to call concurrently.

mod error;
mod indicators;
mod series;

pub use error::{OracleError, Result};
pub use indicators::{
    cci, ema, macd, obv, roc, rsi, sma, stoch_d, stoch_k, EmaMode, MaMode, MacdParams,
    MacdSeries, ORACLE_EPS, TRAIN_EPS,
};
pub use series::SeriesView;
