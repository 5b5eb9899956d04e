//! Indicator network construction and verification.
//!
//! An indicator network is a compute graph whose topology mirrors a classical
//! indicator and whose initial weights make it numerically equal to the
//! corresponding oracle, before any training. This crate builds the networks,
//! documents their declarative spec format and checks the replication claim.

mod build;
mod error;
mod spec;
mod verify;
mod weights;

pub use build::{
    build, build_cci_in, build_ma_in, build_macd_in, build_q_in, build_roc_in, build_rsi_in,
    build_stoch_in, corrupt_first_weight, IndicatorNetwork,
};
pub use error::{NetError, Result};
pub use spec::{IndicatorKind, IndicatorNetworkSpec, InitScheme};
pub use verify::{verify_replication, ReplicationReport};
pub use weights::{ema_weights, sma_weights};
