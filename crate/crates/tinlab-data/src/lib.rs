//! Market data ingestion: CSV bars, derived OBV, feature matrices and
//! normalized observation windows. Everything is immutable after load and
//! safe to share across threads.

mod bars;
mod error;
mod features;

pub use bars::{emit_csv, parse_csv, OhlcvBar};
pub use error::{DataError, Result};
pub use features::{compute_obv, to_feature_matrix, window, Channel, FeatureMatrix, WindowMode};
