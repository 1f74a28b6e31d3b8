//! Nonparametric information theory for financial time series.
//!
//! * [`estimators`]: discrete entropies and divergences, histogram KL, and
//!   k-nearest-neighbor differential entropy, mutual information, NMI and
//!   total correlation.
//! * [`rolling`]: rolling entropy, KL regime flags, rolling NMI and transfer
//!   entropy.
//! * [`finance`]: log returns, entropy-adjusted VaR, the diversification
//!   functional and its optimizer, NMI momentum signals and a backtester.
//! * [`synth`]: seeded processes with closed-form information content.
//! * [`io`]: CSV ingestion and the common output schema.
//!
//! All logarithms are natural; every information quantity is in nats.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod error;
pub mod estimators;
pub mod finance;
pub mod io;
pub mod neighbors;
pub mod rolling;
pub mod sample;
pub mod series;
pub mod synth;

use serde::{Deserialize, Serialize};

pub use config::AnalysisConfig;
pub use error::{Error, Result};
pub use sample::{KnnConfig, Metric, SampleMatrix};
pub use series::{PriceSeries, ReturnSeries, TimeSeries, Timestamp};

/// An information quantity in nats.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct Nats(pub f64);

impl Nats {
    pub fn value(self) -> f64 {
        self.0
    }
}

impl std::fmt::Display for Nats {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} nats", self.0)
    }
}
