use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::estimators::binned::{DEFAULT_BINS, DEFAULT_SMOOTHING};
use crate::finance::{DEFAULT_BETA, DEFAULT_THETA_NMI};
use crate::rolling::{RollingSpec, DEFAULT_WINDOW};
use crate::sample::{KnnConfig, DEFAULT_JITTER_SIGMA, DEFAULT_KNN_K};

/// Default z-score threshold for raising a regime flag.
pub const DEFAULT_THETA_KL: f64 = 2.0;

/// Every tunable parameter of an analysis run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub window: usize,
    pub knn_k: usize,
    pub jitter_sigma: f64,
    pub bins: usize,
    pub smoothing: f64,
    pub lag: usize,
    pub theta_nmi: f64,
    pub theta_kl: f64,
    pub beta: f64,
    pub stride: usize,
    pub seed: u64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            knn_k: DEFAULT_KNN_K,
            jitter_sigma: DEFAULT_JITTER_SIGMA,
            bins: DEFAULT_BINS,
            smoothing: DEFAULT_SMOOTHING,
            lag: 1,
            theta_nmi: DEFAULT_THETA_NMI,
            theta_kl: DEFAULT_THETA_KL,
            beta: DEFAULT_BETA,
            stride: 1,
            seed: 0,
        }
    }
}

impl AnalysisConfig {
    pub fn knn(&self) -> Result<KnnConfig> {
        KnnConfig::new(self.knn_k, self.jitter_sigma, self.seed)
    }

    pub fn rolling(&self) -> Result<RollingSpec> {
        let spec = RollingSpec::new(self.window)?
            .with_stride(self.stride)
            .with_lag(self.lag);
        spec.validate()?;
        Ok(spec)
    }
}
