//! Sample containers and k-NN estimator configuration.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// `N` observations of a `d`-dimensional real vector, stored row-major.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SampleMatrix {
    data: Vec<f64>,
    n: usize,
    d: usize,
}

impl SampleMatrix {
    pub fn new(data: Vec<f64>, n: usize, d: usize) -> Result<Self> {
        if n == 0 || d == 0 {
            return Err(Error::validation(format!(
                "sample matrix must be non-empty, got {n}x{d}"
            )));
        }
        if data.len() != n * d {
            return Err(Error::validation(format!(
                "{} values cannot fill a {n}x{d} matrix",
                data.len()
            )));
        }
        if let Some(i) = data.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!("non-finite entry at row {}", i / d)));
        }
        Ok(Self { data, n, d })
    }

    /// One-dimensional sample.
    pub fn from_column(values: &[f64]) -> Result<Self> {
        Self::new(values.to_vec(), values.len(), 1)
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let d = rows.first().map(Vec::len).unwrap_or(0);
        if rows.iter().any(|r| r.len() != d) {
            return Err(Error::validation("rows have differing lengths"));
        }
        Self::new(rows.concat(), rows.len(), d)
    }

    /// Stacks equal-length columns side by side.
    pub fn from_columns(cols: &[&[f64]]) -> Result<Self> {
        let n = cols.first().map(|c| c.len()).unwrap_or(0);
        if cols.iter().any(|c| c.len() != n) {
            return Err(Error::validation("columns have differing lengths"));
        }
        let d = cols.len();
        let mut data = Vec::with_capacity(n * d);
        for i in 0..n {
            data.extend(cols.iter().map(|c| c[i]));
        }
        Self::new(data, n, d)
    }

    /// Concatenates the columns of `self` and `other`.
    pub fn hstack(&self, other: &SampleMatrix) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::validation(format!(
                "sample lengths differ: {} vs {}",
                self.n, other.n
            )));
        }
        let d = self.d + other.d;
        let mut data = Vec::with_capacity(self.n * d);
        for i in 0..self.n {
            data.extend_from_slice(self.row(i));
            data.extend_from_slice(other.row(i));
        }
        Ok(Self { data, n: self.n, d })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.d..(i + 1) * self.d]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.n).map(|i| self.data[i * self.d + j]).collect()
    }

    /// Sub-matrix made of the listed columns, in order.
    pub fn select_columns(&self, cols: &[usize]) -> Self {
        let mut data = Vec::with_capacity(self.n * cols.len());
        for i in 0..self.n {
            let row = self.row(i);
            data.extend(cols.iter().map(|&j| row[j]));
        }
        Self {
            data,
            n: self.n,
            d: cols.len(),
        }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self {
            data: self.data.iter().map(|v| v * c).collect(),
            n: self.n,
            d: self.d,
        }
    }

    /// Adds i.i.d. `N(0, sigma^2)` noise drawn from a ChaCha8 stream seeded with `seed`.
    pub fn jittered(&self, sigma: f64, seed: u64) -> Self {
        if sigma == 0.0 {
            return self.clone();
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = self
            .data
            .iter()
            .map(|v| {
                let z: f64 = StandardNormal.sample(&mut rng);
                v + sigma * z
            })
            .collect();
        Self {
            data,
            n: self.n,
            d: self.d,
        }
    }
}

/// Distance used for neighbor search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum Metric {
    /// Maximum-coordinate distance; its unit ball is the cube `[-1, 1]^d`.
    #[default]
    Chebyshev,
    Euclidean,
}

impl Metric {
    /// Natural log of the unit-ball volume under this metric.
    pub fn ln_unit_ball_volume(self, d: usize) -> f64 {
        match self {
            Metric::Chebyshev => d as f64 * std::f64::consts::LN_2,
            Metric::Euclidean => crate::estimators::special::ln_unit_ball_volume(d),
        }
    }
}

/// Default additive jitter scale.
pub const DEFAULT_JITTER_SIGMA: f64 = 1e-10;
/// Default neighbor count.
pub const DEFAULT_KNN_K: usize = 3;

/// Hyperparameters for the nearest-neighbor estimators.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct KnnConfig {
    pub k: usize,
    pub jitter_sigma: f64,
    pub seed: u64,
    pub metric: Metric,
}

impl Default for KnnConfig {
    fn default() -> Self {
        Self {
            k: DEFAULT_KNN_K,
            jitter_sigma: DEFAULT_JITTER_SIGMA,
            seed: 0,
            metric: Metric::Chebyshev,
        }
    }
}

impl KnnConfig {
    pub fn new(k: usize, jitter_sigma: f64, seed: u64) -> Result<Self> {
        let cfg = Self {
            k,
            jitter_sigma,
            seed,
            metric: Metric::Chebyshev,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_metric(mut self, metric: Metric) -> Self {
        self.metric = metric;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.k == 0 {
            return Err(Error::validation("k must be at least 1"));
        }
        if !self.jitter_sigma.is_finite() || self.jitter_sigma < 0.0 {
            return Err(Error::validation("jitter_sigma must be a non-negative finite number"));
        }
        Ok(())
    }

    /// Checks `1 <= k <= n - 1`.
    pub fn check_sample_size(&self, n: usize) -> Result<()> {
        self.validate()?;
        if n < self.k + 1 {
            return Err(Error::InsufficientData {
                required: self.k + 1,
                available: n,
            });
        }
        Ok(())
    }
}
