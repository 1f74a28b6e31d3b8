use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::binned::kl_binned_slices;
use crate::rolling::{map_windows, window_edges, RollingSpec};
use crate::series::{ReturnSeries, TimeSeries, Timestamp};

/// KL divergence of each trailing window against the window immediately before it.
///
/// At right edge `t` this is `D(r[t-w+1..=t] || r[t-2w+1..=t-w])` on `bins`
/// shared equal-width bins. `stride == window` gives the non-overlapping variant.
pub fn rolling_kl(r: &ReturnSeries, spec: &RollingSpec, bins: usize, smoothing: f64) -> Result<TimeSeries> {
    spec.validate()?;
    let w = spec.window;
    if r.len() < 2 * w {
        return Err(Error::InsufficientData {
            required: 2 * w,
            available: r.len(),
        });
    }
    let edges: Vec<usize> = window_edges(r.len(), 2 * w, spec.stride, 2 * w, r.len())?;
    let v = r.values();
    let values = map_windows(&edges, |e| {
        let current = &v[e + 1 - w..=e];
        let reference = &v[e + 1 - 2 * w..=e - w];
        kl_binned_slices(current, reference, bins, smoothing).map(|d| d.0)
    })?;
    TimeSeries::new(edges.iter().map(|&e| r.timestamps()[e]).collect(), values)
}

/// Source of the mean and standard deviation used to standardize a KL series.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Baseline {
    Fixed {
        mu: f64,
        sigma: f64,
    },
    /// Mean and sample standard deviation of the whole supplied series.
    FullSample,
    /// Mean and sample standard deviation of values up to and including `t`;
    /// z is 0 until two values are available or while the spread is zero.
    Expanding,
}

/// KL values with their z-scores and regime flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RegimeSeries {
    pub timestamps: Vec<Timestamp>,
    pub kl_nats: Vec<f64>,
    pub z_score: Vec<f64>,
    pub flag: Vec<bool>,
    pub threshold: f64,
}

impl RegimeSeries {
    /// Timestamps at which the flag is raised.
    pub fn flagged(&self) -> impl Iterator<Item = Timestamp> + '_ {
        self.timestamps
            .iter()
            .zip(&self.flag)
            .filter(|(_, &f)| f)
            .map(|(t, _)| *t)
    }
}

fn mean_std(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    if xs.len() < 2 {
        return (mean, 0.0);
    }
    let var = xs.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// `z = (kl - mu) / sigma`, flagged where `z > threshold`.
pub fn standardize_and_flag(kl: &TimeSeries, baseline: Baseline, threshold: f64) -> Result<RegimeSeries> {
    let values = kl.values();
    let z_score: Vec<f64> = match baseline {
        Baseline::Fixed { mu, sigma } => {
            if !(sigma > 0.0) || !mu.is_finite() {
                return Err(Error::validation(format!("sigma must be positive, got {sigma}")));
            }
            values.iter().map(|v| (v - mu) / sigma).collect()
        }
        Baseline::FullSample => {
            let (mu, sigma) = mean_std(values);
            if !(sigma > 0.0) {
                return Err(Error::validation("KL series has zero spread; supply mu and sigma"));
            }
            values.iter().map(|v| (v - mu) / sigma).collect()
        }
        Baseline::Expanding => {
            let mut out = Vec::with_capacity(values.len());
            let (mut sum, mut sumsq) = (0.0, 0.0);
            for (i, &v) in values.iter().enumerate() {
                sum += v;
                sumsq += v * v;
                let n = (i + 1) as f64;
                let z = if i == 0 {
                    0.0
                } else {
                    let mean = sum / n;
                    let var = ((sumsq - n * mean * mean) / (n - 1.0)).max(0.0);
                    if var > 0.0 {
                        (v - mean) / var.sqrt()
                    } else {
                        0.0
                    }
                };
                out.push(z);
            }
            out
        }
    };
    let flag = z_score.iter().map(|&z| z > threshold).collect();
    Ok(RegimeSeries {
        timestamps: kl.timestamps().to_vec(),
        kl_nats: values.to_vec(),
        z_score,
        flag,
        threshold,
    })
}
