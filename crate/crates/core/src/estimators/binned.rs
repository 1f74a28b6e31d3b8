//! Histogram-based KL divergence between two scalar samples.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::discrete::{kl_divergence_probs, MASS_TOLERANCE};
use crate::sample::SampleMatrix;
use crate::Nats;

/// Default number of histogram bins.
pub const DEFAULT_BINS: usize = 50;
/// Default additive smoothing applied to each bin mass.
pub const DEFAULT_SMOOTHING: f64 = 1e-10;

/// Bin probabilities over fixed, strictly increasing edges.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BinnedDistribution {
    edges: Vec<f64>,
    probs: Vec<f64>,
    smoothing: f64,
}

impl BinnedDistribution {
    /// Histograms `values` on `edges`; values outside the edges are clamped
    /// into the end bins. `smoothing` is added to every bin's relative
    /// frequency before renormalizing.
    pub fn from_values(values: &[f64], edges: Vec<f64>, smoothing: f64) -> Result<Self> {
        if edges.len() < 3 {
            return Err(Error::validation("need at least 2 bins"));
        }
        if edges.windows(2).any(|w| !(w[0] < w[1])) {
            return Err(Error::validation("bin edges must be strictly increasing"));
        }
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        if !smoothing.is_finite() || smoothing < 0.0 {
            return Err(Error::validation("smoothing must be a non-negative finite number"));
        }
        let bins = edges.len() - 1;
        let mut counts = vec![0usize; bins];
        for &v in values {
            counts[locate(&edges, v)] += 1;
        }
        let n = values.len() as f64;
        let total = 1.0 + bins as f64 * smoothing;
        let probs = counts.iter().map(|&c| (c as f64 / n + smoothing) / total).collect();
        let out = Self {
            edges,
            probs,
            smoothing,
        };
        debug_assert!((out.probs.iter().sum::<f64>() - 1.0).abs() <= MASS_TOLERANCE);
        Ok(out)
    }

    pub fn edges(&self) -> &[f64] {
        &self.edges
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn smoothing(&self) -> f64 {
        self.smoothing
    }

    pub fn bins(&self) -> usize {
        self.probs.len()
    }
}

/// Index of the bin holding `v`; the last bin is closed on the right.
fn locate(edges: &[f64], v: f64) -> usize {
    let bins = edges.len() - 1;
    // first edge strictly greater than v, minus one
    let pos = edges.partition_point(|&e| e <= v);
    pos.saturating_sub(1).min(bins - 1)
}

/// `bins` equal-width bins spanning `[min, max]` of the pooled values.
pub fn shared_edges(a: &[f64], b: &[f64], bins: usize) -> Result<Vec<f64>> {
    if bins < 2 {
        return Err(Error::validation("need at least 2 bins"));
    }
    let (lo, hi) = a
        .iter()
        .chain(b)
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &v| {
            (lo.min(v), hi.max(v))
        });
    if !(hi > lo) {
        return Err(Error::DegenerateRange);
    }
    let width = (hi - lo) / bins as f64;
    let mut edges: Vec<f64> = (0..bins).map(|i| lo + i as f64 * width).collect();
    edges.push(hi);
    Ok(edges)
}

/// `D(current || reference)` between histograms on shared equal-width bins.
///
/// The divergence is the plain sum over bin probabilities; it is not scaled
/// by the bin width.
pub fn kl_divergence_binned(
    current: &SampleMatrix,
    reference: &SampleMatrix,
    bins: usize,
    smoothing: f64,
) -> Result<Nats> {
    if current.d() != 1 || reference.d() != 1 {
        return Err(Error::validation("binned KL expects one-dimensional samples"));
    }
    kl_binned_slices(current.as_slice(), reference.as_slice(), bins, smoothing)
}

pub(crate) fn kl_binned_slices(current: &[f64], reference: &[f64], bins: usize, smoothing: f64) -> Result<Nats> {
    if current.is_empty() || reference.is_empty() {
        return Err(Error::EmptyInput);
    }
    let edges = shared_edges(current, reference, bins)?;
    let p = BinnedDistribution::from_values(current, edges.clone(), smoothing)?;
    let q = BinnedDistribution::from_values(reference, edges, smoothing)?;
    kl_divergence_probs(p.probs(), q.probs())
}
