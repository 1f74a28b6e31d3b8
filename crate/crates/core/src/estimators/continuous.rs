//! Nearest-neighbor estimators for continuous samples.
//!
//! Differential entropy follows Kozachenko and Leonenko:
//!
//! ```text
//! h = psi(N) - psi(k) + ln V_d + (d / N) * sum_i ln rho_k(i)
//! ```
//!
//! where `rho_k(i)` is the distance from sample `i` to its `k`-th neighbor and
//! `V_d` is the unit-ball volume of the configured metric. Writing
//! `eps(i) = 2 rho_k(i)` (the side of the enclosing cube under the Chebyshev
//! metric) gives the equivalent `(d / N) sum ln eps(i) + ln(V_d / 2^d) + ...`.
//!
//! Mutual information, total correlation and transfer entropy are linear
//! combinations of such entropies. Every combination jitters the joint sample
//! once and evaluates marginals on column subsets of that same jittered
//! sample, so the combinations are reproducible for a fixed seed.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::special::digamma;
use crate::neighbors::kth_neighbor_distances;
use crate::sample::{KnnConfig, Metric, SampleMatrix};
use crate::Nats;

/// Entropy of an already-jittered sample.
pub(crate) fn entropy_raw(samples: &SampleMatrix, k: usize, metric: Metric) -> Result<f64> {
    let n = samples.n();
    let d = samples.d();
    let dist = kth_neighbor_distances(samples, k, metric);
    let mut sum_ln = 0.0;
    for (i, &r) in dist.iter().enumerate() {
        if r <= 0.0 {
            return Err(Error::DegenerateDistance { index: i });
        }
        sum_ln += r.ln();
    }
    Ok(digamma(n as f64)? - digamma(k as f64)? + metric.ln_unit_ball_volume(d) + d as f64 * sum_ln / n as f64)
}

/// Entropy of the listed column subset of a jittered sample.
pub(crate) fn entropy_of_columns(jittered: &SampleMatrix, cols: &[usize], cfg: &KnnConfig) -> Result<f64> {
    if cols.len() == jittered.d() {
        entropy_raw(jittered, cfg.k, cfg.metric)
    } else {
        entropy_raw(&jittered.select_columns(cols), cfg.k, cfg.metric)
    }
}

/// k-NN differential entropy of `samples` in nats.
pub fn knn_differential_entropy(samples: &SampleMatrix, cfg: &KnnConfig) -> Result<Nats> {
    cfg.check_sample_size(samples.n())?;
    let jittered = samples.jittered(cfg.jitter_sigma, cfg.seed);
    entropy_raw(&jittered, cfg.k, cfg.metric).map(Nats)
}

/// Entropy terms behind a mutual-information estimate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MiComponents {
    pub h_x: f64,
    pub h_y: f64,
    pub h_xy: f64,
}

impl MiComponents {
    /// `max(0, h_x + h_y - h_xy)`.
    pub fn mi(&self) -> f64 {
        (self.h_x + self.h_y - self.h_xy).max(0.0)
    }

    /// `mi / sqrt(h_x h_y)` when the product is positive, otherwise 0; clamped to `[0, 1]`.
    pub fn nmi(&self) -> f64 {
        let prod = self.h_x * self.h_y;
        if prod > 0.0 {
            (self.mi() / prod.sqrt()).clamp(0.0, 1.0)
        } else {
            0.0
        }
    }

    /// True when either marginal entropy estimate is not positive, which
    /// makes the normalization unreliable.
    pub fn nonpositive_marginal(&self) -> bool {
        self.h_x <= 0.0 || self.h_y <= 0.0
    }
}

/// Marginal and joint entropies of `(x, y)`; each side may be multi-dimensional.
pub fn mi_components(x: &SampleMatrix, y: &SampleMatrix, cfg: &KnnConfig) -> Result<MiComponents> {
    if x.n() != y.n() {
        return Err(Error::validation(format!(
            "sample lengths differ: {} vs {}",
            x.n(),
            y.n()
        )));
    }
    cfg.check_sample_size(x.n())?;
    let joint = x.hstack(y)?.jittered(cfg.jitter_sigma, cfg.seed);
    let xs: Vec<usize> = (0..x.d()).collect();
    let ys: Vec<usize> = (x.d()..x.d() + y.d()).collect();
    Ok(MiComponents {
        h_x: entropy_of_columns(&joint, &xs, cfg)?,
        h_y: entropy_of_columns(&joint, &ys, cfg)?,
        h_xy: entropy_raw(&joint, cfg.k, cfg.metric)?,
    })
}

/// `I(X; Y) = max(0, h(X) + h(Y) - h(X, Y))`.
pub fn mutual_information_knn(x: &SampleMatrix, y: &SampleMatrix, cfg: &KnnConfig) -> Result<Nats> {
    mi_components(x, y, cfg).map(|c| Nats(c.mi()))
}

/// Normalized mutual information of two scalar samples, in `[0, 1]`.
pub fn nmi_continuous(x: &SampleMatrix, y: &SampleMatrix, cfg: &KnnConfig) -> Result<f64> {
    if x.d() != 1 || y.d() != 1 {
        return Err(Error::validation("nmi_continuous expects one-dimensional samples"));
    }
    mi_components(x, y, cfg).map(|c| c.nmi())
}

/// `max(0, sum_i h(R_i) - h(R))` over the columns of `samples`.
pub fn total_correlation(samples: &SampleMatrix, cfg: &KnnConfig) -> Result<Nats> {
    if samples.d() < 2 {
        return Err(Error::validation("total correlation needs at least 2 columns"));
    }
    cfg.check_sample_size(samples.n())?;
    let joint = samples.jittered(cfg.jitter_sigma, cfg.seed);
    let mut marginals = 0.0;
    for j in 0..samples.d() {
        marginals += entropy_of_columns(&joint, &[j], cfg)?;
    }
    let h_joint = entropy_raw(&joint, cfg.k, cfg.metric)?;
    Ok(Nats((marginals - h_joint).max(0.0)))
}
