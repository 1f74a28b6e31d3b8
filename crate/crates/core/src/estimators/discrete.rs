//! Plug-in information measures on finite distributions and contingency tables.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::Nats;

/// Tolerance on the total mass of a probability vector.
pub const MASS_TOLERANCE: f64 = 1e-9;

/// A probability mass function over a finite support.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscreteDistribution {
    probs: Vec<f64>,
    labels: Option<Vec<String>>,
}

fn check_probs(probs: &[f64]) -> Result<()> {
    if probs.is_empty() {
        return Err(Error::validation("distribution has empty support"));
    }
    for (i, &p) in probs.iter().enumerate() {
        if !p.is_finite() || p < 0.0 {
            return Err(Error::validation(format!(
                "mass {p} at index {i} is not a non-negative finite number"
            )));
        }
    }
    let total: f64 = probs.iter().sum();
    if (total - 1.0).abs() > MASS_TOLERANCE {
        return Err(Error::validation(format!("masses sum to {total}, expected 1")));
    }
    Ok(())
}

impl DiscreteDistribution {
    pub fn new(probs: Vec<f64>) -> Result<Self> {
        check_probs(&probs)?;
        Ok(Self { probs, labels: None })
    }

    pub fn with_labels(probs: Vec<f64>, labels: Vec<String>) -> Result<Self> {
        if labels.len() != probs.len() {
            return Err(Error::validation("label count does not match support size"));
        }
        check_probs(&probs)?;
        Ok(Self {
            probs,
            labels: Some(labels),
        })
    }

    /// Normalizes non-negative weights (e.g. counts) into a distribution.
    pub fn from_weights(weights: &[f64]) -> Result<Self> {
        let total: f64 = weights.iter().sum();
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) || total <= 0.0 || !total.is_finite() {
            return Err(Error::validation(
                "weights must be non-negative with a positive finite total",
            ));
        }
        Self::new(weights.iter().map(|w| w / total).collect())
    }

    pub fn uniform(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::validation("distribution has empty support"));
        }
        Ok(Self {
            probs: vec![1.0 / n as f64; n],
            labels: None,
        })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }
}

/// A joint distribution over `X x Y`, stored row-major with rows indexed by `X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointDistribution {
    rows: usize,
    cols: usize,
    dist: DiscreteDistribution,
}

impl JointDistribution {
    pub fn new(rows: usize, cols: usize, probs: Vec<f64>) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != probs.len() {
            return Err(Error::validation(format!(
                "grid shape {rows}x{cols} does not match {} cells",
                probs.len()
            )));
        }
        Ok(Self {
            rows,
            cols,
            dist: DiscreteDistribution::new(probs)?,
        })
    }

    /// Builds a joint from a flat distribution, checking the grid shape.
    pub fn from_distribution(rows: usize, cols: usize, dist: DiscreteDistribution) -> Result<Self> {
        if rows == 0 || cols == 0 || rows * cols != dist.len() {
            return Err(Error::validation(format!(
                "grid shape {rows}x{cols} does not match {} cells",
                dist.len()
            )));
        }
        Ok(Self { rows, cols, dist })
    }

    /// Product distribution `p(x) q(y)`.
    pub fn product(px: &DiscreteDistribution, py: &DiscreteDistribution) -> Result<Self> {
        let probs = px
            .probs()
            .iter()
            .flat_map(|a| py.probs().iter().map(move |b| a * b))
            .collect();
        Self::new(px.len(), py.len(), probs)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, x: usize, y: usize) -> f64 {
        self.dist.probs[x * self.cols + y]
    }

    pub fn as_distribution(&self) -> &DiscreteDistribution {
        &self.dist
    }

    pub fn marginal_x(&self) -> Vec<f64> {
        (0..self.rows)
            .map(|x| (0..self.cols).map(|y| self.get(x, y)).sum())
            .collect()
    }

    pub fn marginal_y(&self) -> Vec<f64> {
        (0..self.cols)
            .map(|y| (0..self.rows).map(|x| self.get(x, y)).sum())
            .collect()
    }

    /// Swaps the roles of `X` and `Y`.
    pub fn transpose(&self) -> Self {
        let mut probs = Vec::with_capacity(self.dist.len());
        for y in 0..self.cols {
            for x in 0..self.rows {
                probs.push(self.get(x, y));
            }
        }
        Self {
            rows: self.cols,
            cols: self.rows,
            dist: DiscreteDistribution { probs, labels: None },
        }
    }
}

fn plugin_entropy(probs: &[f64]) -> f64 {
    probs.iter().filter(|&&p| p > 0.0).map(|&p| -p * p.ln()).sum()
}

/// Shannon entropy `-sum p ln p`, with `0 ln 0 = 0`.
pub fn discrete_entropy(p: &DiscreteDistribution) -> Nats {
    Nats(plugin_entropy(p.probs()))
}

/// Joint entropy `H(X, Y)`.
pub fn joint_entropy(joint: &JointDistribution) -> Nats {
    discrete_entropy(joint.as_distribution())
}

/// Conditional entropy `H(Y | X) = -sum p(x, y) ln p(y | x)`.
pub fn conditional_entropy(joint: &JointDistribution) -> Nats {
    let px = joint.marginal_x();
    let mut h = 0.0;
    for (x, &mx) in px.iter().enumerate() {
        for y in 0..joint.cols() {
            let pxy = joint.get(x, y);
            if pxy > 0.0 {
                h -= pxy * (pxy / mx).ln();
            }
        }
    }
    Nats(h.max(0.0))
}

/// `D(p || q) = sum p ln(p / q)`.
///
/// Fails with [`Error::DivergenceUndefined`] when `q` vanishes where `p` has mass.
pub fn kl_divergence_discrete(p: &DiscreteDistribution, q: &DiscreteDistribution) -> Result<Nats> {
    kl_divergence_probs(p.probs(), q.probs())
}

pub(crate) fn kl_divergence_probs(p: &[f64], q: &[f64]) -> Result<Nats> {
    if p.len() != q.len() {
        return Err(Error::validation(format!(
            "support sizes differ: {} vs {}",
            p.len(),
            q.len()
        )));
    }
    let mut d = 0.0;
    for (i, (&pi, &qi)) in p.iter().zip(q).enumerate() {
        if pi > 0.0 {
            if qi <= 0.0 {
                return Err(Error::DivergenceUndefined { index: i, mass: pi });
            }
            d += pi * (pi / qi).ln();
        }
    }
    Ok(Nats(d.max(0.0)))
}

/// `I(X; Y) = sum p(x, y) ln(p(x, y) / (p(x) p(y)))`.
pub fn mutual_information_discrete(joint: &JointDistribution) -> Nats {
    let px = joint.marginal_x();
    let py = joint.marginal_y();
    let mut terms = Vec::with_capacity(px.len() * py.len());
    for (x, &mx) in px.iter().enumerate() {
        for (y, &my) in py.iter().enumerate() {
            let pxy = joint.get(x, y);
            if pxy > 0.0 {
                terms.push(pxy * (pxy / (mx * my)).ln());
            }
        }
    }
    // order-independent sum so that I(X; Y) and I(Y; X) agree bit for bit
    terms.sort_by(f64::total_cmp);
    Nats(terms.iter().sum::<f64>().max(0.0))
}

/// `I(U; V) / sqrt(H(U) H(V))` on a contingency table, clamped to `[0, 1]`.
pub fn nmi_discrete(joint: &JointDistribution) -> Result<f64> {
    let hu = plugin_entropy(&joint.marginal_x());
    let hv = plugin_entropy(&joint.marginal_y());
    if hu <= 0.0 || hv <= 0.0 {
        return Err(Error::UndefinedNormalization);
    }
    let mi = mutual_information_discrete(joint).0;
    Ok((mi / (hu * hv).sqrt()).clamp(0.0, 1.0))
}
