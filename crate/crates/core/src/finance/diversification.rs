//! Entropy-based diversification functional and a derivative-free simplex search.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::knn_differential_entropy;
use crate::sample::{KnnConfig, SampleMatrix};

const WEIGHT_TOLERANCE: f64 = 1e-9;

/// Long-only weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PortfolioWeights(Vec<f64>);

impl PortfolioWeights {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::validation("weights are empty"));
        }
        if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
            return Err(Error::validation("weights must be non-negative"));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_TOLERANCE {
            return Err(Error::validation(format!("weights sum to {total}, expected 1")));
        }
        Ok(Self(weights))
    }

    pub fn equal(n: usize) -> Result<Self> {
        Self::new(vec![1.0 / n as f64; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Asset returns with their marginal entropies cached.
pub struct DiversificationProblem<'a> {
    assets: &'a SampleMatrix,
    cfg: KnnConfig,
    marginals: Vec<f64>,
}

impl<'a> DiversificationProblem<'a> {
    pub fn new(assets: &'a SampleMatrix, cfg: &KnnConfig) -> Result<Self> {
        cfg.check_sample_size(assets.n())?;
        let marginals = (0..assets.d())
            .map(|j| {
                let col = SampleMatrix::from_column(&assets.column(j))?;
                knn_differential_entropy(&col, cfg).map(|h| h.0)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            assets,
            cfg: *cfg,
            marginals,
        })
    }

    pub fn marginal_entropies(&self) -> &[f64] {
        &self.marginals
    }

    /// `J(w) = sum_i w_i h(R_i) - h(w^T R)`.
    pub fn objective(&self, w: &PortfolioWeights) -> Result<f64> {
        let d = self.assets.d();
        if w.len() != d {
            return Err(Error::validation(format!("{} weights for {d} assets", w.len())));
        }
        let portfolio: Vec<f64> = (0..self.assets.n())
            .map(|i| self.assets.row(i).iter().zip(w.as_slice()).map(|(r, w)| r * w).sum())
            .collect();
        let h_port = knn_differential_entropy(&SampleMatrix::from_column(&portfolio)?, &self.cfg)?.0;
        let weighted: f64 = self.marginals.iter().zip(w.as_slice()).map(|(h, w)| h * w).sum();
        Ok(weighted - h_port)
    }
}

/// Diversification functional of `w` over the columns of `assets`.
pub fn diversification_objective(w: &PortfolioWeights, assets: &SampleMatrix, cfg: &KnnConfig) -> Result<f64> {
    if w.len() != assets.d() {
        return Err(Error::validation(format!(
            "{} weights for {} assets",
            w.len(),
            assets.d()
        )));
    }
    DiversificationProblem::new(assets, cfg)?.objective(w)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Sense {
    Minimize,
    Maximize,
}

impl Sense {
    fn better(self, a: f64, b: f64) -> bool {
        match self {
            Sense::Minimize => a < b,
            Sense::Maximize => a > b,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizationResult {
    pub weights: PortfolioWeights,
    pub objective: f64,
    pub evaluations: usize,
}

/// Euclidean projection onto the probability simplex.
fn project_to_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cumsum = 0.0;
    let mut theta = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cumsum += ui;
        let t = (cumsum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            theta = t;
        }
    }
    let mut w: Vec<f64> = v.iter().map(|x| (x - theta).max(0.0)).collect();
    let s: f64 = w.iter().sum();
    w.iter_mut().for_each(|x| *x /= s);
    w
}

/// Uniform draw from the simplex (flat Dirichlet).
fn sample_simplex(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    let e: Vec<f64> = (0..n).map(|_| -(1.0 - rng.random::<f64>()).ln()).collect();
    let s: f64 = e.iter().sum();
    e.into_iter().map(|x| x / s).collect()
}

/// Derivative-free search for the weights optimizing the diversification functional.
///
/// Half of the evaluations after the starting point go to uniform samples of
/// the simplex, evaluated in parallel; the rest refine the incumbent by
/// perturbing one coordinate and projecting back onto the simplex, halving
/// the step after each failed move. The first candidate is `initial` when
/// given, otherwise equal weights. Without `initial` the budget must be at
/// least the asset count.
pub fn optimize_diversification(
    assets: &SampleMatrix,
    sense: Sense,
    cfg: &KnnConfig,
    budget: usize,
    initial: Option<PortfolioWeights>,
) -> Result<OptimizationResult> {
    let n = assets.d();
    if n < 2 {
        return Err(Error::validation("need at least 2 assets"));
    }
    let min_budget = if initial.is_some() { 1 } else { n };
    if budget < min_budget {
        return Err(Error::validation(format!(
            "budget {budget} is below the minimum {min_budget}"
        )));
    }
    let problem = DiversificationProblem::new(assets, cfg)?;
    let start = match initial {
        Some(w) if w.len() != n => {
            return Err(Error::validation(format!("{} initial weights for {n} assets", w.len())))
        }
        Some(w) => w,
        None => PortfolioWeights::equal(n)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut best_obj = problem.objective(&start)?;
    let mut best = start;
    let mut used = 1;

    let random_count = (budget - used) / 2;
    let candidates: Vec<PortfolioWeights> = (0..random_count)
        .map(|_| PortfolioWeights::new(sample_simplex(&mut rng, n)))
        .collect::<Result<_>>()?;
    let scores = candidates
        .par_iter()
        .map(|w| problem.objective(w))
        .collect::<Result<Vec<_>>>()?;
    used += random_count;
    for (w, s) in candidates.into_iter().zip(scores) {
        if sense.better(s, best_obj) {
            best = w;
            best_obj = s;
        }
    }

    let mut step = 0.25;
    while used < budget {
        let i = rng.random_range(0..n);
        let sign = if rng.random::<bool>() { 1.0 } else { -1.0 };
        let mut v = best.as_slice().to_vec();
        v[i] += sign * step;
        let cand = PortfolioWeights::new(project_to_simplex(&v))?;
        let s = problem.objective(&cand)?;
        used += 1;
        if sense.better(s, best_obj) {
            best = cand;
            best_obj = s;
        } else {
            step = (step * 0.5).max(1e-4);
        }
    }
    Ok(OptimizationResult {
        weights: best,
        objective: best_obj,
        evaluations: used,
    })
}
