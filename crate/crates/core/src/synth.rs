//! Seeded synthetic processes with closed-form information quantities.
//!
//! All generators draw from a ChaCha8 stream seeded with `GeneratorSpec::seed`,
//! so a spec reproduces the same series on every platform.

use std::f64::consts::{E, PI};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::series::ReturnSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum GeneratorKind {
    IidGaussian {
        sigma: f64,
    },
    IidUniform {
        low: f64,
        high: f64,
    },
    /// Gaussian pair with correlation `rho` and common scale `sigma`.
    CorrelatedGaussianPair {
        rho: f64,
        sigma: f64,
    },
    /// `x_t = phi x_{t-1} + sigma e_t`, started from the stationary law.
    Ar1 {
        phi: f64,
        sigma: f64,
    },
    /// `y_{t+1} = coupling * x_t + e_t` with `x ~ N(0, sigma_x^2)`, `e ~ N(0, sigma_eps^2)`.
    CoupledLagPair {
        coupling: f64,
        sigma_x: f64,
        sigma_eps: f64,
    },
    /// White noise whose scale changes from `sigma_pre` to `sigma_post` at index `switch_at`.
    VarianceSwitch {
        sigma_pre: f64,
        sigma_post: f64,
        switch_at: usize,
    },
}

impl GeneratorKind {
    pub fn name(&self) -> &'static str {
        match self {
            GeneratorKind::IidGaussian { .. } => "iid_gaussian",
            GeneratorKind::IidUniform { .. } => "iid_uniform",
            GeneratorKind::CorrelatedGaussianPair { .. } => "correlated_gaussian_pair",
            GeneratorKind::Ar1 { .. } => "ar1",
            GeneratorKind::CoupledLagPair { .. } => "coupled_lag_pair",
            GeneratorKind::VarianceSwitch { .. } => "variance_switch",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeneratorSpec {
    pub kind: GeneratorKind,
    pub n: usize,
    pub seed: u64,
}

/// Output of [`generate`]: one series, or an `(x, y)` pair.
#[derive(Debug, Clone, PartialEq)]
pub enum Generated {
    Single(ReturnSeries),
    Pair(ReturnSeries, ReturnSeries),
}

impl Generated {
    pub fn single(self) -> Option<ReturnSeries> {
        match self {
            Generated::Single(s) => Some(s),
            Generated::Pair(..) => None,
        }
    }

    pub fn pair(self) -> Option<(ReturnSeries, ReturnSeries)> {
        match self {
            Generated::Pair(x, y) => Some((x, y)),
            Generated::Single(_) => None,
        }
    }
}

/// Closed-form quantities available from [`closed_form`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Differential entropy of one (stationary) observation.
    Entropy,
    /// `I(x_t; x_{t-1})`.
    MiLag1,
    /// `I(x; y)` between the two members of a pair at the same time.
    MutualInformation,
    /// Transfer entropy from `x` to `y` at horizon one.
    TeXToY,
    /// `D(post || pre)` between the two regimes of a variance switch.
    KlPrePost,
}

impl GeneratorSpec {
    pub fn new(kind: GeneratorKind, n: usize, seed: u64) -> Result<Self> {
        let spec = Self { kind, n, seed };
        spec.validate()?;
        Ok(spec)
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::validation(format!("{name} must be positive, got {v}")))
            }
        };
        if self.n == 0 {
            return Err(Error::validation("series length must be >= 1"));
        }
        match self.kind {
            GeneratorKind::IidGaussian { sigma } => positive("sigma", sigma)?,
            GeneratorKind::IidUniform { low, high } => {
                if !(low.is_finite() && high.is_finite() && low < high) {
                    return Err(Error::validation("uniform bounds must satisfy low < high"));
                }
            }
            GeneratorKind::CorrelatedGaussianPair { rho, sigma } => {
                if !(rho.abs() < 1.0) {
                    return Err(Error::validation(format!("|rho| must be < 1, got {rho}")));
                }
                positive("sigma", sigma)?;
            }
            GeneratorKind::Ar1 { phi, sigma } => {
                if !(phi.abs() < 1.0) {
                    return Err(Error::validation(format!("|phi| must be < 1, got {phi}")));
                }
                positive("sigma", sigma)?;
            }
            GeneratorKind::CoupledLagPair {
                coupling,
                sigma_x,
                sigma_eps,
            } => {
                if !coupling.is_finite() {
                    return Err(Error::validation("coupling must be finite"));
                }
                positive("sigma_x", sigma_x)?;
                positive("sigma_eps", sigma_eps)?;
            }
            GeneratorKind::VarianceSwitch {
                sigma_pre,
                sigma_post,
                switch_at,
            } => {
                positive("sigma_pre", sigma_pre)?;
                positive("sigma_post", sigma_post)?;
                if switch_at == 0 || switch_at >= self.n {
                    return Err(Error::validation("switch point must satisfy 0 < switch_at < n"));
                }
            }
        }
        Ok(())
    }
}

fn normal(rng: &mut ChaCha8Rng) -> f64 {
    StandardNormal.sample(rng)
}

/// Draws the series described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<Generated> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let n = spec.n;
    let single = |v: Vec<f64>| ReturnSeries::with_business_days(v).map(Generated::Single);
    match spec.kind {
        GeneratorKind::IidGaussian { sigma } => single((0..n).map(|_| sigma * normal(&mut rng)).collect()),
        GeneratorKind::IidUniform { low, high } => {
            single((0..n).map(|_| low + (high - low) * rng.random::<f64>()).collect())
        }
        GeneratorKind::CorrelatedGaussianPair { rho, sigma } => {
            let c = (1.0 - rho * rho).sqrt();
            let (mut x, mut y) = (Vec::with_capacity(n), Vec::with_capacity(n));
            for _ in 0..n {
                let (z1, z2) = (normal(&mut rng), normal(&mut rng));
                x.push(sigma * z1);
                y.push(sigma * (rho * z1 + c * z2));
            }
            Ok(Generated::Pair(
                ReturnSeries::with_business_days(x)?,
                ReturnSeries::with_business_days(y)?,
            ))
        }
        GeneratorKind::Ar1 { phi, sigma } => {
            let mut v = Vec::with_capacity(n);
            let mut prev = sigma / (1.0 - phi * phi).sqrt() * normal(&mut rng);
            v.push(prev);
            for _ in 1..n {
                prev = phi * prev + sigma * normal(&mut rng);
                v.push(prev);
            }
            single(v)
        }
        GeneratorKind::CoupledLagPair {
            coupling,
            sigma_x,
            sigma_eps,
        } => {
            let x: Vec<f64> = (0..n).map(|_| sigma_x * normal(&mut rng)).collect();
            let stationary = (coupling * coupling * sigma_x * sigma_x + sigma_eps * sigma_eps).sqrt();
            let mut y = Vec::with_capacity(n);
            y.push(stationary * normal(&mut rng));
            for &xt in &x[..n - 1] {
                y.push(coupling * xt + sigma_eps * normal(&mut rng));
            }
            Ok(Generated::Pair(
                ReturnSeries::with_business_days(x)?,
                ReturnSeries::with_business_days(y)?,
            ))
        }
        GeneratorKind::VarianceSwitch {
            sigma_pre,
            sigma_post,
            switch_at,
        } => single(
            (0..n)
                .map(|t| if t < switch_at { sigma_pre } else { sigma_post } * normal(&mut rng))
                .collect(),
        ),
    }
}

fn gaussian_entropy(variance: f64) -> f64 {
    0.5 * (2.0 * PI * E * variance).ln()
}

/// `D(N(0, s1^2) || N(0, s2^2))`.
pub fn gaussian_kl(s1: f64, s2: f64) -> f64 {
    let r = (s1 * s1) / (s2 * s2);
    0.5 * (r - r.ln() - 1.0)
}

/// Analytic value of `quantity` for the process in `spec`, in nats.
pub fn closed_form(spec: &GeneratorSpec, quantity: Quantity) -> Result<f64> {
    spec.validate()?;
    let unsupported = || Error::UnsupportedQuantity {
        kind: spec.kind.name().to_string(),
        quantity: format!("{quantity:?}"),
    };
    use GeneratorKind as K;
    use Quantity as Q;
    match (spec.kind, quantity) {
        (K::IidGaussian { sigma }, Q::Entropy) => Ok(gaussian_entropy(sigma * sigma)),
        (K::IidUniform { low, high }, Q::Entropy) => Ok((high - low).ln()),
        (K::IidGaussian { .. } | K::IidUniform { .. }, Q::MiLag1) => Ok(0.0),
        (K::CorrelatedGaussianPair { sigma, .. }, Q::Entropy) => Ok(gaussian_entropy(sigma * sigma)),
        (K::CorrelatedGaussianPair { rho, .. }, Q::MutualInformation) => Ok(-0.5 * (1.0 - rho * rho).ln()),
        (K::CorrelatedGaussianPair { .. }, Q::TeXToY | Q::MiLag1) => Ok(0.0),
        (K::Ar1 { phi, sigma }, Q::Entropy) => Ok(gaussian_entropy(sigma * sigma / (1.0 - phi * phi))),
        (K::Ar1 { phi, .. }, Q::MiLag1) => Ok(-0.5 * (1.0 - phi * phi).ln()),
        (
            K::CoupledLagPair {
                coupling,
                sigma_x,
                sigma_eps,
            },
            Q::TeXToY,
        ) => Ok(0.5 * (1.0 + coupling * coupling * sigma_x * sigma_x / (sigma_eps * sigma_eps)).ln()),
        (K::CoupledLagPair { sigma_x, .. }, Q::Entropy) => Ok(gaussian_entropy(sigma_x * sigma_x)),
        (
            K::VarianceSwitch {
                sigma_pre, sigma_post, ..
            },
            Q::KlPrePost,
        ) => Ok(gaussian_kl(sigma_post, sigma_pre)),
        _ => Err(unsupported()),
    }
}
