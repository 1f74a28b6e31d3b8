#![allow(dead_code)]

use entrofin_core::synth::{generate, GeneratorKind, GeneratorSpec};
use entrofin_core::{ReturnSeries, SampleMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

/// `0.5 * ln(2 pi e)`.
pub const GAUSSIAN_ENTROPY: f64 = 1.418_938_533_204_672_7;

pub fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

pub fn median(v: &[f64]) -> f64 {
    let mut s = v.to_vec();
    s.sort_by(f64::total_cmp);
    let n = s.len();
    if n % 2 == 1 {
        s[n / 2]
    } else {
        0.5 * (s[n / 2 - 1] + s[n / 2])
    }
}

pub fn single(kind: GeneratorKind, n: usize, seed: u64) -> ReturnSeries {
    generate(&GeneratorSpec::new(kind, n, seed).unwrap())
        .unwrap()
        .single()
        .unwrap()
}

pub fn pair(kind: GeneratorKind, n: usize, seed: u64) -> (ReturnSeries, ReturnSeries) {
    generate(&GeneratorSpec::new(kind, n, seed).unwrap())
        .unwrap()
        .pair()
        .unwrap()
}

pub fn column(s: &ReturnSeries) -> SampleMatrix {
    SampleMatrix::from_column(s.values()).unwrap()
}

pub fn gaussian(n: usize, sigma: f64, seed: u64) -> SampleMatrix {
    column(&single(GeneratorKind::IidGaussian { sigma }, n, seed))
}

/// Standard Gaussian columns with correlation `rho`.
pub fn correlated(n: usize, rho: f64, seed: u64) -> (SampleMatrix, SampleMatrix) {
    let (x, y) = pair(GeneratorKind::CorrelatedGaussianPair { rho, sigma: 1.0 }, n, seed);
    (column(&x), column(&y))
}

/// `d` standard Gaussian columns with common pairwise correlation `rho` in `[0, 1)`.
pub fn equicorrelated(n: usize, d: usize, rho: f64, seed: u64) -> SampleMatrix {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (a, b) = (rho.sqrt(), (1.0 - rho).sqrt());
    let mut data = Vec::with_capacity(n * d);
    for _ in 0..n {
        let common: f64 = StandardNormal.sample(&mut rng);
        for _ in 0..d {
            let own: f64 = StandardNormal.sample(&mut rng);
            data.push(a * common + b * own);
        }
    }
    SampleMatrix::new(data, n, d).unwrap()
}
