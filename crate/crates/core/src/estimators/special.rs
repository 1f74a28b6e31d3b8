//! Special functions needed by the nearest-neighbor estimators.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Below this the argument is shifted upward with `psi(x) = psi(x + 1) - 1/x`.
const ASYMPTOTIC_THRESHOLD: f64 = 10.0;

/// Digamma function `psi(x)` for `x > 0`.
///
/// Small arguments are moved into the asymptotic region by the recurrence,
/// then the Bernoulli-number series is summed through the `x^-14` term.
pub fn digamma(x: f64) -> Result<f64> {
    if !x.is_finite() || x <= 0.0 {
        return Err(Error::Domain(format!("digamma requires x > 0, got {x}")));
    }
    let mut x = x;
    let mut acc = 0.0;
    while x < ASYMPTOTIC_THRESHOLD {
        acc -= 1.0 / x;
        x += 1.0;
    }
    let inv2 = 1.0 / (x * x);
    // B_2n / (2n) for n = 1..=7
    let series = inv2
        * (1.0 / 12.0
            - inv2
                * (1.0 / 120.0
                    - inv2
                        * (1.0 / 252.0
                            - inv2 * (1.0 / 240.0 - inv2 * (1.0 / 132.0 - inv2 * (691.0 / 32760.0 - inv2 / 12.0))))));
    Ok(acc + x.ln() - 0.5 / x - series)
}

/// `ln Gamma(m / 2)` for a positive integer `m`, exact up to rounding.
fn ln_gamma_half_integer(m: usize) -> f64 {
    debug_assert!(m >= 1);
    let (mut value, mut arg) = if m.is_multiple_of(2) {
        (0.0, 1.0) // Gamma(1) = 1
    } else {
        (0.5 * PI.ln(), 0.5) // Gamma(1/2) = sqrt(pi)
    };
    let target = m as f64 / 2.0;
    while arg < target {
        value += arg.ln();
        arg += 1.0;
    }
    value
}

/// Natural log of the Euclidean unit-ball volume in `d` dimensions.
pub fn ln_unit_ball_volume(d: usize) -> f64 {
    0.5 * d as f64 * PI.ln() - ln_gamma_half_integer(d + 2)
}

/// Volume of the Euclidean unit ball, `pi^(d/2) / Gamma(d/2 + 1)`.
pub fn unit_ball_volume(d: usize) -> Result<f64> {
    if d == 0 {
        return Err(Error::validation("unit ball dimension must be >= 1"));
    }
    Ok(ln_unit_ball_volume(d).exp())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

    /// psi(x) = -gamma + sum_{n>=0} (1/(n+1) - 1/(n+x)), with the tail
    /// approximated by the midpoint integral ln((M + x - 1/2) / (M + 1/2)).
    fn digamma_series(x: f64) -> f64 {
        let terms = 2_000_000usize;
        let mut s = 0.0;
        for n in 0..terms {
            let n = n as f64;
            s += 1.0 / (n + 1.0) - 1.0 / (n + x);
        }
        let m = terms as f64;
        s += ((m + x - 0.5) / (m + 0.5)).ln();
        -EULER_GAMMA + s
    }

    #[test]
    fn digamma_known_values() {
        assert_abs_diff_eq!(digamma(1.0).unwrap(), -0.577_215_664_9, epsilon = 1e-10);
        assert_abs_diff_eq!(digamma(2.0).unwrap(), digamma(1.0).unwrap() + 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(digamma(0.5).unwrap(), -EULER_GAMMA - 2.0 * 2f64.ln(), epsilon = 1e-10);
        assert_abs_diff_eq!(digamma(0.5).unwrap(), -1.963_510_026_0, epsilon = 1e-10);
    }

    #[test]
    fn digamma_matches_series() {
        for &x in &[0.1, 0.5, 1.0, 2.5, 3.0, 7.3, 12.0, 250.0] {
            assert_abs_diff_eq!(digamma(x).unwrap(), digamma_series(x), epsilon = 1e-9);
        }
    }

    #[test]
    fn digamma_recurrence_holds() {
        for &x in &[0.01, 0.3, 1.7, 9.99, 10.0, 40.5] {
            let lhs = digamma(x + 1.0).unwrap();
            let rhs = digamma(x).unwrap() + 1.0 / x;
            assert_abs_diff_eq!(lhs, rhs, epsilon = 1e-10 * rhs.abs().max(1.0));
        }
    }

    #[test]
    fn digamma_domain() {
        assert!(matches!(digamma(0.0), Err(Error::Domain(_))));
        assert!(matches!(digamma(-1.5), Err(Error::Domain(_))));
        assert!(digamma(f64::NAN).is_err());
    }

    #[test]
    fn unit_ball_volumes() {
        assert_abs_diff_eq!(unit_ball_volume(1).unwrap(), 2.0, epsilon = 1e-14);
        assert_abs_diff_eq!(unit_ball_volume(2).unwrap(), PI, epsilon = 1e-14);
        assert_abs_diff_eq!(unit_ball_volume(3).unwrap(), 4.0 * PI / 3.0, epsilon = 1e-13);
        assert_abs_diff_eq!(unit_ball_volume(4).unwrap(), PI * PI / 2.0, epsilon = 1e-13);
        assert!(unit_ball_volume(0).is_err());
    }
}
