use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default sensitivity of the VaR adjustment.
pub const DEFAULT_BETA: f64 = 1.0;
/// Recommended range for `beta`.
pub const BETA_RANGE: (f64, f64) = (0.5, 1.5);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarAdjustmentInputs {
    /// Baseline VaR limit, in loss units.
    pub base_var: f64,
    /// Current KL divergence, nats.
    pub kl_now: f64,
    /// Long-run mean of the KL series.
    pub mu_kl: f64,
    /// Long-run standard deviation of the KL series.
    pub sigma_kl: f64,
    pub beta: f64,
}

impl VarAdjustmentInputs {
    pub fn validate(&self) -> Result<()> {
        if !(self.sigma_kl > 0.0 && self.sigma_kl.is_finite()) {
            return Err(Error::validation(format!(
                "sigma_kl must be positive, got {}",
                self.sigma_kl
            )));
        }
        if !(self.base_var > 0.0 && self.base_var.is_finite()) {
            return Err(Error::validation(format!(
                "base_var must be positive, got {}",
                self.base_var
            )));
        }
        if !(self.kl_now.is_finite() && self.kl_now >= 0.0) {
            return Err(Error::validation("kl_now must be a non-negative finite number"));
        }
        if !self.mu_kl.is_finite() || !self.beta.is_finite() {
            return Err(Error::validation("mu_kl and beta must be finite"));
        }
        Ok(())
    }

    /// `1 + beta * max(0, (kl_now - mu_kl) / sigma_kl)`.
    pub fn multiplier(&self) -> Result<f64> {
        self.validate()?;
        if self.beta < BETA_RANGE.0 || self.beta > BETA_RANGE.1 {
            log::warn!("beta {} is outside the recommended range [0.5, 1.5]", self.beta);
        }
        let z = (self.kl_now - self.mu_kl) / self.sigma_kl;
        Ok(1.0 + self.beta * z.max(0.0))
    }
}

/// Baseline VaR scaled up by the standardized excess KL divergence.
pub fn entropy_adjusted_var(inp: &VarAdjustmentInputs) -> Result<f64> {
    Ok(inp.base_var * inp.multiplier()?)
}
