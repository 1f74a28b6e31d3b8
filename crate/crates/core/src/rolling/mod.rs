//! Windowed application of the estimators to return series.
//!
//! Every rolling operation labels its output with the timestamp of the
//! window's right edge, so a value dated `t` only uses data through `t`.
//! Windows are evaluated in parallel and collected in time order.

mod entropy;
mod kl;
mod nmi;
mod transfer;

pub use entropy::rolling_entropy;
pub use kl::{rolling_kl, standardize_and_flag, Baseline, RegimeSeries};
pub use nmi::{rolling_nmi, RollingNmi};
pub use transfer::{build_lagged_design, rolling_transfer_entropy, transfer_entropy, LaggedDesign};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default rolling window, one trading year.
pub const DEFAULT_WINDOW: usize = 252;
/// Smallest window accepted by [`RollingSpec`].
pub const MIN_WINDOW: usize = 30;

/// Window geometry shared by the rolling operations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RollingSpec {
    /// Observations per window.
    pub window: usize,
    /// Observations between successive evaluations.
    pub stride: usize,
    /// Lag between a return and the past return it is paired with (NMI).
    pub lag: usize,
    /// Length of the target's own past block (`k`).
    pub past_len_target: usize,
    /// Length of the source's past block (`l`, transfer entropy only).
    pub past_len_source: usize,
}

impl Default for RollingSpec {
    fn default() -> Self {
        Self {
            window: DEFAULT_WINDOW,
            stride: 1,
            lag: 1,
            past_len_target: 1,
            past_len_source: 1,
        }
    }
}

impl RollingSpec {
    pub fn new(window: usize) -> Result<Self> {
        let spec = Self {
            window,
            ..Self::default()
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_stride(mut self, stride: usize) -> Self {
        self.stride = stride;
        self
    }

    pub fn with_lag(mut self, lag: usize) -> Self {
        self.lag = lag;
        self
    }

    pub fn with_past_lengths(mut self, target: usize, source: usize) -> Self {
        self.past_len_target = target;
        self.past_len_source = source;
        self
    }

    /// Non-overlapping evaluation (`stride == window`).
    pub fn non_overlapping(mut self) -> Self {
        self.stride = self.window;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.window < MIN_WINDOW {
            return Err(Error::validation(format!(
                "window must be >= {MIN_WINDOW}, got {}",
                self.window
            )));
        }
        if self.stride == 0 {
            return Err(Error::validation("stride must be >= 1"));
        }
        if self.window <= self.lag + 1 {
            return Err(Error::validation("window must exceed lag + 1"));
        }
        if self.past_len_target == 0 || self.past_len_source == 0 {
            return Err(Error::validation("past lengths must be >= 1"));
        }
        Ok(())
    }
}

/// Right-edge row indices of every window of `window` rows over `rows` rows.
///
/// Yields `floor((rows - window) / stride) + 1` edges.
pub(crate) fn window_edges(
    rows: usize,
    window: usize,
    stride: usize,
    required: usize,
    available: usize,
) -> Result<Vec<usize>> {
    if rows < window {
        return Err(Error::InsufficientData { required, available });
    }
    Ok((window - 1..rows).step_by(stride).collect())
}

/// Evaluates `f` at every edge in parallel, preserving order.
pub(crate) fn map_windows<T, F>(edges: &[usize], f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(usize) -> Result<T> + Sync + Send,
{
    edges.par_iter().map(|&e| f(e)).collect()
}
