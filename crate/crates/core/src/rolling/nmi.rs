use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::mi_components;
use crate::rolling::{map_windows, window_edges, RollingSpec};
use crate::sample::{KnnConfig, SampleMatrix};
use crate::series::{ReturnSeries, TimeSeries};

/// Rolling NMI values plus per-window diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RollingNmi {
    pub series: TimeSeries,
    /// Windows where a marginal entropy estimate was not positive. The NMI
    /// normalization is unreliable there (and is 0 when exactly one is).
    pub nonpositive_entropy: Vec<bool>,
}

/// Rolling normalized mutual information between `r_t` and its past.
///
/// Row `t` pairs `r_t` with the block `(r_{t-lag}, ..., r_{t-lag-k+1})`, where
/// `k = spec.past_len_target` (1 by default, the single lagged value). Rows
/// without a complete past are dropped, then each window of `spec.window`
/// rows is evaluated.
pub fn rolling_nmi(r: &ReturnSeries, spec: &RollingSpec, cfg: &KnnConfig) -> Result<RollingNmi> {
    spec.validate()?;
    cfg.check_sample_size(spec.window)?;
    let depth = spec.lag + spec.past_len_target - 1;
    let required = spec.window + depth;
    if r.len() < required {
        return Err(Error::InsufficientData {
            required,
            available: r.len(),
        });
    }
    let v = r.values();
    let rows = r.len() - depth;
    let edges = window_edges(rows, spec.window, spec.stride, required, r.len())?;
    let kp = spec.past_len_target;

    let results = map_windows(&edges, |e| {
        // row j corresponds to time t = j + depth
        let start = e + 1 - spec.window;
        let x: Vec<f64> = (start..=e).map(|j| v[j + depth]).collect();
        let mut past = Vec::with_capacity(spec.window * kp);
        for j in start..=e {
            let t = j + depth;
            past.extend((0..kp).map(|m| v[t - spec.lag - m]));
        }
        let xs = SampleMatrix::from_column(&x)?;
        let ys = SampleMatrix::new(past, spec.window, kp)?;
        let c = mi_components(&xs, &ys, cfg)?;
        Ok((c.nmi(), c.nonpositive_marginal()))
    })?;

    let timestamps = edges.iter().map(|&e| r.timestamps()[e + depth]).collect();
    let (values, flags): (Vec<f64>, Vec<bool>) = results.into_iter().unzip();
    let nonpositive = flags.iter().filter(|&&f| f).count();
    if nonpositive > 0 {
        log::info!(
            "{nonpositive} of {} NMI windows had a non-positive marginal entropy",
            flags.len()
        );
    }
    Ok(RollingNmi {
        series: TimeSeries::new(timestamps, values)?,
        nonpositive_entropy: flags,
    })
}
