use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::estimators::continuous::{entropy_of_columns, entropy_raw};
use crate::rolling::{map_windows, window_edges, RollingSpec};
use crate::sample::{KnnConfig, SampleMatrix};
use crate::series::{ReturnSeries, TimeSeries, Timestamp};
use crate::Nats;

/// Aligned samples `(Y_{t+1}, Y_t^(k), X_t^(l))` for transfer entropy `X -> Y`.
///
/// Stored as one matrix with columns `[Y_{t+1}, Y_t, .., Y_{t-k+1}, X_t, .., X_{t-l+1}]`.
/// Rows run over `t = max(k, l) ..= N - 2`, and each row is labeled with the
/// timestamp of `t + 1`, the latest observation it uses.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LaggedDesign {
    joint: SampleMatrix,
    k: usize,
    l: usize,
    timestamps: Vec<Timestamp>,
}

impl LaggedDesign {
    pub fn rows(&self) -> usize {
        self.joint.n()
    }

    pub fn target_past_len(&self) -> usize {
        self.k
    }

    pub fn source_past_len(&self) -> usize {
        self.l
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn joint(&self) -> &SampleMatrix {
        &self.joint
    }

    pub fn target_future(&self) -> Vec<f64> {
        self.joint.column(0)
    }

    pub fn target_past(&self) -> SampleMatrix {
        self.joint.select_columns(&(1..1 + self.k).collect::<Vec<_>>())
    }

    pub fn source_past(&self) -> SampleMatrix {
        self.joint
            .select_columns(&(1 + self.k..1 + self.k + self.l).collect::<Vec<_>>())
    }

    /// Rows `start..end` as a new design.
    pub fn slice(&self, start: usize, end: usize) -> Result<Self> {
        let d = self.joint.d();
        let data = self.joint.as_slice()[start * d..end * d].to_vec();
        Ok(Self {
            joint: SampleMatrix::new(data, end - start, d)?,
            k: self.k,
            l: self.l,
            timestamps: self.timestamps[start..end].to_vec(),
        })
    }
}

/// Builds the lagged design for transfer entropy from `source` (X) to `target` (Y).
pub fn build_lagged_design(source: &ReturnSeries, target: &ReturnSeries, k: usize, l: usize) -> Result<LaggedDesign> {
    if k == 0 || l == 0 {
        return Err(Error::validation("past lengths must be >= 1"));
    }
    if source.timestamps() != target.timestamps() {
        return Err(Error::Alignment("source and target timestamps differ".into()));
    }
    let n = target.len();
    let first = k.max(l);
    if n <= first + 1 {
        return Err(Error::InsufficientData {
            required: first + 2,
            available: n,
        });
    }
    let (x, y) = (source.values(), target.values());
    let rows = n - 1 - first;
    let d = 1 + k + l;
    let mut data = Vec::with_capacity(rows * d);
    let mut timestamps = Vec::with_capacity(rows);
    for t in first..n - 1 {
        data.push(y[t + 1]);
        data.extend((0..k).map(|m| y[t - m]));
        data.extend((0..l).map(|m| x[t - m]));
        timestamps.push(target.timestamps()[t + 1]);
    }
    Ok(LaggedDesign {
        joint: SampleMatrix::new(data, rows, d)?,
        k,
        l,
        timestamps,
    })
}

/// `max(0, h(Y+, Yk) + h(Yk, Xl) - h(Y+, Yk, Xl) - h(Yk))`.
pub fn transfer_entropy(design: &LaggedDesign, cfg: &KnnConfig) -> Result<Nats> {
    cfg.check_sample_size(design.rows())?;
    let (k, l) = (design.k, design.l);
    let joint = design.joint.jittered(cfg.jitter_sigma, cfg.seed);
    let future_and_past: Vec<usize> = (0..1 + k).collect();
    let pasts: Vec<usize> = (1..1 + k + l).collect();
    let target_past: Vec<usize> = (1..1 + k).collect();
    let h_fp = entropy_of_columns(&joint, &future_and_past, cfg)?;
    let h_pp = entropy_of_columns(&joint, &pasts, cfg)?;
    let h_all = entropy_raw(&joint, cfg.k, cfg.metric)?;
    let h_p = entropy_of_columns(&joint, &target_past, cfg)?;
    Ok(Nats((h_fp + h_pp - h_all - h_p).max(0.0)))
}

/// Transfer entropy from `source` to `target` over trailing windows of design rows.
pub fn rolling_transfer_entropy(
    source: &ReturnSeries,
    target: &ReturnSeries,
    spec: &RollingSpec,
    cfg: &KnnConfig,
) -> Result<TimeSeries> {
    spec.validate()?;
    cfg.check_sample_size(spec.window)?;
    let (k, l) = (spec.past_len_target, spec.past_len_source);
    let required = spec.window + k.max(l) + 1;
    if target.len() < required {
        return Err(Error::InsufficientData {
            required,
            available: target.len(),
        });
    }
    let design = build_lagged_design(source, target, k, l)?;
    let edges = window_edges(design.rows(), spec.window, spec.stride, required, target.len())?;
    let values = map_windows(&edges, |e| {
        let w = design.slice(e + 1 - spec.window, e + 1)?;
        transfer_entropy(&w, cfg).map(|t| t.0)
    })?;
    TimeSeries::new(edges.iter().map(|&e| design.timestamps[e]).collect(), values)
}
