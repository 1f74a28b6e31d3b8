use crate::error::Result;
use crate::estimators::knn_differential_entropy;
use crate::rolling::{map_windows, window_edges, RollingSpec};
use crate::sample::{KnnConfig, SampleMatrix};
use crate::series::{ReturnSeries, TimeSeries};

/// k-NN differential entropy of each trailing window of `r`.
pub fn rolling_entropy(r: &ReturnSeries, spec: &RollingSpec, cfg: &KnnConfig) -> Result<TimeSeries> {
    spec.validate()?;
    cfg.check_sample_size(spec.window)?;
    let edges = window_edges(r.len(), spec.window, spec.stride, spec.window, r.len())?;
    let v = r.values();
    let values = map_windows(&edges, |e| {
        let m = SampleMatrix::from_column(&v[e + 1 - spec.window..=e])?;
        knn_differential_entropy(&m, cfg).map(|h| h.0)
    })?;
    TimeSeries::new(edges.iter().map(|&e| r.timestamps()[e]).collect(), values)
}
