use crate::error::{Error, Result};
use crate::series::{PriceSeries, ReturnSeries};

/// `r_t = ln(P_t / P_{t-1})`, dated at the later observation of each pair.
pub fn log_returns(p: &PriceSeries) -> Result<ReturnSeries> {
    if p.len() < 2 {
        return Err(Error::InsufficientData {
            required: 2,
            available: p.len(),
        });
    }
    let px = p.prices();
    let values = px.windows(2).map(|w| (w[1] / w[0]).ln()).collect();
    ReturnSeries::new(p.timestamps()[1..].to_vec(), values)
}
