//! Time-indexed series.

use chrono::{Datelike, NaiveDate, Weekday};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Timestamp = NaiveDate;

fn check_timestamps(ts: &[Timestamp]) -> Result<()> {
    if let Some(i) = ts.windows(2).position(|w| w[0] >= w[1]) {
        return Err(Error::validation(format!(
            "timestamps not strictly increasing at position {} ({} >= {})",
            i + 1,
            ts[i],
            ts[i + 1]
        )));
    }
    Ok(())
}

/// Real values keyed by strictly increasing dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TimeSeries {
    timestamps: Vec<Timestamp>,
    values: Vec<f64>,
}

/// Log returns in nats per period.
pub type ReturnSeries = TimeSeries;

impl TimeSeries {
    pub fn new(timestamps: Vec<Timestamp>, values: Vec<f64>) -> Result<Self> {
        if timestamps.len() != values.len() {
            return Err(Error::validation("timestamp and value counts differ"));
        }
        if values.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_timestamps(&timestamps)?;
        if let Some(i) = values.iter().position(|v| !v.is_finite()) {
            return Err(Error::validation(format!("non-finite value at {}", timestamps[i])));
        }
        Ok(Self { timestamps, values })
    }

    /// Series indexed by consecutive business days starting at 2000-01-03.
    pub fn with_business_days(values: Vec<f64>) -> Result<Self> {
        let ts = business_days(NaiveDate::from_ymd_opt(2000, 1, 3).unwrap(), values.len());
        Self::new(ts, values)
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Sub-series of the first `len` observations.
    pub fn truncated(&self, len: usize) -> Result<Self> {
        let len = len.min(self.len());
        Self::new(self.timestamps[..len].to_vec(), self.values[..len].to_vec())
    }

    pub fn iter(&self) -> impl Iterator<Item = (Timestamp, f64)> + '_ {
        self.timestamps.iter().copied().zip(self.values.iter().copied())
    }
}

/// Strictly positive prices keyed by strictly increasing dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    timestamps: Vec<Timestamp>,
    prices: Vec<f64>,
}

impl PriceSeries {
    pub fn new(timestamps: Vec<Timestamp>, prices: Vec<f64>) -> Result<Self> {
        if timestamps.len() != prices.len() {
            return Err(Error::validation("timestamp and price counts differ"));
        }
        if prices.is_empty() {
            return Err(Error::EmptyInput);
        }
        check_timestamps(&timestamps)?;
        if let Some(i) = prices.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
            return Err(Error::validation(format!(
                "price {} at {} is not positive",
                prices[i], timestamps[i]
            )));
        }
        Ok(Self { timestamps, prices })
    }

    /// Prices obtained by compounding `returns` from `start`; the first
    /// price is dated one business day before the first return.
    pub fn from_returns(returns: &ReturnSeries, start: f64) -> Result<Self> {
        let first = returns.timestamps()[0];
        let mut prev = first.pred_opt().ok_or_else(|| Error::validation("date underflow"))?;
        while matches!(prev.weekday(), Weekday::Sat | Weekday::Sun) {
            prev = prev.pred_opt().unwrap();
        }
        let mut ts = Vec::with_capacity(returns.len() + 1);
        let mut px = Vec::with_capacity(returns.len() + 1);
        ts.push(prev);
        px.push(start);
        let mut level = start.ln();
        for (t, r) in returns.iter() {
            level += r;
            ts.push(t);
            px.push(level.exp());
        }
        Self::new(ts, px)
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }

    pub fn truncated(&self, len: usize) -> Result<Self> {
        let len = len.min(self.len());
        Self::new(self.timestamps[..len].to_vec(), self.prices[..len].to_vec())
    }
}

/// `n` consecutive weekdays starting at `start` (rolled forward off weekends).
pub fn business_days(start: Timestamp, n: usize) -> Vec<Timestamp> {
    let mut out = Vec::with_capacity(n);
    let mut d = start;
    while out.len() < n {
        if !matches!(d.weekday(), Weekday::Sat | Weekday::Sun) {
            out.push(d);
        }
        d = d.succ_opt().expect("date overflow");
    }
    out
}
