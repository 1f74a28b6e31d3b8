//! NMI momentum signals and a minimal backtester.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::finance::log_returns;
use crate::rolling::{rolling_nmi, RollingSpec};
use crate::sample::KnnConfig;
use crate::series::{PriceSeries, ReturnSeries, TimeSeries, Timestamp};

/// Default NMI threshold for signal generation.
pub const DEFAULT_THETA_NMI: f64 = 0.05;

/// Positions in `{-1, 0, +1}` keyed by strictly increasing dates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SignalSeries {
    timestamps: Vec<Timestamp>,
    signals: Vec<i8>,
}

impl SignalSeries {
    pub fn new(timestamps: Vec<Timestamp>, signals: Vec<i8>) -> Result<Self> {
        if timestamps.len() != signals.len() {
            return Err(Error::validation("timestamp and signal counts differ"));
        }
        if let Some(s) = signals.iter().find(|s| !matches!(s, -1..=1)) {
            return Err(Error::validation(format!("signal {s} is not in {{-1, 0, +1}}")));
        }
        if timestamps.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::validation("signal timestamps must be strictly increasing"));
        }
        Ok(Self { timestamps, signals })
    }

    pub fn timestamps(&self) -> &[Timestamp] {
        &self.timestamps
    }

    pub fn signals(&self) -> &[i8] {
        &self.signals
    }

    pub fn len(&self) -> usize {
        self.signals.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signals.is_empty()
    }
}

/// Maps an NMI series to momentum signals.
///
/// Where `NMI_t > theta` the signal follows the previous return: `+1` if
/// `r_{t-1} > 0`, otherwise `-1` (a zero return sells). Elsewhere it is 0.
pub fn signals_from_nmi(nmi: &TimeSeries, returns: &ReturnSeries, theta: f64) -> Result<SignalSeries> {
    let ts = returns.timestamps();
    let mut signals = Vec::with_capacity(nmi.len());
    for (t, v) in nmi.iter() {
        let i = ts
            .binary_search(&t)
            .map_err(|_| Error::Alignment(format!("NMI timestamp {t} not found in returns")))?;
        let s = if v > theta {
            if i == 0 {
                return Err(Error::Alignment(format!("no return before {t}")));
            }
            if returns.values()[i - 1] > 0.0 {
                1
            } else {
                -1
            }
        } else {
            0
        };
        signals.push(s);
    }
    SignalSeries::new(nmi.timestamps().to_vec(), signals)
}

/// Momentum signals gated by rolling NMI of the log returns of `p`.
pub fn nmi_trading_signals(p: &PriceSeries, theta: f64, spec: &RollingSpec, cfg: &KnnConfig) -> Result<SignalSeries> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(Error::validation(format!("theta must lie in (0, 1), got {theta}")));
    }
    let r = log_returns(p)?;
    let nmi = rolling_nmi(&r, spec, cfg)?;
    signals_from_nmi(&nmi.series, &r, theta)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BacktestSummary {
    /// Sum of per-period PnL, in log-return units.
    pub total_log_return: f64,
    /// Share of exposed periods with positive PnL (0 with no exposure).
    pub hit_rate: f64,
    /// Share of evaluated periods with a non-zero position.
    pub exposure: f64,
    /// PnL of each period, dated when it is realized.
    pub pnl: Option<TimeSeries>,
}

/// Applies each signal at `t` to the log return over `(t, t + 1]`.
///
/// A signal on the last price date has no following return and is ignored.
/// `cost_per_trade` is charged per unit of position change, starting flat.
pub fn backtest_signals(p: &PriceSeries, s: &SignalSeries, cost_per_trade: f64) -> Result<BacktestSummary> {
    if !(cost_per_trade >= 0.0 && cost_per_trade.is_finite()) {
        return Err(Error::validation("cost per trade must be non-negative"));
    }
    let ts = p.timestamps();
    let px = p.prices();
    let (mut dates, mut pnl) = (Vec::new(), Vec::new());
    let (mut exposed, mut wins) = (0usize, 0usize);
    let mut prev = 0i8;
    for (&t, &sig) in s.timestamps().iter().zip(s.signals()) {
        let i = ts
            .binary_search(&t)
            .map_err(|_| Error::Alignment(format!("signal date {t} not found in prices")))?;
        if i + 1 >= px.len() {
            continue;
        }
        let r = (px[i + 1] / px[i]).ln();
        let cost = cost_per_trade * f64::from((sig - prev).abs());
        let v = f64::from(sig) * r - cost;
        if sig != 0 {
            exposed += 1;
            if f64::from(sig) * r > 0.0 {
                wins += 1;
            }
        }
        prev = sig;
        dates.push(ts[i + 1]);
        pnl.push(v);
    }
    let periods = pnl.len();
    Ok(BacktestSummary {
        total_log_return: pnl.iter().sum(),
        hit_rate: if exposed > 0 { wins as f64 / exposed as f64 } else { 0.0 },
        exposure: if periods > 0 {
            exposed as f64 / periods as f64
        } else {
            0.0
        },
        pnl: if periods > 0 {
            Some(TimeSeries::new(dates, pnl)?)
        } else {
            None
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::business_days;
    use chrono::NaiveDate;

    fn start() -> Timestamp {
        NaiveDate::from_ymd_opt(2021, 3, 1).unwrap()
    }

    fn prices(p: Vec<f64>) -> PriceSeries {
        PriceSeries::new(business_days(start(), p.len()), p).unwrap()
    }

    #[test]
    fn signal_domain() {
        let ts = business_days(start(), 2);
        assert!(SignalSeries::new(ts.clone(), vec![2, 0]).is_err());
        assert!(SignalSeries::new(ts, vec![-1, 1]).is_ok());
    }

    #[test]
    fn threshold_rule() {
        let r = ReturnSeries::with_business_days(vec![0.01, -0.02, 0.0, 0.03]).unwrap();
        let ts = r.timestamps()[1..].to_vec();
        let nmi = TimeSeries::new(ts, vec![0.03, 0.08, 0.08]).unwrap();
        let s = signals_from_nmi(&nmi, &r, 0.05).unwrap();
        // below threshold; r_{t-1} < 0; r_{t-1} = 0 maps to sell
        assert_eq!(s.signals(), &[0, -1, -1]);
        let nmi = TimeSeries::new(r.timestamps()[1..2].to_vec(), vec![0.08]).unwrap();
        assert_eq!(signals_from_nmi(&nmi, &r, 0.05).unwrap().signals(), &[1]);
    }

    #[test]
    fn theta_range() {
        let p = prices(vec![1.0; 10]);
        let spec = RollingSpec::new(30).unwrap();
        assert!(nmi_trading_signals(&p, 0.0, &spec, &KnnConfig::default()).is_err());
        assert!(nmi_trading_signals(&p, 1.0, &spec, &KnnConfig::default()).is_err());
    }

    #[test]
    fn flat_book() {
        let p = prices(vec![100.0, 101.0, 99.0, 105.0]);
        let s = SignalSeries::new(p.timestamps().to_vec(), vec![0; 4]).unwrap();
        let b = backtest_signals(&p, &s, 0.0).unwrap();
        assert_eq!(b.total_log_return, 0.0);
        assert_eq!(b.exposure, 0.0);
        assert_eq!(b.hit_rate, 0.0);
    }

    #[test]
    fn long_on_rising_path_telescopes() {
        let p = prices((0..20).map(|i| 100.0 * 1.01f64.powi(i)).collect());
        let from = 5;
        let s = SignalSeries::new(p.timestamps()[from..].to_vec(), vec![1; 15]).unwrap();
        let b = backtest_signals(&p, &s, 0.0).unwrap();
        let expected = (p.prices()[19] / p.prices()[from]).ln();
        assert!((b.total_log_return - expected).abs() < 1e-12);
        assert_eq!(b.hit_rate, 1.0);
        assert_eq!(b.exposure, 1.0);
        assert_eq!(b.pnl.unwrap().len(), 14);
    }

    #[test]
    fn perfect_foresight_hits() {
        let p = prices(vec![100.0, 103.0, 101.0, 101.5, 99.0, 100.0]);
        let sig: Vec<i8> = p
            .prices()
            .windows(2)
            .map(|w| if w[1] > w[0] { 1 } else { -1 })
            .collect();
        let s = SignalSeries::new(p.timestamps()[..5].to_vec(), sig).unwrap();
        let b = backtest_signals(&p, &s, 0.0).unwrap();
        assert_eq!(b.hit_rate, 1.0);
        assert!(b.total_log_return > 0.0);
    }

    #[test]
    fn costs_and_alignment() {
        let p = prices(vec![100.0, 100.0, 100.0]);
        let s = SignalSeries::new(p.timestamps()[..2].to_vec(), vec![1, -1]).unwrap();
        let b = backtest_signals(&p, &s, 0.001).unwrap();
        assert!((b.total_log_return + 0.003).abs() < 1e-15);

        let off = SignalSeries::new(vec![NaiveDate::from_ymd_opt(1999, 1, 1).unwrap()], vec![1]).unwrap();
        assert!(matches!(backtest_signals(&p, &off, 0.0), Err(Error::Alignment(_))));
    }
}
