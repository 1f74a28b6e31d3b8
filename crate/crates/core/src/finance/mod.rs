//! Finance-facing procedures built on the estimators.

mod diversification;
mod returns;
mod signals;
mod var;

pub use diversification::{
    diversification_objective, optimize_diversification, DiversificationProblem, OptimizationResult, PortfolioWeights,
    Sense,
};
pub use returns::log_returns;
pub use signals::{
    backtest_signals, nmi_trading_signals, signals_from_nmi, BacktestSummary, SignalSeries, DEFAULT_THETA_NMI,
};
pub use var::{entropy_adjusted_var, VarAdjustmentInputs, BETA_RANGE, DEFAULT_BETA};
