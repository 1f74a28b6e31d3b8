use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use entrofin_core::AnalysisConfig;

#[derive(Debug, Parser)]
#[command(
    name = "entrofin",
    version,
    about = "Entropy and information measures for financial return series"
)]
pub struct Cli {
    #[command(flatten)]
    pub config: ConfigArgs,

    #[command(flatten)]
    pub output: OutputArgs,

    #[command(subcommand)]
    pub command: Command,
}

/// Analysis parameters. Every flag can also be set through `ENTROFIN_<FLAG>`.
#[derive(Debug, Args)]
pub struct ConfigArgs {
    /// Rolling window length in observations
    #[arg(long, global = true, env = "ENTROFIN_WINDOW", default_value_t = AnalysisConfig::default().window)]
    pub window: usize,
    /// Neighbor order of the k-NN estimator
    #[arg(long, global = true, env = "ENTROFIN_KNN_K", default_value_t = AnalysisConfig::default().knn_k)]
    pub knn_k: usize,
    /// Scale of the tie-breaking Gaussian jitter
    #[arg(long, global = true, env = "ENTROFIN_JITTER_SIGMA", default_value_t = AnalysisConfig::default().jitter_sigma)]
    pub jitter_sigma: f64,
    /// Histogram bins for KL divergence
    #[arg(long, global = true, env = "ENTROFIN_BINS", default_value_t = AnalysisConfig::default().bins)]
    pub bins: usize,
    /// Additive histogram smoothing
    #[arg(long, global = true, env = "ENTROFIN_SMOOTHING", default_value_t = AnalysisConfig::default().smoothing)]
    pub smoothing: f64,
    /// Lag between a return and its past block
    #[arg(long, global = true, env = "ENTROFIN_LAG", default_value_t = AnalysisConfig::default().lag)]
    pub lag: usize,
    /// NMI threshold for trading signals
    #[arg(long, global = true, env = "ENTROFIN_THETA_NMI", default_value_t = AnalysisConfig::default().theta_nmi)]
    pub theta_nmi: f64,
    /// z-score threshold for regime flags
    #[arg(long, global = true, env = "ENTROFIN_THETA_KL", default_value_t = AnalysisConfig::default().theta_kl)]
    pub theta_kl: f64,
    /// Sensitivity of the VaR adjustment
    #[arg(long, global = true, env = "ENTROFIN_BETA", default_value_t = AnalysisConfig::default().beta)]
    pub beta: f64,
    /// Observations between evaluations
    #[arg(long, global = true, env = "ENTROFIN_STRIDE", default_value_t = AnalysisConfig::default().stride)]
    pub stride: usize,
    /// Seed for jitter, generators and the optimizer
    #[arg(long, global = true, env = "ENTROFIN_SEED", default_value_t = AnalysisConfig::default().seed)]
    pub seed: u64,
}

impl ConfigArgs {
    pub fn to_config(&self) -> AnalysisConfig {
        AnalysisConfig {
            window: self.window,
            knn_k: self.knn_k,
            jitter_sigma: self.jitter_sigma,
            bins: self.bins,
            smoothing: self.smoothing,
            lag: self.lag,
            theta_nmi: self.theta_nmi,
            theta_kl: self.theta_kl,
            beta: self.beta,
            stride: self.stride,
            seed: self.seed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write results here instead of stdout
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    /// Output encoding
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Emit a long-format table (series,timestamp,variable,value) for plotting
    #[arg(long, global = true)]
    pub plot_data: bool,
}

/// A single input series.
#[derive(Debug, Args)]
pub struct InputArgs {
    /// `date,price` file, or a `timestamp,value` return file with --returns
    #[arg(long, short)]
    pub input: PathBuf,
    /// Treat the input as log returns rather than prices
    #[arg(long)]
    pub returns: bool,
    /// Reject unsorted input instead of sorting it
    #[arg(long)]
    pub strict: bool,
    /// Tab-separated price input
    #[arg(long)]
    pub tsv: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BaselineArg {
    Full,
    Expanding,
    Fixed,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SenseArg {
    Minimize,
    Maximize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Component {
    X,
    Y,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum KindArg {
    IidGaussian,
    IidUniform,
    CorrelatedGaussianPair,
    Ar1,
    CoupledLagPair,
    VarianceSwitch,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rolling k-NN differential entropy of log returns
    Entropy {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Rolling KL divergence between adjacent windows, with regime flags
    Kl {
        #[command(flatten)]
        input: InputArgs,
        /// Baseline for the KL z-scores
        #[arg(long, value_enum, default_value_t = BaselineArg::Full)]
        baseline: BaselineArg,
        /// Baseline mean for --baseline fixed
        #[arg(long, required_if_eq("baseline", "fixed"))]
        mu: Option<f64>,
        /// Baseline standard deviation for --baseline fixed
        #[arg(long, required_if_eq("baseline", "fixed"))]
        sigma: Option<f64>,
    },
    /// Rolling normalized mutual information between returns and their past
    Nmi {
        #[command(flatten)]
        input: InputArgs,
        /// Length of the past block
        #[arg(long, default_value_t = 1)]
        past: usize,
    },
    /// Rolling transfer entropy from a source series to a target series
    Te {
        /// Source (X) file
        #[arg(long)]
        source: PathBuf,
        /// Target (Y) file
        #[arg(long)]
        target: PathBuf,
        /// Treat both inputs as log returns rather than prices
        #[arg(long)]
        returns: bool,
        /// Reject unsorted input instead of sorting it
        #[arg(long)]
        strict: bool,
        /// Tab-separated price input
        #[arg(long)]
        tsv: bool,
        /// Target past length k
        #[arg(long, default_value_t = 1)]
        past_target: usize,
        /// Source past length l
        #[arg(long, default_value_t = 1)]
        past_source: usize,
    },
    /// Entropy-adjusted VaR limit
    Var {
        /// Observed KL divergence
        #[arg(long)]
        kl: f64,
        /// Baseline KL mean
        #[arg(long)]
        mu: f64,
        /// Baseline KL standard deviation (positive)
        #[arg(long)]
        sigma: f64,
        /// Unadjusted VaR limit
        #[arg(long, default_value_t = 1.0)]
        base: f64,
    },
    /// NMI-gated momentum signals
    Signals {
        #[command(flatten)]
        input: InputArgs,
    },
    /// Diversification functional of a weight vector, or its optimization
    Diversify {
        /// Asset files, one per asset
        #[arg(long = "input", short, required = true, num_args = 1..)]
        inputs: Vec<PathBuf>,
        /// Treat the inputs as log returns rather than prices
        #[arg(long)]
        returns: bool,
        /// Reject unsorted input instead of sorting it
        #[arg(long)]
        strict: bool,
        /// Tab-separated price input
        #[arg(long)]
        tsv: bool,
        /// Comma-separated weights; defaults to equal weights
        #[arg(long, value_delimiter = ',')]
        weights: Option<Vec<f64>>,
        /// Search the simplex instead of evaluating fixed weights
        #[arg(long, value_enum)]
        optimize: Option<SenseArg>,
        /// Objective evaluations for --optimize
        #[arg(long, default_value_t = 64)]
        budget: usize,
    },
    /// Seeded synthetic series
    Synth {
        /// Process to draw
        #[arg(long, value_enum)]
        kind: KindArg,
        /// Number of observations
        #[arg(long, default_value_t = 2016)]
        n: usize,
        /// Standard deviation for iid-gaussian, correlated-gaussian-pair and ar1 innovations
        #[arg(long, default_value_t = 0.01)]
        sigma: f64,
        /// Lower bound for iid-uniform
        #[arg(long, default_value_t = 0.0)]
        low: f64,
        /// Upper bound for iid-uniform
        #[arg(long, default_value_t = 1.0)]
        high: f64,
        /// Correlation for correlated-gaussian-pair
        #[arg(long, default_value_t = 0.0)]
        rho: f64,
        /// Autoregressive coefficient for ar1
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
        /// Coupling of y to lagged x for coupled-lag-pair
        #[arg(long, default_value_t = 0.8)]
        coupling: f64,
        /// Source standard deviation for coupled-lag-pair
        #[arg(long, default_value_t = 1.0)]
        sigma_x: f64,
        /// Noise standard deviation for coupled-lag-pair
        #[arg(long, default_value_t = 1.0)]
        sigma_eps: f64,
        /// Standard deviation before the switch for variance-switch
        #[arg(long, default_value_t = 0.01)]
        sigma_pre: f64,
        /// Standard deviation after the switch for variance-switch
        #[arg(long, default_value_t = 0.03)]
        sigma_post: f64,
        /// Switch index; defaults to n / 2
        #[arg(long)]
        switch_at: Option<usize>,
        /// Which member of a pair to emit
        #[arg(long, value_enum, default_value_t = Component::X)]
        component: Component,
        /// Emit a `date,price` path instead of returns
        #[arg(long)]
        as_prices: bool,
        /// First price of the --as-prices path
        #[arg(long, default_value_t = 100.0)]
        start_price: f64,
    },
    /// Backtest NMI signals on a price file
    Backtest {
        #[command(flatten)]
        input: InputArgs,
        /// Signal file as written by `signals`; computed from the prices when absent
        #[arg(long)]
        signals: Option<PathBuf>,
        /// Cost per unit of position change, in log-return units
        #[arg(long, default_value_t = 0.0)]
        cost: f64,
    },
}
