use std::fmt::Write as _;
use std::path::Path;

use entrofin_core::finance::{
    backtest_signals, diversification_objective, entropy_adjusted_var, log_returns, optimize_diversification,
    signals_from_nmi, PortfolioWeights, Sense, VarAdjustmentInputs,
};
use entrofin_core::io::{format_value, load_prices, load_series, read_signals, OutputTable, PriceFormat};
use entrofin_core::rolling::{
    rolling_entropy, rolling_kl, rolling_nmi, rolling_transfer_entropy, standardize_and_flag, Baseline,
};
use entrofin_core::synth::{generate, Generated, GeneratorKind, GeneratorSpec};
use entrofin_core::{AnalysisConfig, Error, PriceSeries, Result, ReturnSeries, SampleMatrix};

use crate::args::{BaselineArg, Command, Component, Format, InputArgs, KindArg, OutputArgs, SenseArg};

fn price_format(tsv: bool) -> PriceFormat {
    if tsv {
        PriceFormat::Tsv
    } else {
        PriceFormat::Csv
    }
}

fn returns_from(path: &Path, returns: bool, strict: bool, tsv: bool) -> Result<ReturnSeries> {
    if returns {
        load_series(path, strict)
    } else {
        log_returns(&load_prices(path, price_format(tsv), strict)?)
    }
}

fn load_returns(input: &InputArgs) -> Result<ReturnSeries> {
    returns_from(&input.input, input.returns, input.strict, input.tsv)
}

fn load_price_path(input: &InputArgs) -> Result<PriceSeries> {
    if input.returns {
        PriceSeries::from_returns(&load_series(&input.input, input.strict)?, 100.0)
    } else {
        load_prices(&input.input, price_format(input.tsv), input.strict)
    }
}

fn json<T: serde::Serialize + ?Sized>(v: &T) -> Result<String> {
    serde_json::to_string_pretty(v)
        .map(|s| s + "\n")
        .map_err(|e| Error::Io(e.to_string()))
}

fn render_table(table: &OutputTable, out: &OutputArgs) -> Result<String> {
    if out.plot_data {
        return Ok(table.to_plot_data_string());
    }
    match out.format {
        Format::Csv => Ok(table.to_csv_string()),
        Format::Json => json(table),
    }
}

fn render_pairs(pairs: &[(String, String)], out: &OutputArgs, value: serde_json::Value) -> Result<String> {
    match out.format {
        Format::Json => json(&value),
        Format::Csv => {
            let mut s = String::from("metric,value\n");
            for (k, v) in pairs {
                let _ = writeln!(s, "{k},{v}");
            }
            Ok(s)
        }
    }
}

/// Runs one subcommand and returns the text to emit.
pub fn run(command: &Command, cfg: &AnalysisConfig, out: &OutputArgs) -> Result<String> {
    match command {
        Command::Entropy { input } => {
            let r = load_returns(input)?;
            let h = rolling_entropy(&r, &cfg.rolling()?, &cfg.knn()?)?;
            render_table(&OutputTable::from_series("entropy", &h), out)
        }
        Command::Kl {
            input,
            baseline,
            mu,
            sigma,
        } => {
            let r = load_returns(input)?;
            let kl = rolling_kl(&r, &cfg.rolling()?, cfg.bins, cfg.smoothing)?;
            let baseline = match baseline {
                BaselineArg::Full => Baseline::FullSample,
                BaselineArg::Expanding => Baseline::Expanding,
                BaselineArg::Fixed => Baseline::Fixed {
                    mu: mu.unwrap_or(f64::NAN),
                    sigma: sigma.unwrap_or(f64::NAN),
                },
            };
            let regimes = standardize_and_flag(&kl, baseline, cfg.theta_kl)?;
            render_table(&OutputTable::from_regimes("kl", &regimes), out)
        }
        Command::Nmi { input, past } => {
            let r = load_returns(input)?;
            let spec = cfg.rolling()?.with_past_lengths(*past, 1);
            let nmi = rolling_nmi(&r, &spec, &cfg.knn()?)?;
            render_table(&OutputTable::from_series("nmi", &nmi.series), out)
        }
        Command::Te {
            source,
            target,
            returns,
            strict,
            tsv,
            past_target,
            past_source,
        } => {
            let x = returns_from(source, *returns, *strict, *tsv)?;
            let y = returns_from(target, *returns, *strict, *tsv)?;
            let spec = cfg.rolling()?.with_past_lengths(*past_target, *past_source);
            let te = rolling_transfer_entropy(&x, &y, &spec, &cfg.knn()?)?;
            render_table(&OutputTable::from_series("te", &te), out)
        }
        Command::Var { kl, mu, sigma, base } => {
            let inp = VarAdjustmentInputs {
                base_var: *base,
                kl_now: *kl,
                mu_kl: *mu,
                sigma_kl: *sigma,
                beta: cfg.beta,
            };
            let v = entropy_adjusted_var(&inp)?;
            match out.format {
                Format::Csv => Ok(format!("{}\n", format_value(v))),
                Format::Json => json(&serde_json::json!({ "var": v, "multiplier": inp.multiplier()? })),
            }
        }
        Command::Signals { input } => {
            if !(cfg.theta_nmi > 0.0 && cfg.theta_nmi < 1.0) {
                return Err(Error::Validation(format!(
                    "theta_nmi must lie in (0, 1), got {}",
                    cfg.theta_nmi
                )));
            }
            let r = log_returns(&load_price_path(input)?)?;
            let nmi = rolling_nmi(&r, &cfg.rolling()?, &cfg.knn()?)?.series;
            let s = signals_from_nmi(&nmi, &r, cfg.theta_nmi)?;
            render_table(&OutputTable::from_signals("signals", &nmi, &s)?, out)
        }
        Command::Diversify {
            inputs,
            returns,
            strict,
            tsv,
            weights,
            optimize,
            budget,
        } => {
            let series = inputs
                .iter()
                .map(|p| returns_from(p, *returns, *strict, *tsv))
                .collect::<Result<Vec<_>>>()?;
            if series.windows(2).any(|w| w[0].timestamps() != w[1].timestamps()) {
                return Err(Error::Alignment("asset series must share timestamps".into()));
            }
            let cols: Vec<&[f64]> = series.iter().map(|s| s.values()).collect();
            let assets = SampleMatrix::from_columns(&cols)?;
            let knn = cfg.knn()?;
            let given = weights.clone().map(PortfolioWeights::new).transpose()?;
            let (w, objective, evaluations) = match optimize {
                Some(sense) => {
                    let sense = match sense {
                        SenseArg::Minimize => Sense::Minimize,
                        SenseArg::Maximize => Sense::Maximize,
                    };
                    let r = optimize_diversification(&assets, sense, &knn, *budget, given)?;
                    (r.weights, r.objective, r.evaluations)
                }
                None => {
                    let w = match given {
                        Some(w) => w,
                        None => PortfolioWeights::equal(assets.d())?,
                    };
                    let j = diversification_objective(&w, &assets, &knn)?;
                    (w, j, 1)
                }
            };
            let names: Vec<String> = inputs
                .iter()
                .map(|p| {
                    p.file_stem()
                        .map_or_else(|| p.display().to_string(), |s| s.to_string_lossy().into_owned())
                })
                .collect();
            let mut pairs = vec![
                ("objective".to_string(), format_value(objective)),
                ("evaluations".to_string(), evaluations.to_string()),
            ];
            pairs.extend(
                names
                    .iter()
                    .zip(w.as_slice())
                    .map(|(n, w)| (format!("weight:{n}"), format_value(*w))),
            );
            let value = serde_json::json!({
                "objective": objective,
                "evaluations": evaluations,
                "assets": names,
                "weights": w.as_slice(),
            });
            render_pairs(&pairs, out, value)
        }
        Command::Synth {
            kind,
            n,
            sigma,
            low,
            high,
            rho,
            phi,
            coupling,
            sigma_x,
            sigma_eps,
            sigma_pre,
            sigma_post,
            switch_at,
            component,
            as_prices,
            start_price,
        } => {
            let kind = match kind {
                KindArg::IidGaussian => GeneratorKind::IidGaussian { sigma: *sigma },
                KindArg::IidUniform => GeneratorKind::IidUniform { low: *low, high: *high },
                KindArg::CorrelatedGaussianPair => GeneratorKind::CorrelatedGaussianPair {
                    rho: *rho,
                    sigma: *sigma,
                },
                KindArg::Ar1 => GeneratorKind::Ar1 {
                    phi: *phi,
                    sigma: *sigma,
                },
                KindArg::CoupledLagPair => GeneratorKind::CoupledLagPair {
                    coupling: *coupling,
                    sigma_x: *sigma_x,
                    sigma_eps: *sigma_eps,
                },
                KindArg::VarianceSwitch => GeneratorKind::VarianceSwitch {
                    sigma_pre: *sigma_pre,
                    sigma_post: *sigma_post,
                    switch_at: switch_at.unwrap_or(n / 2),
                },
            };
            let s = match (generate(&GeneratorSpec::new(kind, *n, cfg.seed)?)?, component) {
                (Generated::Single(s), _)
                | (Generated::Pair(s, _), Component::X)
                | (Generated::Pair(_, s), Component::Y) => s,
            };
            if *as_prices {
                let p = PriceSeries::from_returns(&s, *start_price)?;
                let mut text = String::from("date,price\n");
                for (t, v) in p.timestamps().iter().zip(p.prices()) {
                    let _ = writeln!(text, "{t},{}", format_value(*v));
                }
                Ok(text)
            } else {
                render_table(&OutputTable::from_series(kind.name(), &s), out)
            }
        }
        Command::Backtest { input, signals, cost } => {
            let p = load_price_path(input)?;
            let s = match signals {
                Some(path) => read_signals(std::fs::File::open(path)?)?,
                None => {
                    let r = log_returns(&p)?;
                    let nmi = rolling_nmi(&r, &cfg.rolling()?, &cfg.knn()?)?.series;
                    signals_from_nmi(&nmi, &r, cfg.theta_nmi)?
                }
            };
            let b = backtest_signals(&p, &s, *cost)?;
            if out.plot_data {
                return Ok(b.pnl.as_ref().map_or_else(
                    || "series,timestamp,variable,value\n".to_string(),
                    |pnl| OutputTable::from_series("pnl", pnl).to_plot_data_string(),
                ));
            }
            let periods = b.pnl.as_ref().map_or(0, |p| p.len());
            let pairs = vec![
                ("total_log_return".to_string(), format_value(b.total_log_return)),
                ("hit_rate".to_string(), format_value(b.hit_rate)),
                ("exposure".to_string(), format_value(b.exposure)),
                ("periods".to_string(), periods.to_string()),
            ];
            let value = serde_json::to_value(&b).map_err(|e| Error::Io(e.to_string()))?;
            render_pairs(&pairs, out, value)
        }
    }
}
