mod args;
mod commands;

use std::io::Write;
use std::process::ExitCode;

use clap::Parser;
use entrofin_core::Error;

use args::Cli;

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 3;
const EXIT_INGESTION: u8 = 4;
const EXIT_INSUFFICIENT_DATA: u8 = 5;
const EXIT_ESTIMATOR: u8 = 6;

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Io(_) => EXIT_IO,
        Error::Validation(_) => EXIT_CONFIG,
        Error::Ingestion { .. } | Error::EmptyInput | Error::Alignment(_) => EXIT_INGESTION,
        Error::InsufficientData { .. } => EXIT_INSUFFICIENT_DATA,
        Error::DivergenceUndefined { .. }
        | Error::DegenerateRange
        | Error::Domain(_)
        | Error::DegenerateDistance { .. }
        | Error::UndefinedNormalization
        | Error::UnsupportedQuantity { .. } => EXIT_ESTIMATOR,
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    let result =
        commands::run(&cli.command, &cli.config.to_config(), &cli.output).and_then(|text| match &cli.output.output {
            Some(path) => std::fs::write(path, text).map_err(Error::from),
            None => std::io::stdout().write_all(text.as_bytes()).map_err(Error::from),
        });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
