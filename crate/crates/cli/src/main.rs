//! `mhw`: bootstrap, calibrate, price and validate from CSV market data.

mod commands;
mod config;
mod error;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use mhw_core::mhw::Side;
use mhw_core::temporal::Tenor;

use crate::commands::{PriceArgs, Session};
use crate::config::RunConfig;
use crate::error::CliError;
use crate::report::write_fit_csv;

#[derive(Parser)]
#[command(name = "mhw", version, about = "Multicurve Hull-White swaption toolkit")]
struct Cli {
    /// TOML run configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Directory holding ois.csv, depo.csv, fra.csv, swap6m.csv and swaption_vols.csv.
    #[arg(long, global = true)]
    data: Option<PathBuf>,
    /// Write the JSON report here.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Monte Carlo seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Monte Carlo draw count.
    #[arg(long, global = true)]
    draws: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(clap::Args, Clone, Copy)]
struct ParamArgs {
    /// Mean reversion; with --sigma and --gamma skips calibration.
    #[arg(long)]
    a: Option<f64>,
    #[arg(long)]
    sigma: Option<f64>,
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum SideArg {
    Receiver,
    Payer,
}

#[derive(Subcommand)]
enum Command {
    /// Build the discount and pseudo-discount curves and reprice their instruments.
    Bootstrap,
    /// Fit (a, sigma, gamma) to the ATM swaption quotes.
    Calibrate {
        /// Also write market vs model prices as CSV.
        #[arg(long)]
        fit_csv: Option<PathBuf>,
    },
    /// Price one swaption with the closed formula.
    Price {
        #[arg(long, default_value = "1y")]
        expiry: Tenor,
        #[arg(long, default_value = "9y")]
        tenor: Tenor,
        /// Decimal strike; the forward swap rate when omitted.
        #[arg(long, allow_negative_numbers = true)]
        strike: Option<f64>,
        #[arg(long, value_enum, default_value = "receiver")]
        side: SideArg,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Compare closed-form prices of the calibration swaptions with Monte Carlo.
    Validate {
        #[command(flatten)]
        params: ParamArgs,
    },
}

fn run(cli: Cli) -> Result<(), CliError> {
    let mut cfg = match &cli.config {
        Some(path) => RunConfig::load(path)?,
        None => RunConfig::default(),
    };
    if let Some(d) = cli.data {
        cfg.data_dir = d;
    }
    if let Some(o) = cli.out {
        cfg.output.json = Some(o);
    }
    if let Some(seed) = cli.seed {
        cfg.oracle.seed = seed;
    }
    if let Some(draws) = cli.draws {
        cfg.oracle.draws = draws;
    }
    if let Command::Calibrate { fit_csv: Some(p) } = &cli.command {
        cfg.output.fit_csv = Some(p.clone());
    }
    let json_path = cfg.output.json.clone();
    let fit_csv = cfg.output.fit_csv.clone();
    let session = Session::open(cfg)?;
    let params = |p: ParamArgs| [p.a, p.sigma, p.gamma];

    let report = match cli.command {
        Command::Bootstrap => commands::bootstrap(&session)?,
        Command::Calibrate { .. } => commands::calibrate(&session)?,
        Command::Price { expiry, tenor, strike, side, params: p } => {
            let side = match side {
                SideArg::Receiver => Side::Receiver,
                SideArg::Payer => Side::Payer,
            };
            commands::price(&session, &PriceArgs { expiry, tenor, strike, side, params: params(p) })?
        }
        Command::Validate { params: p } => commands::validate(&session, params(p))?,
    };

    print!("{}", report.render());
    if let Some(path) = &json_path {
        report.write_json(path)?;
    }
    if let (Some(path), Some(cal)) = (&fit_csv, &report.calibration) {
        write_fit_csv(path, &cal.instruments)?;
    }
    match &report.validation {
        Some(v) if v.passed < v.rows.len() => Err(CliError::ValidationFailed(v.rows.len() - v.passed, v.rows.len())),
        _ => Ok(()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
