//! `swipt-noma`: analytic and Monte Carlo outage sweeps, figure presets and
//! diversity fits, all as CSV with an embedded replay manifest.
//!
//! Exit codes: 0 success, 2 usage, 3 configuration or input, 4 numerical
//! failure.

mod diversity;
mod error;
mod figure;
mod output;
mod settings;
mod sweep;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use swipt_noma::analytic::DiversityModel;

use crate::error::{CliError, CliResult};
use crate::settings::Settings;

#[derive(Parser, Debug)]
#[command(name = "swipt-noma", version, about = "Cooperative SWIPT-NOMA outage laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Closed-form and quadrature outage probabilities over an SNR grid.
    Analytic(RunArgs),
    /// Monte Carlo outage estimates over an SNR grid.
    Simulate(RunArgs),
    /// Data for one of the preset figures (2 to 8), with an engine agreement report.
    Figure {
        /// Figure id.
        #[arg(value_parser = clap::value_parser!(u8).range(2..=8))]
        id: u8,
        #[command(flatten)]
        run: RunArgs,
        /// Which engines to run.
        #[arg(long)]
        engine: Option<String>,
        /// Per-point agreement report (CSV).
        #[arg(long, value_name = "PATH")]
        report: Option<PathBuf>,
    },
    /// Fits diversity slopes to the outage curves of a CSV written by this tool.
    Diversity {
        /// CSV from `analytic`, `simulate` or `figure`.
        input: PathBuf,
        /// Decay law: plain or log-corrected.
        #[arg(long, default_value = "plain")]
        model: DiversityModel,
        /// Only fit points at or above this SNR.
        #[arg(long, value_name = "DB")]
        min_snr_db: Option<f64>,
        #[arg(long, value_name = "PATH")]
        out: Option<PathBuf>,
    },
}

/// Options shared by the sweep commands. Values given here override the
/// configuration file.
#[derive(Args, Debug)]
struct RunArgs {
    /// key=value configuration file, or a CSV written by this tool to replay it.
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// SNR grid in dB, A:B:STEP or a single value.
    #[arg(long, value_name = "A:B:STEP")]
    snr_db: Option<String>,
    /// rnrf, nnnf, nnff, a comma list, or all.
    #[arg(long)]
    scheme: Option<String>,
    /// near, far, far-noncoop, a comma list, or all.
    #[arg(long)]
    user: Option<String>,
    /// Monte Carlo trials per point.
    #[arg(long)]
    trials: Option<String>,
    #[arg(long)]
    seed: Option<String>,
    /// Chebyshev orders N or N,K,M.
    #[arg(long, value_name = "N,K,M")]
    quad: Option<String>,
    /// auto, quadrature, closed-form, high-snr or oracle.
    #[arg(long)]
    variant: Option<String>,
    /// Relay-to-far distance in simulation: exact or far-distance.
    #[arg(long)]
    relay_distance: Option<String>,
    /// Simulation worker threads; results do not depend on it.
    #[arg(long)]
    threads: Option<usize>,
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Any configuration key, e.g. --set r1=0.3. May be repeated.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[arg(long = "r_da", alias = "r-da")]
    r_da: Option<String>,
    #[arg(long = "r_dc", alias = "r-dc")]
    r_dc: Option<String>,
    #[arg(long = "r_db", alias = "r-db")]
    r_db: Option<String>,
    #[arg(long = "lambda_a", alias = "lambda-a")]
    lambda_a: Option<String>,
    #[arg(long = "lambda_b", alias = "lambda-b")]
    lambda_b: Option<String>,
    #[arg(long)]
    alpha: Option<String>,
    #[arg(long)]
    eta: Option<String>,
    #[arg(long = "p1_sq", alias = "p1-sq")]
    p1_sq: Option<String>,
    #[arg(long = "p2_sq", alias = "p2-sq")]
    p2_sq: Option<String>,
    #[arg(long)]
    r1: Option<String>,
    #[arg(long)]
    r2: Option<String>,
}

impl RunArgs {
    /// Defaults, then the configuration file, then the flags.
    fn settings(&self, engine: Option<&str>) -> CliResult<Settings> {
        let mut s = Settings::default();
        if let Some(path) = &self.config {
            s.load(path)?;
        }
        let named = [
            ("snr_db", &self.snr_db),
            ("scheme", &self.scheme),
            ("user", &self.user),
            ("trials", &self.trials),
            ("seed", &self.seed),
            ("quad", &self.quad),
            ("variant", &self.variant),
            ("relay_distance", &self.relay_distance),
            ("r_da", &self.r_da),
            ("r_dc", &self.r_dc),
            ("r_db", &self.r_db),
            ("lambda_a", &self.lambda_a),
            ("lambda_b", &self.lambda_b),
            ("alpha", &self.alpha),
            ("eta", &self.eta),
            ("p1_sq", &self.p1_sq),
            ("p2_sq", &self.p2_sq),
            ("r1", &self.r1),
            ("r2", &self.r2),
        ];
        let mut pairs: Vec<(String, String)> = named
            .iter()
            .filter_map(|(k, v)| v.as_ref().map(|v| (k.to_string(), v.clone())))
            .collect();
        if let Some(e) = engine {
            pairs.push(("engine".into(), e.into()));
        }
        for item in &self.set {
            let (k, v) = item
                .split_once('=')
                .ok_or_else(|| CliError::Usage(format!("--set expects KEY=VALUE, got '{item}'")))?;
            pairs.push((k.into(), v.into()));
        }
        for (k, v) in pairs {
            s.set(&k, &v).map_err(|e| CliError::Usage(format!("--{k}: {e}")))?;
        }
        Ok(s)
    }
}

fn run(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Analytic(args) => sweep::run_analytic(&args.settings(None)?, args.out.as_deref()),
        Command::Simulate(args) => sweep::run_simulate(&args.settings(None)?, args.threads, args.out.as_deref()),
        Command::Figure {
            id,
            run,
            engine,
            report,
        } => figure::run_figure(
            id,
            &run.settings(engine.as_deref())?,
            run.threads,
            run.out.as_deref(),
            report.as_deref(),
        ),
        Command::Diversity {
            input,
            model,
            min_snr_db,
            out,
        } => diversity::run_diversity(&input, model, min_snr_db, out.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("swipt-noma: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
