// SPDX-License-Identifier: MIT OR Apache-2.0

//! Command-line front end: estimation, loss profiles, penalty sweeps,
//! simulation grids and the bundled reproduction report.

mod commands;
mod grid;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use linthresh::{Error, PenaltyConfig, PenaltyFn};

#[derive(Debug, Parser)]
#[command(
    name = "linthresh",
    version,
    about = "Estimate the threshold above which a regression function is linear"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Estimate the threshold, the coefficients beyond it, and their Wald statistics.
    ///
    /// Prints an aligned text report and writes `estimate.json` to the output
    /// directory. The JSON object holds the input description, the penalty
    /// configuration and the estimate: `u_hat`, `fit_at_u_hat`
    /// (alpha, beta, n_used, rss, mean_x, mean_y, ss_x), `loss`, `penalized`,
    /// `lambda_n`, `gamma_n`, `n` and `refit` (psi, cutoff, fit, sigma2_hat,
    /// covariance, se_*, z_*, p_*).
    Estimate {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        penalty: PenaltyArgs,
        /// Refit on observations with x >= u_hat + psi.
        #[arg(long, default_value_t = 0.0)]
        psi: f64,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Write the loss profile over all admissible candidates.
    ///
    /// Output: `profile.csv` with columns
    /// u,n_suffix,alpha,beta,loss,penalty,penalized,rss,mean_x,mean_y,ss_x
    /// preceded by `# key=value` lines (n, gamma_n, lambda_n, min_suffix,
    /// degenerate_excluded, config), and `profile.svg`.
    Profile {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        penalty: PenaltyArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Estimate the threshold for every c in a grid and report the plateaus.
    ///
    /// Output: `sweep.csv` (c,u_hat), `plateaus.csv`
    /// (c_start,c_end,u_hat,grid_points) and `sweep.svg`.
    Sweep {
        #[command(flatten)]
        data: DataArgs,
        #[command(flatten)]
        penalty: PenaltyArgs,
        /// Comma-separated `start:step:end` segments. Defaults to
        /// 0:0.001:10,10.01:0.01:150,150.1:0.1:500.
        #[arg(long, conflicts_with = "c_values")]
        grid: Option<String>,
        /// Explicit comma-separated c values, non-decreasing.
        #[arg(long, value_delimiter = ',')]
        c_values: Option<Vec<f64>>,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Run a scenario grid file.
    ///
    /// Output: `scenarios.csv` (one row per scenario: model, u0, delta,
    /// sigma, n, c, xi, eta1, penalty, nrep, base_seed, emae, successes,
    /// failures and five-number summaries of u_hat, alpha and beta),
    /// `replicates.csv` (row,rep,u_hat,alpha,beta) and `emae.svg`.
    Simulate {
        /// Scenario grid (TOML: [defaults] plus [[scenario]] blocks).
        #[arg(long)]
        config: PathBuf,
        #[command(flatten)]
        run: RunArgs,
        #[command(flatten)]
        out: OutArgs,
    },
    /// Regenerate the bundled reproduction: air-quality estimate, profile and
    /// sweep plus the desk-scale simulation grid.
    ///
    /// Output: the files of `estimate`, `profile`, `sweep` and `simulate`
    /// under `airquality/` and `simulation/`, and `report.txt`.
    Report {
        #[command(flatten)]
        run: RunArgs,
        /// Penalty constant for the air-quality estimate.
        #[arg(long, default_value_t = 200.0)]
        c: f64,
        #[command(flatten)]
        out: OutArgs,
    },
}

#[derive(Debug, Args)]
struct DataArgs {
    /// CSV file with a header row.
    #[arg(long, required_unless_present = "airquality")]
    input: Option<PathBuf>,
    /// Covariate column.
    #[arg(long, short = 'x', required_unless_present = "airquality")]
    x: Option<String>,
    /// Response column.
    #[arg(long, short = 'y', required_unless_present = "airquality")]
    y: Option<String>,
    /// Field values treated as missing (repeatable).
    #[arg(long = "na", default_values_t = ["NA".to_string(), String::new()])]
    na: Vec<String>,
    /// Use the bundled air-quality data (Ozone on Wind, 111 complete cases)
    /// with eta1 = 0.02 and f(u) = max(u, 0) unless overridden.
    #[arg(long, conflicts_with = "input")]
    airquality: bool,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PenaltyKind {
    /// f(u) = max(u - shift, 0)
    PositivePart,
    /// f(u) = max(arctan(u - shift), 0)
    Arctan,
}

#[derive(Debug, Args)]
struct PenaltyArgs {
    /// Penalty constant c >= 0 in lambda_n = c * n^(-xi).
    #[arg(long, default_value_t = 0.0)]
    c: f64,
    /// Penalty decay exponent, in (0, 0.5).
    #[arg(long, default_value_t = 0.4)]
    xi: f64,
    /// Tail mass: candidates stop at the empirical (1 - eta1) quantile
    /// [default: 0.05, or 0.02 with --airquality].
    #[arg(long)]
    eta1: Option<f64>,
    #[arg(long, value_enum, default_value_t = PenaltyKind::PositivePart)]
    penalty: PenaltyKind,
    /// Origin of the penalty function [default: smallest covariate, or 0
    /// with --airquality].
    #[arg(long, allow_hyphen_values = true)]
    shift: Option<f64>,
    /// Minimum suffix size [default: max(3, ceil(eta1 * n))].
    #[arg(long)]
    min_suffix: Option<usize>,
}

impl PenaltyArgs {
    fn config(&self, airquality: bool) -> PenaltyConfig {
        PenaltyConfig {
            c: self.c,
            xi: self.xi,
            penalty_fn: match self.penalty {
                PenaltyKind::PositivePart => PenaltyFn::PositivePart,
                PenaltyKind::Arctan => PenaltyFn::Arctan,
            },
            shift: self.shift.or(airquality.then_some(0.0)),
            eta1: self.eta1.unwrap_or(if airquality { 0.02 } else { 0.05 }),
            min_suffix: self.min_suffix,
        }
    }
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Worker threads [default: available parallelism]. Results do not
    /// depend on it.
    #[arg(long)]
    threads: Option<usize>,
    /// Use 1000 replications per scenario.
    #[arg(long)]
    full_scale: bool,
    /// Override every scenario's base seed.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Args)]
struct OutArgs {
    /// Output directory.
    #[arg(long, env = "LINTHRESH_OUT_DIR", default_value = "linthresh-out")]
    out_dir: PathBuf,
    /// Skip SVG plots.
    #[arg(long)]
    no_svg: bool,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::InvalidConfig(_) | Error::Config { .. } | Error::Domain { .. } => 3,
        Error::InvalidSample(_)
        | Error::MissingColumn { .. }
        | Error::Parse { .. }
        | Error::TooFewRows { .. }
        | Error::Csv { .. } => 4,
        Error::Io { .. } => 5,
        Error::DegenerateDesign { .. } | Error::InsufficientSuffix { .. } | Error::NoCandidates { .. } => 6,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error[{}]: {e}", e.code());
            ExitCode::from(exit_code(&e))
        }
    }
}
