//! Batch front end for `burgers-core`.
//!
//! ```text
//! burgers solve      --case 1d-wood --sigma 2 --nu 1 --nodes 40 --dt 1e-4 --t-final 1e-3
//! burgers stability  --model burgers1d --sizes 10,17,24,31 --nu 1 --frozen zero
//! burgers reproduce  --table 4
//! ```
//!
//! Exit status: 0 success, 1 a reproduced table misses its tolerances,
//! 2 bad configuration, 3 numerical failure. Errors are one line on stderr:
//! `error: <reason-code>: <message>`.

pub mod config;
pub mod error;
pub mod reference;
pub mod reproduce;
pub mod solve;
pub mod stability;

use std::path::PathBuf;

use burgers_core::SweepModel;
use clap::{Args, Parser, Subcommand, ValueEnum};

use config::{ConfigInput, Model, RunConfig};
pub use error::{CliError, ExitKind};
use stability::Frozen;

#[derive(Debug, Parser)]
#[command(name = "burgers", version, about = "GDQ/BDF2 solver for Burgers' equations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// March one case and write snapshots.csv and summary.json.
    Solve(SolveArgs),
    /// Frozen-coefficient spectra for a list of grid sizes.
    Stability(StabilityArgs),
    /// Rerun a published table and compare it cell by cell.
    Reproduce(ReproduceArgs),
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    /// JSON config file, or `-` for standard input. Flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub model: Option<Model>,
    /// 1d-wood, 1d-fourier, 1d-zero, 2d or coupled.
    #[arg(long = "case")]
    pub case_id: Option<String>,
    /// Nodes per direction.
    #[arg(long)]
    pub nodes: Option<usize>,
    #[arg(long)]
    pub dt: Option<f64>,
    #[arg(long = "t-final")]
    pub t_final: Option<f64>,
    #[arg(long)]
    pub sigma: Option<f64>,
    #[arg(long = "re")]
    pub reynolds: Option<f64>,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long = "sample-every")]
    pub sample_every: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write per-node errors at the final time.
    #[arg(long)]
    pub pointwise: bool,
    /// No progress lines.
    #[arg(long)]
    pub quiet: bool,
}

impl SolveArgs {
    fn as_input(&self) -> ConfigInput {
        ConfigInput {
            model: self.model,
            case_id: self.case_id.clone(),
            m_nodes: self.nodes,
            dt: self.dt,
            t_final: self.t_final,
            sigma: self.sigma,
            reynolds: self.reynolds,
            nu: self.nu,
            sample_every: self.sample_every,
            output_dir: self.out.clone(),
            emit_pointwise: self.pointwise.then_some(true),
            ..Default::default()
        }
    }

    pub fn resolve(&self) -> Result<RunConfig, CliError> {
        let base = match &self.config {
            Some(path) => ConfigInput::from_path(path)?,
            None => ConfigInput::default(),
        };
        RunConfig::resolve(base.overlay(self.as_input()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum StabilityModel {
    Burgers1d,
    Coupled,
}

#[derive(Debug, Args)]
pub struct StabilityArgs {
    #[arg(long, value_enum)]
    pub model: StabilityModel,
    /// Comma-separated nodes per direction, e.g. `10,17,24,31`.
    #[arg(long)]
    pub sizes: String,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long = "re")]
    pub reynolds: Option<f64>,
    #[arg(long, value_enum, default_value = "initial")]
    pub frozen: Frozen,
    #[arg(long, default_value = config::DEFAULT_OUTPUT_DIR)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct ReproduceArgs {
    /// Table number, 1 to 11.
    #[arg(long)]
    pub table: u32,
    #[arg(long, default_value = config::DEFAULT_OUTPUT_DIR)]
    pub out: PathBuf,
}

fn run_stability_cmd(args: &StabilityArgs) -> Result<(), CliError> {
    let sizes = stability::parse_sizes(&args.sizes)?;
    let (model, value) = match (args.model, args.nu, args.reynolds) {
        (_, Some(_), Some(_)) => return Err(CliError::config("viscosity-conflict", "give exactly one of --nu and --re")),
        (_, None, None) => return Err(CliError::config("missing-field", "one of --nu and --re is required")),
        (StabilityModel::Burgers1d, Some(nu), None) => (SweepModel::Burgers1d, nu),
        (StabilityModel::Burgers1d, None, Some(re)) => (SweepModel::Burgers1d, 1.0 / re),
        (StabilityModel::Coupled, None, Some(re)) => (SweepModel::Coupled, re),
        (StabilityModel::Coupled, Some(nu), None) => (SweepModel::Coupled, 1.0 / nu),
    };
    let (_, summary) = stability::run_stability(model, &sizes, value, args.frozen, &args.out)?;
    println!("{}", serde_json::to_string(&summary)?);
    Ok(())
}

fn run_reproduce_cmd(args: &ReproduceArgs) -> Result<(), CliError> {
    let outcome = reproduce::reproduce_table(args.table, &args.out)?;
    print!("{}", reproduce::render(&outcome.cells));
    let failures = outcome.failures();
    if failures > 0 {
        return Err(CliError::reproduction(format!(
            "table {}: {failures} of {} cells outside tolerance, see {}",
            outcome.table,
            outcome.cells.len(),
            outcome.csv_path.display()
        )));
    }
    Ok(())
}

pub fn run(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Solve(args) => {
            let cfg = args.resolve()?;
            let outcome = solve::run_solve(&cfg, !args.quiet)?;
            println!("{}", serde_json::to_string(&outcome.summary)?);
            Ok(())
        }
        Command::Stability(args) => run_stability_cmd(args),
        Command::Reproduce(args) => run_reproduce_cmd(args),
    }
}
