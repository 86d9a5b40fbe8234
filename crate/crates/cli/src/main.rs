use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use fstefan_cli::commands;
use fstefan_cli::config::{parse_ratio, OutputFormat, PhiChoice, RunConfig};
use fstefan_cli::{CliError, Report};

#[derive(Parser)]
#[command(
    name = "fstefan",
    version,
    about = "Fractional Stefan problem: front-fixing solver and reproduction commands"
)]
struct Cli {
    #[command(flatten)]
    common: CommonArgs,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// order of the Caputo derivative, (0, 1]
    #[arg(long, global = true, value_parser = parse_ratio)]
    alpha: Option<f64>,
    /// Stefan number CS / C0 (a ratio like 1/3 is accepted)
    #[arg(long, global = true, value_parser = parse_ratio)]
    lambda: Option<f64>,
    /// spatial intervals
    #[arg(long, global = true)]
    m: Option<usize>,
    /// time intervals
    #[arg(long, global = true)]
    n: Option<usize>,
    /// tau0 as a fraction of the time step
    #[arg(long = "tau0-factor", global = true)]
    tau0_factor: Option<f64>,
    /// blend parameter: network, calibrate, or a value in [0, 1]
    #[arg(long, global = true)]
    phi: Option<String>,
    /// tolerance of the front convergence criterion
    #[arg(long, global = true)]
    epsilon: Option<f64>,
    /// output file (stdout when absent)
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// csv or json
    #[arg(long, global = true)]
    format: Option<String>,
    /// JSON run configuration; flags override its fields
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// extra diagnostics on stderr
    #[arg(long, global = true)]
    verbose: bool,
}

#[derive(Subcommand)]
enum Command {
    /// similarity coefficient p for the 3 x 4 reference grid
    Table1,
    /// iterative p with the pure trapezoid rule (phi = 1)
    Table2,
    /// iterative p with the network-predicted blend
    Table3,
    /// absolute error of the scheme on every mesh node
    ErrorGrid,
    /// concentration along one time layer
    Profile {
        /// time of the layer (default: end time)
        #[arg(long)]
        tau: Option<f64>,
    },
    /// numerical and exact front positions
    Front,
    /// iterative front coefficient with its bisection trace
    FindP,
    /// similarity coefficient from the transcendental equation
    SolveP,
    /// network blend parameter for du = 1/m
    PredictPhi,
    /// blend parameter minimizing the calibration functional
    CalibratePhi,
    /// two-parameter Wright function
    Wright {
        #[arg(long, allow_hyphen_values = true)]
        z: f64,
        #[arg(long, allow_hyphen_values = true)]
        gamma: f64,
        #[arg(long, allow_hyphen_values = true)]
        delta: f64,
    },
    /// network weight matrices as JSON
    Weights,
    /// calibrated phi over the whole training grid (slow)
    TrainingSet,
}

fn run(cli: Cli) -> Result<Report, CliError> {
    let c = cli.common;
    let flags = RunConfig {
        alpha: c.alpha,
        lambda: c.lambda,
        m: c.m,
        n: c.n,
        tau0_factor: c.tau0_factor,
        phi: c.phi,
        epsilon: c.epsilon,
        out: c.out,
        format: c
            .format
            .as_deref()
            .map(str::parse::<OutputFormat>)
            .transpose()?,
        tau: match &cli.command {
            Command::Profile { tau } => *tau,
            _ => None,
        },
        verbose: c.verbose.then_some(true),
    };
    let file = match &c.config {
        Some(path) => RunConfig::from_json_file(path)?,
        None => RunConfig::default(),
    };
    let cfg = flags.over(file);
    let settings = cfg.settings()?;

    let report = match cli.command {
        Command::Table1 => commands::cmd_table1(&settings)?,
        Command::Table2 => commands::cmd_tables23(&settings, PhiChoice::Fixed(1.0))?,
        Command::Table3 => commands::cmd_tables23(&settings, settings.phi)?,
        Command::ErrorGrid => commands::cmd_error_grid(&settings)?,
        Command::Profile { .. } => commands::cmd_profile(&settings)?,
        Command::Front => commands::cmd_front(&settings)?,
        Command::FindP => commands::cmd_find_p(&settings)?,
        Command::SolveP => commands::cmd_solve_p(&settings)?,
        Command::PredictPhi => commands::cmd_predict_phi(&settings)?,
        Command::CalibratePhi => commands::cmd_calibrate_phi(&settings)?,
        Command::Wright { z, gamma, delta } => {
            commands::cmd_wright(z, gamma, delta, settings.format)?
        }
        Command::Weights => commands::cmd_weights()?,
        Command::TrainingSet => commands::cmd_training_set(&settings)?,
    };

    match &cfg.out {
        Some(path) => std::fs::write(path, &report.body)?,
        None => print!("{}", report.body),
    }
    Ok(report)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(report) if report.ok => ExitCode::SUCCESS,
        Ok(_) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
