use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use fowt_core::config::{load_config, RunConfig};
use fowt_core::dynamics::{rad_s_to_rpm, solve_equilibrium, EquilibriumSpec, Plant};
use fowt_core::params::TurbineParams;
use fowt_core::runner::{compare_files, run_closedloop, run_openloop, Overrides};

#[derive(Parser, Debug)]
#[command(name = "fowt", version, about = "Floating wind turbine simulator and pitch-controller test bench")]
struct Cli {
    /// Run configuration file.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the configuration.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Scenario seed, overriding the configuration.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads for batch runs.
    #[arg(long, global = true, default_value_t = 1)]
    jobs: usize,
    /// Integration step (s), overriding the configuration.
    #[arg(long, global = true)]
    dt: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Fixed-pitch run with response statistics.
    Openloop,
    /// Runs every configured controller and writes a comparison report.
    Closedloop,
    /// Compares trajectory files; the first is the baseline.
    Compare {
        #[arg(required = true, num_args = 1..)]
        trajectories: Vec<PathBuf>,
        /// Leading transient excluded from statistics (s).
        #[arg(long, default_value_t = fowt_core::analysis::DEFAULT_TRIM)]
        trim: f64,
    },
    /// Checks a turbine parameter file and reports its still-water balance.
    ValidateParams {
        /// Parameter file; taken from --config or the built-in set when omitted.
        params: Option<PathBuf>,
    },
}

fn run_config(cli: &Cli) -> Result<RunConfig> {
    let Some(path) = &cli.config else {
        bail!("--config is required for this command");
    };
    let loaded = load_config(path)?;
    let overrides = Overrides {
        seed: cli.seed,
        dt: cli.dt,
        output_dir: cli.out.clone(),
    };
    Ok(loaded.config.with_overrides(&overrides)?)
}

fn validate_params(cli: &Cli, explicit: Option<&Path>) -> Result<()> {
    let params = match explicit {
        Some(p) => TurbineParams::from_file(p)?,
        None => match &cli.config {
            Some(c) => load_config(c)?.config.load_params()?,
            None => TurbineParams::reference(),
        },
    };
    let plant = Plant::new(params)?;
    let eq = solve_equilibrium(&plant, &EquilibriumSpec::calm()).context("still-water balance")?;
    println!("parameters valid");
    println!("total mass        {:>14.1} kg", plant.params.body.total_mass());
    println!("rated speed       {:>14.4} rpm", rad_s_to_rpm(plant.rated_speed()));
    println!("calm surge        {:>14.4} m", eq.state.r[0]);
    println!("calm heave        {:>14.4} m", eq.state.r[2]);
    println!("calm pitch        {:>14.4} deg", eq.state.theta.pitch.to_degrees());
    println!("balance residual  {:>14.3e}", eq.residual);
    Ok(())
}

fn run(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Openloop => {
            let cfg = run_config(cli)?;
            let out = run_openloop(&cfg)?;
            print!("{}", out.stats.to_text());
            println!("wrote {} and {}", out.trajectory_path.display(), out.stats_path.display());
        }
        Command::Closedloop => {
            let cfg = run_config(cli)?;
            let out = run_closedloop(&cfg, cli.jobs)?;
            print!("{}", out.report.to_table());
            println!("wrote {}", out.output_dir.display());
        }
        Command::Compare { trajectories, trim } => {
            let report = compare_files(trajectories, *trim)?;
            print!("{}", report.to_table());
            if let Some(dir) = &cli.out {
                std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
                let path = dir.join("report.csv");
                std::fs::write(&path, report.to_csv()).with_context(|| format!("writing {}", path.display()))?;
            }
        }
        Command::ValidateParams { params } => validate_params(cli, params.as_deref())?,
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
