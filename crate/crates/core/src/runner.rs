//! End-to-end runs: configuration in, trajectory and report files out.

use std::fs;
use std::path::{Path, PathBuf};

use log::info;
use rayon::prelude::*;
use serde::Serialize;

use crate::analysis::{compare_report, response_stats, CompareReport, ResponseStats};
use crate::config::RunConfig;
use crate::control::ControllerSpec;
use crate::dynamics::{simulate, Plant};
use crate::error::{ConfigError, Error};
use crate::trajectory::{Trajectory, TrajectoryHeader};

/// Command-line overrides applied on top of a loaded configuration.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub dt: Option<f64>,
    pub output_dir: Option<PathBuf>,
}

impl RunConfig {
    /// Applies overrides and re-validates.
    pub fn with_overrides(mut self, o: &Overrides) -> Result<Self, ConfigError> {
        if let Some(seed) = o.seed {
            self.scenario.seed = seed;
        }
        if let Some(dt) = o.dt {
            self.scenario.dt = dt;
        }
        if let Some(dir) = &o.output_dir {
            self.output_dir = dir.clone();
        }
        self.validate()?;
        Ok(self)
    }

    fn header(&self, controller: &str) -> Result<TrajectoryHeader, Error> {
        Ok(TrajectoryHeader {
            scenario: self.scenario.name.clone(),
            controller: controller.into(),
            config_hash: self.hash(),
            scenario_hash: self.scenario_hash()?,
            seed: self.scenario.seed,
        })
    }
}

fn in_scenario(scenario: &str, controller: &str) -> impl Fn(Error) -> Error {
    let scenario = format!("{scenario} ({controller})");
    move |e| Error::Scenario {
        scenario: scenario.clone(),
        source: Box::new(e),
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), Error> {
    fs::write(path, text).map_err(|source| Error::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<(), Error> {
    fs::create_dir_all(path).map_err(|source| Error::Output {
        path: path.to_path_buf(),
        source,
    })
}

fn simulate_one(plant: &Plant, cfg: &RunConfig, spec: &ControllerSpec, label: &str) -> Result<Trajectory, Error> {
    let header = cfg.header(label)?;
    info!("running `{}` with {label}", cfg.scenario.name);
    simulate(plant, &cfg.scenario, spec, &cfg.limits, header)
        .map_err(Error::from)
        .map_err(in_scenario(&cfg.scenario.name, label))
}

#[derive(Debug, Clone)]
pub struct OpenLoopOutcome {
    pub trajectory: Trajectory,
    pub stats: ResponseStats,
    pub trajectory_path: PathBuf,
    pub stats_path: PathBuf,
}

/// Fixed-pitch run at the configured initial pitch (zero when unset).
pub fn run_openloop(cfg: &RunConfig) -> Result<OpenLoopOutcome, Error> {
    let plant = Plant::new(cfg.load_params()?)?;
    let spec = ControllerSpec::FixedPitch {
        beta_deg: cfg.scenario.initial.beta_deg.unwrap_or(0.0),
    };
    let trajectory = simulate_one(&plant, cfg, &spec, spec.name())?;
    let stats = response_stats(&trajectory, cfg.analysis.trim)
        .map_err(Error::from)
        .map_err(in_scenario(&cfg.scenario.name, spec.name()))?;
    create_dir(&cfg.output_dir)?;
    let trajectory_path = cfg.output_dir.join("trajectory.csv");
    trajectory.write_selected(&trajectory_path, cfg.channels.as_deref())?;
    let stats_path = cfg.output_dir.join("stats.txt");
    write_file(&stats_path, &format!("{}{}", trajectory.header.lines(), stats.to_text()))?;
    Ok(OpenLoopOutcome {
        trajectory,
        stats,
        trajectory_path,
        stats_path,
    })
}

/// Unique output labels: the controller kind, suffixed on repeats.
pub fn controller_labels(specs: &[ControllerSpec]) -> Vec<String> {
    let mut labels: Vec<String> = Vec::with_capacity(specs.len());
    for s in specs {
        let base = s.name();
        let repeats = labels
            .iter()
            .filter(|l| *l == base || l.starts_with(&format!("{base}-")))
            .count();
        labels.push(if repeats == 0 { base.to_string() } else { format!("{base}-{}", repeats + 1) });
    }
    labels
}

#[derive(Debug, Clone)]
pub struct ClosedLoopOutcome {
    pub labels: Vec<String>,
    pub trajectories: Vec<Trajectory>,
    pub report: CompareReport,
    pub output_dir: PathBuf,
}

#[derive(Serialize)]
struct ManifestRun<'a> {
    controller: &'a str,
    trajectory: String,
}

#[derive(Serialize)]
struct Manifest<'a> {
    scenario: &'a str,
    config_hash: String,
    scenario_hash: String,
    seed: u64,
    report: &'a str,
    run: Vec<ManifestRun<'a>>,
    config: &'a RunConfig,
}

fn worker_pool(jobs: usize) -> Result<rayon::ThreadPool, Error> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build()
        .map_err(|e| Error::Config(ConfigError::Invalid(format!("cannot start worker pool: {e}"))))
}

/// Runs every configured controller on the shared scenario and seed using
/// `jobs` workers, then writes per-controller trajectories, the comparison
/// report and a manifest. Outputs do not depend on `jobs`.
pub fn run_closedloop(cfg: &RunConfig, jobs: usize) -> Result<ClosedLoopOutcome, Error> {
    if cfg.controllers.is_empty() {
        return Err(ConfigError::Invalid("closed-loop runs need at least one controller".into()).into());
    }
    let plant = Plant::new(cfg.load_params()?)?;
    let labels = controller_labels(&cfg.controllers);
    let pool = worker_pool(jobs)?;
    let trajectories = pool.install(|| {
        cfg.controllers
            .par_iter()
            .zip(labels.par_iter())
            .map(|(spec, label)| simulate_one(&plant, cfg, spec, label))
            .collect::<Result<Vec<_>, Error>>()
    })?;
    let runs: Vec<(String, &Trajectory)> = labels.iter().cloned().zip(trajectories.iter()).collect();
    let report = compare_report(&runs, cfg.analysis.trim)
        .map_err(Error::from)
        .map_err(in_scenario(&cfg.scenario.name, &labels.join(", ")))?;

    let dir = &cfg.output_dir;
    create_dir(dir)?;
    let mut manifest_runs = Vec::with_capacity(labels.len());
    for (label, t) in labels.iter().zip(&trajectories) {
        let sub = dir.join(label);
        create_dir(&sub)?;
        t.write_selected(&sub.join("trajectory.csv"), cfg.channels.as_deref())?;
        manifest_runs.push(ManifestRun {
            controller: label,
            trajectory: format!("{label}/trajectory.csv"),
        });
    }
    let header = cfg.header(&labels.join(","))?;
    let banner = header.lines();
    write_file(&dir.join("report.csv"), &format!("{banner}{}", report.to_csv()))?;
    write_file(&dir.join("report.txt"), &format!("{banner}{}", report.to_table()))?;
    let recorded = cfg.relocated();
    let manifest = Manifest {
        scenario: &cfg.scenario.name,
        config_hash: header.config_hash,
        scenario_hash: header.scenario_hash,
        seed: header.seed,
        report: "report.csv",
        run: manifest_runs,
        config: &recorded,
    };
    let text = toml::to_string(&manifest).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    write_file(&dir.join("manifest.toml"), &text)?;
    Ok(ClosedLoopOutcome {
        labels,
        trajectories,
        report,
        output_dir: dir.clone(),
    })
}

/// Comparison report over trajectory files; the first is the baseline.
pub fn compare_files(paths: &[PathBuf], trim: f64) -> Result<CompareReport, Error> {
    let trajectories = paths.iter().map(|p| Trajectory::read(p)).collect::<Result<Vec<_>, _>>()?;
    let runs: Vec<(String, &Trajectory)> = paths
        .iter()
        .zip(&trajectories)
        .map(|(p, t)| {
            let name = if t.header.controller.is_empty() {
                p.display().to_string()
            } else {
                t.header.controller.clone()
            };
            (name, t)
        })
        .collect();
    Ok(compare_report(&runs, trim)?)
}
