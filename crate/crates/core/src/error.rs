//! Error types shared across the crate.

use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FrameError {
    #[error("attitude too close to the pitch singularity (pitch = {pitch} rad)")]
    SingularAttitude { pitch: f64 },
}

#[derive(Debug, Error)]
pub enum ParamError {
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("structural mass matrix is not positive definite")]
    NotPositiveDefinite,
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum HydroError {
    #[error("platform attitude leaves member {member} nearly horizontal (axis cosine {cosine})")]
    DegenerateAttitude { member: usize, cosine: f64 },
    #[error("member {member} is not a base column")]
    RoleMismatch { member: usize },
}

#[derive(Debug, Error)]
pub enum EnvironmentError {
    #[error("time {t} s lies outside the wind series [{start}, {end}] s")]
    OutOfRange { t: f64, start: f64, end: f64 },
    #[error("invalid wind series: {0}")]
    InvalidSeries(String),
    #[error("invalid wave description: {0}")]
    InvalidWave(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

#[derive(Debug, Error)]
pub enum SimulationError {
    #[error(transparent)]
    Frame(#[from] FrameError),
    #[error(transparent)]
    Hydro(#[from] HydroError),
    #[error(transparent)]
    Environment(#[from] EnvironmentError),
    #[error("simulation diverged at t = {t} s: {reason}")]
    Diverged { t: f64, reason: String },
    #[error("equilibrium solve did not converge (residual {residual:e}); failing rows: {rows:?}")]
    NoConvergence { rows: Vec<usize>, residual: f64 },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AnalysisError {
    #[error("series `{0}` is empty")]
    EmptySeries(String),
    #[error("baseline RMS of `{0}` is zero")]
    ZeroBaseline(String),
    #[error("trajectories do not share a scenario: {0}")]
    ScenarioMismatch(String),
}

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot parse {path}: {message}")]
    Parse { path: PathBuf, message: String },
    #[error("unknown key `{key}` in {path}")]
    UnknownKey { path: PathBuf, key: String },
    #[error("referenced file {0} does not exist")]
    MissingFile(PathBuf),
    #[error("invalid configuration: {0}")]
    Invalid(String),
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

/// Top-level error for end-to-end runs.
#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Param(#[from] ParamError),
    #[error(transparent)]
    Simulation(#[from] SimulationError),
    #[error(transparent)]
    Analysis(#[from] AnalysisError),
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Environment(#[from] EnvironmentError),
    #[error("scenario `{scenario}`: {source}")]
    Scenario {
        scenario: String,
        #[source]
        source: Box<Error>,
    },
    #[error("cannot write {path}: {source}")]
    Output {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}
