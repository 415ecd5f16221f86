//! Run configuration files.
//!
//! Keys are checked strictly; anything unrecognised is an error naming the
//! key. Every value filled from a default is logged and listed in
//! [`LoadedConfig::applied_defaults`]. Relative paths are resolved against the
//! directory of the configuration file.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use log::{info, warn};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::control::{ActuatorLimits, ControllerSpec, GspiConfig, RiseConfig};
use crate::dynamics::Scenario;
use crate::environment::WindSource;
use crate::error::{ConfigError, ParamError};
use crate::params::{TurbineParams, REFERENCE_PARAMS_TOML};
use crate::trajectory::column_index;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct AnalysisSettings {
    /// Leading transient excluded from statistics (s).
    pub trim: f64,
}

impl Default for AnalysisSettings {
    fn default() -> Self {
        Self {
            trim: crate::analysis::DEFAULT_TRIM,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Turbine parameter file; the built-in reference set when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub params: Option<PathBuf>,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    /// Trajectory columns to write; all when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channels: Option<Vec<String>>,
    pub scenario: Scenario,
    #[serde(default)]
    pub limits: ActuatorLimits,
    /// Controllers for closed-loop batches; the first is the baseline.
    #[serde(rename = "controller", default = "default_controllers")]
    pub controllers: Vec<ControllerSpec>,
    #[serde(default)]
    pub analysis: AnalysisSettings,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("out")
}

fn default_controllers() -> Vec<ControllerSpec> {
    vec![
        ControllerSpec::Gspi(GspiConfig::default()),
        ControllerSpec::Rise(RiseConfig::default()),
    ]
}

/// A configuration together with how it was obtained.
#[derive(Debug, Clone, PartialEq)]
pub struct LoadedConfig {
    pub config: RunConfig,
    pub path: PathBuf,
    /// Dotted key paths that were filled from defaults.
    pub applied_defaults: Vec<String>,
}

/// Key paths present in `full` but missing from `given`.
fn missing_keys(given: &toml::Value, full: &toml::Value, prefix: &str, out: &mut Vec<String>) {
    match (given, full) {
        (toml::Value::Table(g), toml::Value::Table(f)) => {
            for (k, fv) in f {
                let path = if prefix.is_empty() { k.clone() } else { format!("{prefix}.{k}") };
                match g.get(k) {
                    None => out.push(path),
                    Some(gv) => missing_keys(gv, fv, &path, out),
                }
            }
        }
        (toml::Value::Array(g), toml::Value::Array(f)) if g.len() == f.len() => {
            for (i, (gv, fv)) in g.iter().zip(f).enumerate() {
                if gv.is_table() {
                    missing_keys(gv, fv, &format!("{prefix}[{i}]"), out);
                }
            }
        }
        _ => {}
    }
}

fn unknown_key(message: &str) -> Option<String> {
    let rest = message.split("unknown field `").nth(1)?;
    Some(rest.split('`').next()?.to_string())
}

fn resolve(dir: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        dir.join(p)
    }
}

impl RunConfig {
    /// Parses configuration text; relative paths are resolved against `dir`.
    pub fn from_toml_str(text: &str, origin: &Path, dir: &Path) -> Result<(Self, Vec<String>), ConfigError> {
        let raw: toml::Value = toml::from_str(text).map_err(|e| ConfigError::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        let mut cfg: RunConfig = toml::from_str(text).map_err(|e| {
            let message = e.to_string();
            match unknown_key(&message) {
                Some(key) => ConfigError::UnknownKey {
                    path: origin.to_path_buf(),
                    key,
                },
                None => ConfigError::Parse {
                    path: origin.to_path_buf(),
                    message,
                },
            }
        })?;
        if let Some(p) = &cfg.params {
            cfg.params = Some(resolve(dir, p));
        }
        cfg.output_dir = resolve(dir, &cfg.output_dir);
        if let WindSource::FileSeries { path } = &mut cfg.scenario.wind {
            *path = resolve(dir, path);
        }
        let full = toml::Value::try_from(&cfg).map_err(|e| ConfigError::Invalid(e.to_string()))?;
        let mut defaults = Vec::new();
        missing_keys(&raw, &full, "", &mut defaults);
        Ok((cfg, defaults))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        if let Some(p) = &self.params {
            if !p.is_file() {
                return Err(ConfigError::MissingFile(p.clone()));
            }
        }
        if let WindSource::FileSeries { path } = &self.scenario.wind {
            if !path.is_file() {
                return Err(ConfigError::MissingFile(path.clone()));
            }
        }
        self.scenario
            .validate()
            .map_err(|e| ConfigError::Invalid(e.to_string()))?;
        self.limits.validate().map_err(ConfigError::Invalid)?;
        for c in &self.controllers {
            c.validate().map_err(ConfigError::Invalid)?;
        }
        if let Some(channels) = &self.channels {
            if let Some(bad) = channels.iter().find(|c| column_index(c).is_none()) {
                return Err(ConfigError::Invalid(format!("unknown output channel `{bad}`")));
            }
        }
        if !(self.analysis.trim >= 0.0 && self.analysis.trim.is_finite()) {
            return Err(ConfigError::Invalid("analysis trim must be non-negative".into()));
        }
        Ok(())
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("configuration serializes")
    }

    /// The same configuration with the output location cleared, so results
    /// written to different folders identify the same run.
    pub fn relocated(&self) -> RunConfig {
        RunConfig {
            output_dir: PathBuf::from("."),
            ..self.clone()
        }
    }

    /// Hex SHA-256 of the canonical serialized configuration, excluding the
    /// output location.
    pub fn hash(&self) -> String {
        hex::encode(Sha256::digest(self.relocated().to_toml().as_bytes()))
    }

    pub fn params_text(&self) -> Result<String, ParamError> {
        match &self.params {
            None => Ok(REFERENCE_PARAMS_TOML.to_string()),
            Some(p) => fs::read_to_string(p).map_err(|source| ParamError::Io {
                path: p.clone(),
                source,
            }),
        }
    }

    pub fn load_params(&self) -> Result<TurbineParams, ParamError> {
        match &self.params {
            None => Ok(TurbineParams::reference()),
            Some(p) => TurbineParams::from_file(p),
        }
    }

    /// Hex SHA-256 of the scenario and turbine parameters: runs sharing it
    /// are directly comparable.
    pub fn scenario_hash(&self) -> Result<String, ParamError> {
        let mut h = Sha256::new();
        let scenario = toml::to_string(&self.scenario).expect("scenario serializes");
        h.update(scenario.as_bytes());
        h.update(self.params_text()?.as_bytes());
        Ok(hex::encode(h.finalize()))
    }
}

/// Reads, parses and validates a configuration file, logging each default
/// that was applied.
pub fn load_config(path: &Path) -> Result<LoadedConfig, ConfigError> {
    let text = fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let dir = path.parent().unwrap_or_else(|| Path::new("."));
    let (config, applied_defaults) = RunConfig::from_toml_str(&text, path, dir)?;
    let full: BTreeMap<String, toml::Value> =
        toml::from_str(&config.to_toml()).map_err(|e| ConfigError::Invalid(e.to_string()))?;
    for key in &applied_defaults {
        info!("{}: default applied for `{key}`{}", path.display(), default_value(&full, key));
    }
    config.validate()?;
    if config.analysis.trim >= config.scenario.duration {
        warn!(
            "{}: analysis trim {} s leaves no samples of the {} s run for statistics",
            path.display(),
            config.analysis.trim,
            config.scenario.duration
        );
    }
    Ok(LoadedConfig {
        config,
        path: path.to_path_buf(),
        applied_defaults,
    })
}

fn default_value(full: &BTreeMap<String, toml::Value>, key: &str) -> String {
    let mut parts = key.split('.');
    let Some(first) = parts.next() else { return String::new() };
    let mut v = full.get(first.split('[').next().unwrap_or(first));
    for p in parts {
        v = v.and_then(|x| x.get(p.split('[').next().unwrap_or(p)));
    }
    match v {
        Some(x) if !x.is_table() && !x.is_array() => format!(" = {x}"),
        _ => String::new(),
    }
}
