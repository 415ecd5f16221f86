use std::fs;
use std::path::{Path, PathBuf};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rustfft::num_complex::Complex;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::error::EnvironmentError;
use crate::frames::Vec3;

/// Kaimal length scale for the longitudinal component at hub height.
const KAIMAL_LENGTH: f64 = 340.2;
/// Sample spacing of synthesized series.
const SPECTRAL_DT: f64 = 0.05;

/// Hub-height wind description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case", deny_unknown_fields)]
pub enum WindSource {
    Constant {
        mean_speed: f64,
    },
    FileSeries {
        path: PathBuf,
    },
    /// Longitudinal turbulence with the requested mean and intensity. The
    /// scenario seed is used unless `seed` is given.
    Spectral {
        mean_speed: f64,
        turbulence_intensity: f64,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        seed: Option<u64>,
    },
}

impl WindSource {
    pub fn mean_speed(&self) -> Option<f64> {
        match self {
            WindSource::Constant { mean_speed } | WindSource::Spectral { mean_speed, .. } => {
                Some(*mean_speed)
            }
            WindSource::FileSeries { .. } => None,
        }
    }
}

/// One-sided Kaimal spectral density (m^2/s^2/Hz).
pub fn kaimal_spectrum(f: f64, mean_speed: f64, sigma: f64) -> f64 {
    let lu = KAIMAL_LENGTH / mean_speed;
    4.0 * sigma * sigma * lu / (1.0 + 6.0 * f * lu).powf(5.0 / 3.0)
}

/// Reads a two-column (time, speed) text file. Columns may be separated by
/// commas, tabs or spaces; a non-numeric first line is treated as a header and
/// lines starting with `#` are skipped.
pub fn read_wind_series(path: &Path) -> Result<(Vec<f64>, Vec<f64>), EnvironmentError> {
    let text = fs::read_to_string(path).map_err(|source| EnvironmentError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut times = Vec::new();
    let mut speeds = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line
            .split(|c: char| c == ',' || c == ';' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .collect();
        let parsed: Option<Vec<f64>> = fields.iter().map(|f| f.parse().ok()).collect();
        match parsed {
            Some(values) if values.len() >= 2 => {
                times.push(values[0]);
                speeds.push(values[1]);
            }
            _ if times.is_empty() && lineno == 0 => continue,
            _ => {
                return Err(EnvironmentError::InvalidSeries(format!(
                    "line {}: expected two numeric columns",
                    lineno + 1
                )))
            }
        }
    }
    validate_series(&times, &speeds)?;
    Ok((times, speeds))
}

fn validate_series(times: &[f64], speeds: &[f64]) -> Result<(), EnvironmentError> {
    if times.len() < 2 {
        return Err(EnvironmentError::InvalidSeries(
            "at least two samples are required".into(),
        ));
    }
    if times.len() != speeds.len() {
        return Err(EnvironmentError::InvalidSeries("column lengths differ".into()));
    }
    if times.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(EnvironmentError::InvalidSeries(
            "time must be strictly increasing".into(),
        ));
    }
    if times.iter().chain(speeds).any(|v| !v.is_finite()) {
        return Err(EnvironmentError::InvalidSeries("non-finite sample".into()));
    }
    Ok(())
}

/// Evaluable wind history.
#[derive(Debug, Clone, PartialEq)]
pub enum WindField {
    Constant(f64),
    /// Samples at arbitrary increasing times.
    Series { times: Vec<f64>, speeds: Vec<f64> },
    /// Uniform samples starting at t = 0.
    Uniform { dt: f64, speeds: Vec<f64> },
}

impl WindField {
    /// Builds the field for a run of length `duration`. `seed` is used for
    /// spectral sources that carry no seed of their own.
    pub fn build(source: &WindSource, duration: f64, seed: u64) -> Result<Self, EnvironmentError> {
        match source {
            WindSource::Constant { mean_speed } => {
                if !(mean_speed.is_finite() && *mean_speed >= 0.0) {
                    return Err(EnvironmentError::InvalidSeries(
                        "mean speed must be non-negative".into(),
                    ));
                }
                Ok(WindField::Constant(*mean_speed))
            }
            WindSource::FileSeries { path } => {
                let (times, speeds) = read_wind_series(path)?;
                Ok(WindField::Series { times, speeds })
            }
            WindSource::Spectral {
                mean_speed,
                turbulence_intensity,
                seed: own,
            } => Self::spectral(
                *mean_speed,
                *turbulence_intensity,
                duration,
                own.unwrap_or(seed),
            ),
        }
    }

    pub fn from_series(times: Vec<f64>, speeds: Vec<f64>) -> Result<Self, EnvironmentError> {
        validate_series(&times, &speeds)?;
        Ok(WindField::Series { times, speeds })
    }

    /// Kaimal-spectrum series covering `[0, duration]`, rescaled to exactly
    /// the requested mean and standard deviation.
    pub fn spectral(
        mean_speed: f64,
        intensity: f64,
        duration: f64,
        seed: u64,
    ) -> Result<Self, EnvironmentError> {
        if !(mean_speed > 0.0 && intensity >= 0.0 && duration >= 0.0) {
            return Err(EnvironmentError::InvalidSeries(
                "spectral wind needs positive mean speed and non-negative intensity".into(),
            ));
        }
        let n = ((duration / SPECTRAL_DT).ceil() as usize + 2).max(16);
        let sigma = intensity * mean_speed;
        if sigma == 0.0 {
            return Ok(WindField::Uniform {
                dt: SPECTRAL_DT,
                speeds: vec![mean_speed; n],
            });
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let df = 1.0 / (n as f64 * SPECTRAL_DT);
        let mut spectrum = vec![Complex::new(0.0, 0.0); n];
        for k in 1..n.div_ceil(2) {
            let f = k as f64 * df;
            let amp = (kaimal_spectrum(f, mean_speed, sigma) * df).sqrt();
            let phi = rng.random::<f64>() * std::f64::consts::TAU;
            let c = Complex::from_polar(amp, phi);
            spectrum[k] = c;
            spectrum[n - k] = c.conj();
        }
        FftPlanner::new().plan_fft_inverse(n).process(&mut spectrum);
        let raw: Vec<f64> = spectrum.iter().map(|c| c.re).collect();
        let mean = raw.iter().sum::<f64>() / n as f64;
        let std = (raw.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / n as f64).sqrt();
        let speeds = raw
            .iter()
            .map(|v| mean_speed + sigma * (v - mean) / std)
            .collect();
        Ok(WindField::Uniform {
            dt: SPECTRAL_DT,
            speeds,
        })
    }

    /// Inertial wind velocity at time `t`; the flow is along +x.
    pub fn wind_at(&self, t: f64) -> Result<Vec3, EnvironmentError> {
        Ok(Vec3::new(self.speed_at(t)?, 0.0, 0.0))
    }

    pub fn speed_at(&self, t: f64) -> Result<f64, EnvironmentError> {
        match self {
            WindField::Constant(u) => Ok(*u),
            WindField::Series { times, speeds } => {
                let (start, end) = (times[0], times[times.len() - 1]);
                if !(t >= start && t <= end) {
                    return Err(EnvironmentError::OutOfRange { t, start, end });
                }
                let i = times.partition_point(|x| *x <= t).clamp(1, times.len() - 1);
                let w = (t - times[i - 1]) / (times[i] - times[i - 1]);
                Ok(speeds[i - 1] + w * (speeds[i] - speeds[i - 1]))
            }
            WindField::Uniform { dt, speeds } => {
                let end = (speeds.len() - 1) as f64 * dt;
                if !(t >= 0.0 && t <= end) {
                    return Err(EnvironmentError::OutOfRange { t, start: 0.0, end });
                }
                let x = t / dt;
                let i = (x.floor() as usize).min(speeds.len() - 2);
                let w = x - i as f64;
                Ok(speeds[i] + w * (speeds[i + 1] - speeds[i]))
            }
        }
    }
}
