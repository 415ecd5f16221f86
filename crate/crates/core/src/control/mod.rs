//! Blade-pitch controllers: a fixed pitch, the gain-scheduled PI baseline and
//! the robust adaptive law with its radial-basis approximator.

mod gspi;
mod rbf;
mod rise;

pub use gspi::{gain_schedule, gspi_step, GspiConfig, GspiState};
pub use rbf::{FeatureScaling, RbfNetwork, FEATURE_DIM};
pub use rise::{
    filtered_error, rise_step, sign, tracking_error, ControllerState, RiseConfig, RiseController,
    RiseOutput,
};

use serde::{Deserialize, Serialize};

use crate::frames::Vec3;
use crate::state::StateVector;

/// Pitch actuator position and rate limits. Stored in degrees for
/// configuration; accessors return radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ActuatorLimits {
    pub beta_min_deg: f64,
    pub beta_max_deg: f64,
    pub rate_max_deg_s: f64,
}

impl Default for ActuatorLimits {
    fn default() -> Self {
        Self {
            beta_min_deg: 0.0,
            beta_max_deg: 90.0,
            rate_max_deg_s: 8.0,
        }
    }
}

impl ActuatorLimits {
    pub fn beta_min(&self) -> f64 {
        self.beta_min_deg.to_radians()
    }

    pub fn beta_max(&self) -> f64 {
        self.beta_max_deg.to_radians()
    }

    pub fn rate_max(&self) -> f64 {
        self.rate_max_deg_s.to_radians()
    }

    pub fn validate(&self) -> Result<(), String> {
        if !(self.beta_min_deg < self.beta_max_deg && self.rate_max_deg_s > 0.0) {
            return Err("actuator limits need beta_min < beta_max and a positive rate".into());
        }
        Ok(())
    }
}

/// Controller selection with its gains.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum ControllerSpec {
    FixedPitch {
        #[serde(default)]
        beta_deg: f64,
    },
    Gspi(GspiConfig),
    Rise(RiseConfig),
}

impl ControllerSpec {
    pub fn name(&self) -> &'static str {
        match self {
            ControllerSpec::FixedPitch { .. } => "fixed-pitch",
            ControllerSpec::Gspi(_) => "gspi",
            ControllerSpec::Rise(_) => "rise",
        }
    }

    pub fn validate(&self) -> Result<(), String> {
        match self {
            ControllerSpec::FixedPitch { beta_deg } if !beta_deg.is_finite() => {
                Err("fixed pitch must be finite".into())
            }
            ControllerSpec::FixedPitch { .. } => Ok(()),
            ControllerSpec::Gspi(c) => c.validate(),
            ControllerSpec::Rise(c) => c.validate(),
        }
    }
}

/// Controller internals recorded with every sample.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct ControlSignals {
    pub xi: f64,
    pub xi_bar: f64,
    pub gamma: f64,
    pub gamma_closed_form: f64,
    pub weight_norm: f64,
    /// Requested pitch rate before limiting.
    pub rate_raw: f64,
    /// Pitch rate actually applied over the coming step.
    pub rate: f64,
    pub saturated: bool,
}

/// Pitch held over one step: `beta(t) = beta + rate (t - t_n)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PitchCommand {
    pub beta: f64,
    pub beta_next: f64,
    pub signals: ControlSignals,
}

impl PitchCommand {
    pub fn rate(&self) -> f64 {
        self.signals.rate
    }
}

#[derive(Debug, Clone)]
pub enum Controller {
    FixedPitch(f64),
    Gspi {
        cfg: GspiConfig,
        limits: ActuatorLimits,
        rated_speed: f64,
        state: GspiState,
    },
    Rise(Box<RiseController>),
}

impl Controller {
    /// Builds a controller starting from pitch `beta` (rad).
    pub fn new(spec: &ControllerSpec, limits: &ActuatorLimits, rated_speed: f64, beta: f64) -> Self {
        match spec {
            ControllerSpec::FixedPitch { beta_deg } => Controller::FixedPitch(beta_deg.to_radians()),
            ControllerSpec::Gspi(cfg) => Controller::Gspi {
                state: GspiState::preloaded(cfg, beta),
                rated_speed: cfg.rated_speed.unwrap_or(rated_speed),
                cfg: cfg.clone(),
                limits: limits.clone(),
            },
            ControllerSpec::Rise(cfg) => Controller::Rise(Box::new(RiseController::new(
                cfg.clone(),
                limits.clone(),
                rated_speed,
                beta,
            ))),
        }
    }

    pub fn beta(&self) -> f64 {
        match self {
            Controller::FixedPitch(b) => *b,
            Controller::Gspi { state, .. } => state.beta,
            Controller::Rise(r) => r.state.beta,
        }
    }

    /// Reads the plant and commits the pitch trajectory for the next step.
    pub fn step(&mut self, plant: &StateVector, wind: &Vec3, dt: f64) -> PitchCommand {
        let beta = self.beta();
        match self {
            Controller::FixedPitch(b) => PitchCommand {
                beta: *b,
                beta_next: *b,
                signals: ControlSignals::default(),
            },
            Controller::Gspi {
                cfg,
                limits,
                rated_speed,
                state,
            } => {
                let error = plant.rotor_speed - *rated_speed;
                let rate_raw = gspi_step(state, error, dt, cfg, limits);
                let rate = rate_raw.clamp(-limits.rate_max(), limits.rate_max());
                let beta_next = (beta + rate * dt).clamp(limits.beta_min(), limits.beta_max());
                state.beta = beta_next;
                PitchCommand {
                    beta,
                    beta_next,
                    signals: ControlSignals {
                        xi: error,
                        rate_raw,
                        rate: (beta_next - beta) / dt,
                        saturated: rate_raw.abs() > limits.rate_max(),
                        ..ControlSignals::default()
                    },
                }
            }
            Controller::Rise(r) => {
                let out = r.step(plant, wind, dt);
                PitchCommand {
                    beta,
                    beta_next: out.beta_next,
                    signals: ControlSignals {
                        xi: out.xi,
                        xi_bar: out.xi_bar,
                        gamma: out.gamma,
                        gamma_closed_form: out.gamma_closed_form,
                        weight_norm: out.weight_norm,
                        rate_raw: out.rate_raw,
                        rate: out.rate,
                        saturated: out.rate_raw.abs() > r.limits.rate_max(),
                    },
                }
            }
        }
    }
}

/// Computable terms of the closed-loop energy function at one sample.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LyapunovTerms {
    pub half_xi_sq: f64,
    /// `|W_hat|^2 / (2 l_w)`.
    pub weight_energy: f64,
}

impl LyapunovTerms {
    pub fn total(&self) -> f64 {
        self.half_xi_sq + self.weight_energy
    }
}

/// Diagnostic energy series from recorded `xi` and `|W_hat|`.
pub fn lyapunov_monitor(xi: &[f64], weight_norm: &[f64], learning_rate: f64) -> Vec<LyapunovTerms> {
    xi.iter()
        .zip(weight_norm)
        .map(|(x, w)| LyapunovTerms {
            half_xi_sq: 0.5 * x * x,
            weight_energy: w * w / (2.0 * learning_rate),
        })
        .collect()
}
