use serde::{Deserialize, Serialize};

use super::ActuatorLimits;

/// Gain-scheduled PI on rotor-speed error. Gains are referred to the rotor
/// side of the drivetrain.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GspiConfig {
    /// Proportional gain (rad per rad/s).
    pub kp: f64,
    /// Integral gain (rad per rad).
    pub ki: f64,
    /// Pitch at which the scheduled gain has halved (deg).
    pub schedule_pitch_deg: f64,
    /// Speed set-point override (rad/s); the rotor rated speed otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rated_speed: Option<f64>,
}

impl Default for GspiConfig {
    fn default() -> Self {
        Self {
            kp: 1.8262,
            ki: 0.78266,
            schedule_pitch_deg: 6.302336,
            rated_speed: None,
        }
    }
}

impl GspiConfig {
    pub fn validate(&self) -> Result<(), String> {
        if !(self.kp >= 0.0 && self.ki >= 0.0 && self.schedule_pitch_deg > 0.0) {
            return Err("gspi gains must be non-negative and the schedule pitch positive".into());
        }
        Ok(())
    }
}

/// Scheduling factor `1 / (1 + beta / beta_k)`.
pub fn gain_schedule(beta: f64, beta_k: f64) -> f64 {
    1.0 / (1.0 + beta / beta_k)
}

#[derive(Debug, Clone, PartialEq)]
pub struct GspiState {
    pub integral: f64,
    pub beta: f64,
}

impl GspiState {
    /// Integrator preloaded so the initial output equals `beta`.
    pub fn preloaded(cfg: &GspiConfig, beta: f64) -> Self {
        let gk = gain_schedule(beta, cfg.schedule_pitch_deg.to_radians());
        let integral = if cfg.ki > 0.0 { beta / (gk * cfg.ki) } else { 0.0 };
        Self { integral, beta }
    }
}

/// Advances the PI law by one step and returns the raw (pre-clamp) pitch
/// rate it asks for. The integrator is frozen while the output is saturated
/// and the error would push it further out.
pub fn gspi_step(
    state: &mut GspiState,
    speed_error: f64,
    dt: f64,
    cfg: &GspiConfig,
    limits: &ActuatorLimits,
) -> f64 {
    let gk = gain_schedule(state.beta, cfg.schedule_pitch_deg.to_radians());
    let candidate = state.integral + speed_error * dt;
    let unclamped = gk * (cfg.kp * speed_error + cfg.ki * candidate);
    let winding_up = (unclamped > limits.beta_max() && speed_error > 0.0)
        || (unclamped < limits.beta_min() && speed_error < 0.0);
    if !winding_up {
        state.integral = candidate;
    }
    let target = (gk * (cfg.kp * speed_error + cfg.ki * state.integral))
        .clamp(limits.beta_min(), limits.beta_max());
    (target - state.beta) / dt
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn schedule_is_one_at_zero_pitch() {
        assert_eq!(gain_schedule(0.0, 0.11), 1.0);
    }

    #[test]
    fn zero_error_holds_pitch() {
        let cfg = GspiConfig::default();
        let mut s = GspiState::preloaded(&cfg, 0.0);
        let rate = gspi_step(&mut s, 0.0, 0.0125, &cfg, &ActuatorLimits::default());
        assert_eq!(rate, 0.0);
        assert_eq!(s.integral, 0.0);
    }

    #[test]
    fn preload_reproduces_pitch() {
        let cfg = GspiConfig::default();
        let mut s = GspiState::preloaded(&cfg, 0.12);
        let rate = gspi_step(&mut s, 0.0, 0.0125, &cfg, &ActuatorLimits::default());
        assert!(rate.abs() < 1e-9);
    }
}
