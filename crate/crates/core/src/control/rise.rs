use nalgebra::DVector;
use serde::{Deserialize, Serialize};

use super::rbf::{FeatureScaling, RbfNetwork, FEATURE_DIM};
use super::ActuatorLimits;
use crate::frames::Vec3;
use crate::state::StateVector;

/// Gains of the robust adaptive pitch law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct RiseConfig {
    /// Platform pitch-rate coupling in the tracking error (s).
    pub k: f64,
    /// Filter gain of the auxiliary error (1/s).
    pub c: f64,
    /// Feedback gain on the auxiliary error.
    pub k_c: f64,
    pub basis_count: usize,
    pub learning_rate: f64,
    pub weight_damping: f64,
    /// Cut-off of the error-derivative low-pass (Hz).
    pub derivative_cutoff_hz: f64,
    /// Seed of the basis-center layout.
    pub center_seed: u64,
    /// Speed set-point override (rad/s); the rotor rated speed otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rated_speed: Option<f64>,
    pub scaling: FeatureScaling,
}

impl Default for RiseConfig {
    fn default() -> Self {
        Self {
            k: 4.5,
            c: 2.0,
            k_c: 10.0,
            basis_count: 50,
            learning_rate: 1e-3,
            weight_damping: 1e-3,
            derivative_cutoff_hz: 5.0,
            center_seed: 0x5eed,
            rated_speed: None,
            scaling: FeatureScaling::default(),
        }
    }
}

impl RiseConfig {
    pub fn validate(&self) -> Result<(), String> {
        let positive = [
            self.k,
            self.c,
            self.k_c,
            self.learning_rate,
            self.weight_damping,
            self.derivative_cutoff_hz,
        ];
        if positive.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
            return Err("rise gains k, c, k_c, learning_rate, weight_damping and derivative_cutoff_hz must be positive".into());
        }
        if self.basis_count == 0 {
            return Err("rise basis_count must be at least 1".into());
        }
        self.scaling.validate()
    }

    /// Upper bound on the weight norm implied by the adaptation law.
    pub fn weight_bound(&self) -> f64 {
        self.c * (self.basis_count as f64).sqrt() / self.weight_damping
    }
}

/// `sgn` with `sgn(0) = 0`.
pub fn sign(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else if x < 0.0 {
        -1.0
    } else {
        0.0
    }
}

/// `xi = (Omega - Omega_0) + k * pitch_rate`.
pub fn tracking_error(state: &StateVector, rated_speed: f64, k: f64) -> f64 {
    (state.rotor_speed - rated_speed) + k * state.pitch_rate()
}

/// Internal state of the robust adaptive controller.
#[derive(Debug, Clone, PartialEq)]
pub struct ControllerState {
    pub w_hat: DVector<f64>,
    pub gamma: f64,
    pub beta: f64,
    pub xi_prev: Option<f64>,
    /// Low-pass filtered backward difference of xi.
    pub xi_dot: f64,
    pub xi_initial: f64,
    /// Running `sum |xi| dt` for the closed-form gain.
    pub abs_integral: f64,
}

impl ControllerState {
    pub fn new(basis_count: usize, beta: f64) -> Self {
        Self {
            w_hat: DVector::zeros(basis_count),
            gamma: 0.0,
            beta,
            xi_prev: None,
            xi_dot: 0.0,
            xi_initial: 0.0,
            abs_integral: 0.0,
        }
    }

    /// Gain reconstructed as `|xi_n| - |xi_0| + c sum |xi| dt`.
    pub fn gamma_closed_form(&self, xi: f64, c: f64) -> f64 {
        xi.abs() - self.xi_initial.abs() + c * self.abs_integral
    }
}

/// Updates the derivative filter with `xi` and returns `xi_bar = xi_dot + c xi`.
pub fn filtered_error(xi: f64, st: &mut ControllerState, dt: f64, cfg: &RiseConfig) -> f64 {
    let tau = 1.0 / (std::f64::consts::TAU * cfg.derivative_cutoff_hz);
    let alpha = dt / (dt + tau);
    if let Some(prev) = st.xi_prev {
        let raw = (xi - prev) / dt;
        st.xi_dot += alpha * (raw - st.xi_dot);
    }
    st.xi_dot + cfg.c * xi
}

/// Per-step outputs of the robust adaptive law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiseOutput {
    pub xi: f64,
    pub xi_bar: f64,
    pub gamma: f64,
    pub gamma_closed_form: f64,
    pub rate_raw: f64,
    pub rate: f64,
    pub beta_next: f64,
    pub weight_norm: f64,
}

/// The robust adaptive pitch controller with its basis network.
#[derive(Debug, Clone)]
pub struct RiseController {
    pub cfg: RiseConfig,
    pub limits: ActuatorLimits,
    pub rated_speed: f64,
    pub network: RbfNetwork,
    pub state: ControllerState,
}

impl RiseController {
    pub fn new(cfg: RiseConfig, limits: ActuatorLimits, rated_speed: f64, beta: f64) -> Self {
        let rated_speed = cfg.rated_speed.unwrap_or(rated_speed);
        let network = RbfNetwork::new(cfg.basis_count, cfg.center_seed);
        let state = ControllerState::new(cfg.basis_count, beta);
        Self {
            cfg,
            limits,
            rated_speed,
            network,
            state,
        }
    }

    /// Raw approximator input `[X, beta, wind]`.
    pub fn input(state: &StateVector, beta: f64, wind: &Vec3) -> [f64; FEATURE_DIM] {
        let x = state.to_vector();
        let mut z = [0.0; FEATURE_DIM];
        z[..13].copy_from_slice(x.as_slice());
        z[13] = beta;
        z[14..].copy_from_slice(wind.as_slice());
        z
    }

    pub fn step(&mut self, plant: &StateVector, wind: &Vec3, dt: f64) -> RiseOutput {
        let z = self.cfg.scaling.scale(&Self::input(plant, self.state.beta, wind));
        let phi = self.network.features(&z);
        let xi = tracking_error(plant, self.rated_speed, self.cfg.k);
        rise_step(&mut self.state, xi, &phi, dt, &self.cfg, &self.limits)
    }
}

/// One explicit step of the robust adaptive law given the tracking error and
/// the basis activations. Updates weights, adaptive gain, filter state and
/// pitch in place.
pub fn rise_step(
    st: &mut ControllerState,
    xi: f64,
    phi: &DVector<f64>,
    dt: f64,
    cfg: &RiseConfig,
    limits: &ActuatorLimits,
) -> RiseOutput {
    if st.xi_prev.is_none() {
        st.xi_initial = xi;
    } else {
        // Exact integral of sgn(xi) dxi along the sampled path plus the
        // left-endpoint rule for c |xi|.
        let prev = st.xi_prev.unwrap_or(xi);
        st.gamma += xi.abs() - prev.abs();
    }
    let xi_bar = filtered_error(xi, st, dt, cfg);
    let gamma = st.gamma;
    let gamma_closed_form = st.gamma_closed_form(xi, cfg.c);

    let rate_raw = (cfg.k_c + 1.0) * xi_bar + st.w_hat.dot(phi) + gamma * sign(xi);
    let rate = rate_raw.clamp(-limits.rate_max(), limits.rate_max());
    let beta_next = (st.beta + rate * dt).clamp(limits.beta_min(), limits.beta_max());
    let applied = (beta_next - st.beta) / dt;

    let decay = cfg.weight_damping * xi.abs();
    st.w_hat = &st.w_hat + (phi * (cfg.c * xi) - &st.w_hat * decay) * (cfg.learning_rate * dt);
    st.gamma += cfg.c * xi.abs() * dt;
    st.abs_integral += xi.abs() * dt;
    st.xi_prev = Some(xi);
    st.beta = beta_next;

    RiseOutput {
        xi,
        xi_bar,
        gamma,
        gamma_closed_form,
        rate_raw,
        rate: applied,
        beta_next,
        weight_norm: st.w_hat.norm(),
    }
}
