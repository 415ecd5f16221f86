use log::warn;
use serde::{Deserialize, Serialize};

use super::equilibrium::{solve_equilibrium, solve_trim, EquilibriumSpec, RotorCondition};
use super::plant::{LoadBreakdown, Plant};
use crate::control::{ActuatorLimits, ControlSignals, Controller, ControllerSpec};
use crate::environment::{EnvironmentSample, WaveField, WaveSpec, WindField, WindSource};
use crate::error::SimulationError;
use crate::frames::{check_attitude, Vec3};
use crate::rigid_body::Vector13;
use crate::state::StateVector;
use crate::trajectory::{Trajectory, TrajectoryHeader, WIDTH};

/// Default integration step (s).
pub const DEFAULT_DT: f64 = 0.0125;
/// Position bound beyond which a run is declared diverged (m).
pub const POSITION_BOUND: f64 = 500.0;
/// Rotor-speed bound as a multiple of rated speed.
pub const ROTOR_SPEED_BOUND: f64 = 3.0;

/// State the initial offsets are applied to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InitialReference {
    /// The undisplaced platform.
    Origin,
    /// Still-water balance with no wind.
    #[default]
    Calm,
    /// Balance at rated speed in the scenario's mean wind, with the pitch
    /// that holds it.
    Trim,
}

/// Initial condition: a reference state plus offsets.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct InitialSpec {
    pub reference: InitialReference,
    pub surge: f64,
    pub sway: f64,
    pub heave: f64,
    pub roll_deg: f64,
    pub pitch_deg: f64,
    pub yaw_deg: f64,
    /// Rotor speed (rpm); rated speed when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rotor_speed_rpm: Option<f64>,
    /// Initial blade pitch (deg) for feedback controllers; the trim pitch
    /// (trim reference) or zero when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub beta_deg: Option<f64>,
}

impl Default for InitialSpec {
    fn default() -> Self {
        Self {
            reference: InitialReference::Calm,
            surge: 0.0,
            sway: 0.0,
            heave: 0.0,
            roll_deg: 0.0,
            pitch_deg: 0.0,
            yaw_deg: 0.0,
            rotor_speed_rpm: None,
            beta_deg: None,
        }
    }
}

pub fn rpm_to_rad_s(rpm: f64) -> f64 {
    rpm * std::f64::consts::TAU / 60.0
}

pub fn rad_s_to_rpm(w: f64) -> f64 {
    w * 60.0 / std::f64::consts::TAU
}

/// One simulated case: environment, initial condition, duration and step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    #[serde(default = "default_name")]
    pub name: String,
    #[serde(default = "default_wind")]
    pub wind: WindSource,
    #[serde(default = "WaveSpec::calm")]
    pub wave: WaveSpec,
    pub duration: f64,
    #[serde(default = "default_dt")]
    pub dt: f64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub initial: InitialSpec,
}

fn default_name() -> String {
    "scenario".into()
}

/// Steady rated-region wind used when a scenario names none.
fn default_wind() -> WindSource {
    WindSource::Constant { mean_speed: 18.0 }
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl Scenario {
    pub fn validate(&self) -> Result<(), SimulationError> {
        if !(self.duration.is_finite() && self.duration > 0.0) {
            return Err(SimulationError::InvalidScenario("duration must be positive".into()));
        }
        if !(self.dt.is_finite() && self.dt > 0.0 && self.dt <= self.duration) {
            return Err(SimulationError::InvalidScenario(
                "dt must be positive and not exceed the duration".into(),
            ));
        }
        self.wave.validate()?;
        Ok(())
    }

    /// Number of whole steps; a trailing partial step is dropped.
    pub fn steps(&self) -> usize {
        (self.duration / self.dt + 1e-9).floor() as usize
    }
}

/// Resolves the initial plant state and blade pitch.
pub fn initial_state(plant: &Plant, scenario: &Scenario) -> Result<(StateVector, f64), SimulationError> {
    let init = &scenario.initial;
    let rotor_speed = init
        .rotor_speed_rpm
        .map(rpm_to_rad_s)
        .unwrap_or_else(|| plant.rated_speed());
    let (mut state, mut beta) = match init.reference {
        InitialReference::Origin => (StateVector::default(), 0.0),
        InitialReference::Calm => {
            let spec = EquilibriumSpec {
                rotor: RotorCondition::Fixed(0.0),
                ..EquilibriumSpec::calm()
            };
            (solve_equilibrium(plant, &spec)?.state, 0.0)
        }
        InitialReference::Trim => {
            let wind = scenario.wind.mean_speed().ok_or_else(|| {
                SimulationError::InvalidScenario("trim start needs a wind source with a mean speed".into())
            })?;
            let eq = solve_trim(plant, wind, rotor_speed)?;
            (eq.state, eq.beta)
        }
    };
    if let Some(b) = init.beta_deg {
        beta = b.to_radians();
    }
    state.r += Vec3::new(init.surge, init.sway, init.heave);
    state.theta.roll += init.roll_deg.to_radians();
    state.theta.pitch += init.pitch_deg.to_radians();
    state.theta.yaw += init.yaw_deg.to_radians();
    state.rotor_speed = rotor_speed;
    Ok((state, beta))
}

fn divergence(plant: &Plant, s: &StateVector) -> Option<String> {
    if !s.is_finite() {
        return Some("non-finite state".into());
    }
    if s.r.norm() > POSITION_BOUND {
        return Some(format!("platform displacement {:.1} m exceeds {POSITION_BOUND} m", s.r.norm()));
    }
    if s.rotor_speed > ROTOR_SPEED_BOUND * plant.rated_speed() {
        return Some(format!("rotor speed {:.3} rad/s exceeds {ROTOR_SPEED_BOUND} x rated", s.rotor_speed));
    }
    if let Err(e) = check_attitude(s.theta, plant.gimbal_guard) {
        return Some(e.to_string());
    }
    None
}

#[allow(clippy::too_many_arguments)]
fn record(
    out: &mut Trajectory,
    t: f64,
    x: &Vector13,
    beta: f64,
    signals: &ControlSignals,
    loads: &LoadBreakdown,
    wind_speed: f64,
) {
    let mut row = [0.0; WIDTH];
    row[0] = t;
    row[1..14].copy_from_slice(x.as_slice());
    row[14] = beta;
    row[15] = signals.rate_raw;
    row[16] = signals.rate;
    row[17] = if signals.saturated { 1.0 } else { 0.0 };
    row[18] = loads.generator_torque;
    row[19] = loads.aero.torque;
    row[20] = loads.aero.thrust;
    row[21] = signals.xi;
    row[22] = signals.xi_bar;
    row[23] = signals.gamma;
    row[24] = signals.gamma_closed_form;
    row[25] = signals.weight_norm;
    row[26..32].copy_from_slice(&loads.hydro.buoyancy.as_array());
    row[32..38].copy_from_slice(&loads.hydro.hydrodynamic.as_array());
    row[38..44].copy_from_slice(&loads.aero.wrench.as_array());
    row[44..50].copy_from_slice(&loads.mooring.wrench.as_array());
    row[50..53].copy_from_slice(&loads.mooring.fairlead_tension);
    row[53..56].copy_from_slice(&loads.mooring.anchor_tension);
    row[56] = wind_speed;
    row[57] = loads.aero.inflow;
    row[58] = loads.hydro.eta[0];
    row[59] = loads.tower_base_proxy();
    out.push(&row);
}

/// Runs `scenario` from its resolved initial condition under the given
/// controller, recording every step including the final state.
pub fn simulate(
    plant: &Plant,
    scenario: &Scenario,
    controller: &ControllerSpec,
    limits: &ActuatorLimits,
    header: TrajectoryHeader,
) -> Result<Trajectory, SimulationError> {
    scenario.validate()?;
    let (state0, beta0) = initial_state(plant, scenario)?;
    let wind = WindField::build(&scenario.wind, scenario.duration, scenario.seed)?;
    let waves = WaveField::new(&scenario.wave, plant.gravity(), plant.params.hydro.water_density)?;
    let ctrl = Controller::new(controller, limits, plant.rated_speed(), beta0);
    simulate_from(plant, scenario, state0, ctrl, &wind, &waves, header)
}

/// Fixed-step loop from an explicit initial state and controller.
pub fn simulate_from(
    plant: &Plant,
    scenario: &Scenario,
    state0: StateVector,
    mut controller: Controller,
    wind: &WindField,
    waves: &WaveField,
    header: TrajectoryHeader,
) -> Result<Trajectory, SimulationError> {
    scenario.validate()?;
    let dt = scenario.dt;
    let steps = scenario.steps();
    let mut out = Trajectory::with_capacity(header, dt, plant.rated_speed(), steps + 1);
    let mut x = state0.to_vector();
    let mut warned_clamp = false;
    for n in 0..=steps {
        let t = n as f64 * dt;
        let state = StateVector::from_vector(&x);
        if let Some(reason) = divergence(plant, &state) {
            return Err(SimulationError::Diverged { t, reason });
        }
        let env = EnvironmentSample {
            t,
            wind: wind.wind_at(t)?,
            waves,
        };
        let cmd = controller.step(&state, &env.wind, dt);
        let rate = (cmd.beta_next - cmd.beta) / dt;
        let beta_at = |s: f64| cmd.beta + rate * s;
        let deriv = |x: &Vector13, s: f64| -> Result<(Vector13, LoadBreakdown), SimulationError> {
            let st = StateVector::from_vector(x);
            plant.evaluate(&st, &env, beta_at(s), plant.generator_torque(st.rotor_speed))
        };
        let (k1, loads) = deriv(&x, 0.0)?;
        if loads.hydro.clamped && !warned_clamp {
            warn!("t = {t:.3} s: a wetted length reached the member end and was clamped");
            warned_clamp = true;
        }
        record(&mut out, t, &x, cmd.beta, &cmd.signals, &loads, env.wind[0]);
        if n == steps {
            break;
        }
        let h = 0.5 * dt;
        let (k2, _) = deriv(&(x + k1 * h), h)?;
        let (k3, _) = deriv(&(x + k2 * h), h)?;
        let (k4, _) = deriv(&(x + k3 * dt), dt)?;
        x += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
    }
    Ok(out)
}
