use nalgebra::{DMatrix, DVector};

use super::plant::Plant;
use crate::environment::{EnvironmentSample, WaveField};
use crate::error::SimulationError;
use crate::frames::{EulerTriad, Vec3};
use crate::state::StateVector;

/// Residual tolerance on the acceleration rows.
pub const EQUILIBRIUM_TOLERANCE: f64 = 1e-10;
const MAX_ITERATIONS: usize = 60;

/// Treatment of the rotor row in a static balance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RotorCondition {
    /// Speed held; the rotor row is not part of the balance.
    Fixed(f64),
    /// Speed solved for, within `[0, 3 x rated]`.
    Free,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquilibriumSpec {
    pub wind_speed: f64,
    pub beta: f64,
    pub rotor: RotorCondition,
    /// Generator torque override; the plant's torque law otherwise.
    pub generator_torque: Option<f64>,
}

impl EquilibriumSpec {
    /// Still air and water with a parked rotor.
    pub fn calm() -> Self {
        Self {
            wind_speed: 0.0,
            beta: std::f64::consts::FRAC_PI_2,
            rotor: RotorCondition::Fixed(0.0),
            generator_torque: None,
        }
    }
}

/// Outcome of a static solve.
#[derive(Debug, Clone, PartialEq)]
pub struct Equilibrium {
    pub state: StateVector,
    pub beta: f64,
    pub residual: f64,
    pub iterations: usize,
}

fn static_state(x: &DVector<f64>, rotor_speed: f64) -> StateVector {
    StateVector {
        r: Vec3::new(x[0], x[1], x[2]),
        theta: EulerTriad::new(x[3], x[4], x[5]),
        v: Vec3::zeros(),
        omega: Vec3::zeros(),
        rotor_speed,
    }
}

/// Damped Newton iteration with a central-difference Jacobian and a
/// backtracking line search on the residual norm. `project` keeps iterates
/// admissible. On failure reports the indices of residual entries still
/// above tolerance.
pub fn newton_solve(
    x0: DVector<f64>,
    mut residual: impl FnMut(&DVector<f64>) -> Result<DVector<f64>, SimulationError>,
    project: impl Fn(&mut DVector<f64>),
    tol: f64,
    max_iter: usize,
) -> Result<(DVector<f64>, f64, usize), SimulationError> {
    let n = x0.len();
    let mut x = x0;
    project(&mut x);
    let mut f = residual(&x)?;
    let norm = |v: &DVector<f64>| v.amax();
    for it in 0..max_iter {
        if norm(&f) < tol {
            return Ok((x, norm(&f), it));
        }
        let mut jac = DMatrix::zeros(f.len(), n);
        for j in 0..n {
            let h = 1e-6 * x[j].abs().max(1.0);
            let mut xp = x.clone();
            let mut xm = x.clone();
            xp[j] += h;
            xm[j] -= h;
            let col = (residual(&xp)? - residual(&xm)?) / (2.0 * h);
            jac.set_column(j, &col);
        }
        let Some(step) = jac.clone().lu().solve(&(-&f)).or_else(|| {
            jac.clone().svd(true, true).solve(&(-&f), 1e-14).ok()
        }) else {
            break;
        };
        let mut alpha = 1.0;
        let mut accepted = false;
        for _ in 0..30 {
            let mut trial = &x + &step * alpha;
            project(&mut trial);
            if let Ok(ft) = residual(&trial) {
                if norm(&ft) < norm(&f) {
                    x = trial;
                    f = ft;
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    let r = norm(&f);
    if r < tol {
        return Ok((x, r, max_iter));
    }
    let rows = f
        .iter()
        .enumerate()
        .filter(|(_, v)| v.abs() >= tol || !v.is_finite())
        .map(|(i, _)| i)
        .collect();
    Err(SimulationError::NoConvergence { rows, residual: r })
}

/// Acceleration rows (derivative rows 7-13, zero-based 6-12) of the plant
/// with all rates zeroed.
pub fn static_residual(
    plant: &Plant,
    state: &StateVector,
    wind_speed: f64,
    beta: f64,
    tau_g: f64,
    waves: &WaveField,
) -> Result<DVector<f64>, SimulationError> {
    let env = EnvironmentSample {
        t: 0.0,
        wind: Vec3::new(wind_speed, 0.0, 0.0),
        waves,
    };
    let dx = plant.state_derivative(state, &env, beta, tau_g)?;
    Ok(DVector::from_iterator(7, dx.iter().skip(6).copied()))
}

/// Static balance of the platform (and optionally the rotor) in still water
/// under a steady wind. Residual rows are numbered 0-6 for surge through
/// rotor.
pub fn solve_equilibrium(plant: &Plant, spec: &EquilibriumSpec) -> Result<Equilibrium, SimulationError> {
    let waves = WaveField::calm(plant.gravity(), plant.params.hydro.water_density);
    let free = matches!(spec.rotor, RotorCondition::Free);
    let n = if free { 7 } else { 6 };
    let mut x0 = DVector::zeros(n);
    let max_speed = 3.0 * plant.rated_speed();
    if free {
        x0[6] = plant.rated_speed();
    }
    let speed = |x: &DVector<f64>| match spec.rotor {
        RotorCondition::Fixed(w) => w,
        RotorCondition::Free => x[6],
    };
    let residual = |x: &DVector<f64>| {
        let state = static_state(x, speed(x));
        let tau_g = spec
            .generator_torque
            .unwrap_or_else(|| plant.generator_torque(state.rotor_speed));
        let r = static_residual(plant, &state, spec.wind_speed, spec.beta, tau_g, &waves)?;
        Ok(if free { r } else { r.rows(0, 6).into_owned() })
    };
    let project = |x: &mut DVector<f64>| {
        if free {
            x[6] = x[6].clamp(0.0, max_speed);
        }
    };
    let (x, residual, iterations) = newton_solve(x0, residual, project, EQUILIBRIUM_TOLERANCE, MAX_ITERATIONS)?;
    Ok(Equilibrium {
        state: static_state(&x, speed(&x)),
        beta: spec.beta,
        residual,
        iterations,
    })
}

/// Static balance at rotor speed `rotor_speed` with the blade pitch as the
/// seventh unknown.
pub fn solve_trim(plant: &Plant, wind_speed: f64, rotor_speed: f64) -> Result<Equilibrium, SimulationError> {
    let waves = WaveField::calm(plant.gravity(), plant.params.hydro.water_density);
    let tau_g = plant.generator_torque(rotor_speed);
    let mut x0 = DVector::zeros(7);
    x0[6] = 0.1;
    let residual = |x: &DVector<f64>| {
        let state = static_state(x, rotor_speed);
        static_residual(plant, &state, wind_speed, x[6], tau_g, &waves)
    };
    let project = |x: &mut DVector<f64>| x[6] = x[6].clamp(0.0, std::f64::consts::FRAC_PI_2);
    let (x, residual, iterations) = newton_solve(x0, residual, project, EQUILIBRIUM_TOLERANCE, MAX_ITERATIONS)?;
    Ok(Equilibrium {
        state: static_state(&x, rotor_speed),
        beta: x[6],
        residual,
        iterations,
    })
}
