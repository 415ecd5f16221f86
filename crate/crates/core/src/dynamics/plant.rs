use crate::aero::{aero_loads, generator_torque, AeroLoads, RotorAeroTable};
use crate::environment::EnvironmentSample;
use crate::error::{ParamError, SimulationError};
use crate::frames::{euler_rate_map_guarded, Vec3, DEFAULT_GIMBAL_GUARD};
use crate::hydro::{BuoyancyModel, HydroLoads, MooringLoads, MooringModel, Platform};
use crate::loads::{LoadSource, LoadWrench};
use crate::params::TurbineParams;
use crate::rigid_body::{control_input_gains, SystemMatrices, Vector13, Vector7};
use crate::state::StateVector;

/// Which external load groups act on the plant.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LoadSwitches {
    pub hydro: bool,
    pub mooring: bool,
    pub aero: bool,
}

impl Default for LoadSwitches {
    fn default() -> Self {
        Self {
            hydro: true,
            mooring: true,
            aero: true,
        }
    }
}

/// External loads evaluated for one derivative call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LoadBreakdown {
    pub hydro: HydroLoads,
    pub mooring: MooringLoads,
    pub aero: AeroLoads,
    pub generator_torque: f64,
}

impl LoadBreakdown {
    pub fn total(&self) -> LoadWrench {
        let mut w = LoadWrench::zero(LoadSource::Combined);
        w += self.hydro.buoyancy;
        w += self.hydro.hydrodynamic;
        w += self.mooring.wrench;
        w += self.aero.wrench;
        w
    }

    /// Platform pitching moment from water and mooring lines.
    pub fn tower_base_proxy(&self) -> f64 {
        self.hydro.buoyancy.moment[1] + self.hydro.hydrodynamic.moment[1] + self.mooring.wrench.moment[1]
    }
}

/// Assembled plant: inertia, platform members, mooring and rotor.
#[derive(Debug, Clone)]
pub struct Plant {
    pub params: TurbineParams,
    pub matrices: SystemMatrices,
    pub platform: Platform,
    pub mooring: MooringModel,
    pub table: RotorAeroTable,
    pub hub: Vec3,
    pub switches: LoadSwitches,
    pub gimbal_guard: f64,
}

impl Plant {
    pub fn new(params: TurbineParams) -> Result<Self, ParamError> {
        params.validate()?;
        let matrices = SystemMatrices::assemble(&params.body, &params.cylinders, params.hydro.water_density)?;
        let table = match &params.aero.table_file {
            Some(path) => RotorAeroTable::load(path)?,
            None => RotorAeroTable::from_surrogate(&params.aero.surrogate, &params.aero.grid)?,
        };
        Ok(Self {
            platform: Platform::new(&params),
            mooring: MooringModel::new(&params.mooring),
            hub: params.body.hub_position(),
            matrices,
            table,
            params,
            switches: LoadSwitches::default(),
            gimbal_guard: DEFAULT_GIMBAL_GUARD,
        })
    }

    pub fn with_switches(mut self, switches: LoadSwitches) -> Self {
        self.switches = switches;
        self
    }

    pub fn with_buoyancy_model(mut self, model: BuoyancyModel) -> Self {
        self.platform = self.platform.with_buoyancy_model(model);
        self
    }

    pub fn gravity(&self) -> f64 {
        self.params.body.gravity
    }

    pub fn rated_speed(&self) -> f64 {
        self.params.rotor.rated_speed
    }

    /// `(b1, b2)` input gains of the reduced rotor-speed dynamics.
    pub fn control_input_gains(&self) -> (f64, f64) {
        control_input_gains(&self.params.body, &self.matrices)
    }

    /// Generator torque from the configured law.
    pub fn generator_torque(&self, rotor_speed: f64) -> f64 {
        generator_torque(&self.params.rotor, rotor_speed)
    }

    /// External loads at `state`.
    pub fn loads(
        &self,
        state: &StateVector,
        env: &EnvironmentSample,
        beta: f64,
        tau_g: f64,
    ) -> Result<LoadBreakdown, SimulationError> {
        let hydro = if self.switches.hydro {
            self.platform.loads(state, env.waves, env.t)?
        } else {
            HydroLoads {
                buoyancy: LoadWrench::zero(LoadSource::Buoyancy),
                hydrodynamic: LoadWrench::zero(LoadSource::Hydrodynamic),
                eta: [0.0; 7],
                lengths: [0.0; 7],
                clamped: false,
            }
        };
        let mooring = if self.switches.mooring {
            self.mooring.loads(state)?
        } else {
            MooringLoads {
                wrench: LoadWrench::zero(LoadSource::Mooring),
                fairlead_tension: [0.0; 3],
                anchor_tension: [0.0; 3],
            }
        };
        let aero = if self.switches.aero {
            aero_loads(&self.params.rotor, &self.table, state, &env.wind, &self.hub, beta)
        } else {
            AeroLoads::idle(0.0)
        };
        Ok(LoadBreakdown {
            hydro,
            mooring,
            aero,
            generator_torque: tau_g,
        })
    }

    /// Time derivative of the 13-entry state together with the loads used.
    pub fn evaluate(
        &self,
        state: &StateVector,
        env: &EnvironmentSample,
        beta: f64,
        tau_g: f64,
    ) -> Result<(Vector13, LoadBreakdown), SimulationError> {
        let j = euler_rate_map_guarded(state.theta, self.gimbal_guard)?;
        let loads = self.loads(state, env, beta, tau_g)?;
        let w = loads.total();
        let mut rhs = Vector7::zeros();
        rhs.fixed_rows_mut::<3>(0).copy_from(&w.force);
        rhs.fixed_rows_mut::<3>(3).copy_from(&w.moment);
        rhs[6] = loads.aero.torque - tau_g;
        rhs += self.matrices.coriolis(state) + self.matrices.gravity(state, self.gravity());
        let acc = self.matrices.solve(&rhs);
        let mut dx = Vector13::zeros();
        dx.fixed_rows_mut::<3>(0).copy_from(&(state.rotation() * state.v));
        dx.fixed_rows_mut::<3>(3).copy_from(&(j * state.omega));
        dx.fixed_rows_mut::<7>(6).copy_from(&acc);
        Ok((dx, loads))
    }

    pub fn state_derivative(
        &self,
        state: &StateVector,
        env: &EnvironmentSample,
        beta: f64,
        tau_g: f64,
    ) -> Result<Vector13, SimulationError> {
        self.evaluate(state, env, beta, tau_g).map(|(dx, _)| dx)
    }

    /// Kinetic plus gravitational energy, and the frozen-buoyancy potential
    /// when that model is active.
    pub fn mechanical_energy(&self, state: &StateVector) -> f64 {
        let mut e = self.matrices.kinetic_energy(state) + self.matrices.gravity_potential(state, self.gravity());
        if self.switches.hydro && self.platform.buoyancy_model() == BuoyancyModel::FrozenVolume {
            e += self.platform.frozen_buoyancy_potential(state);
        }
        e
    }
}
