//! Equations of motion, time integration and static balance.

mod equilibrium;
mod integrator;
mod plant;
mod simulate;

pub use equilibrium::{
    newton_solve, solve_equilibrium, solve_trim, static_residual, Equilibrium, EquilibriumSpec,
    RotorCondition, EQUILIBRIUM_TOLERANCE,
};
pub use integrator::step_rk4;
pub use plant::{LoadBreakdown, LoadSwitches, Plant};
pub use simulate::{
    initial_state, rad_s_to_rpm, rpm_to_rad_s, simulate, simulate_from, InitialReference, InitialSpec,
    Scenario, DEFAULT_DT, POSITION_BOUND, ROTOR_SPEED_BOUND,
};
