use nalgebra::{Matrix3, Matrix6, Vector6};

use crate::error::FrameError;
use crate::frames::{euler_rate_map, Vec3};
use crate::loads::{LoadSource, LoadWrench};
use crate::params::MooringConfig;
use crate::state::StateVector;

/// Mooring wrench with per-line tensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MooringLoads {
    pub wrench: LoadWrench,
    pub fairlead_tension: [f64; 3],
    pub anchor_tension: [f64; 3],
}

/// Linear stiffness/damping model of the three catenary lines.
#[derive(Debug, Clone)]
pub struct MooringModel {
    stiffness: Matrix6<f64>,
    damping: Matrix6<f64>,
    pretension: Vector6<f64>,
    fairleads: [Vec3; 3],
    anchors: [Vec3; 3],
    declination: f64,
    line_weight: f64,
}

impl MooringModel {
    pub fn new(cfg: &MooringConfig) -> Self {
        Self {
            stiffness: Matrix6::from_fn(|i, j| cfg.stiffness[i][j]),
            damping: Matrix6::from_fn(|i, j| cfg.damping[i][j]),
            pretension: Vector6::from_column_slice(&cfg.pretension),
            fairleads: cfg.fairleads.map(Vec3::from),
            anchors: cfg.anchors.map(Vec3::from),
            declination: cfg.fairlead_declination_deg.to_radians(),
            line_weight: cfg.line_weight,
        }
    }

    pub fn without_damping(mut self) -> Self {
        self.damping = Matrix6::zeros();
        self
    }

    pub fn stiffness(&self) -> &Matrix6<f64> {
        &self.stiffness
    }

    pub fn pretension(&self) -> &Vector6<f64> {
        &self.pretension
    }

    /// Inertial wrench `pretension - K q - B q_dot`.
    pub fn inertial_wrench(&self, state: &StateVector) -> Result<Vector6<f64>, FrameError> {
        let q = Vector6::new(
            state.r[0],
            state.r[1],
            state.r[2],
            state.theta.roll,
            state.theta.pitch,
            state.theta.yaw,
        );
        let rot = state.rotation();
        let r_dot = rot * state.v;
        let theta_dot = euler_rate_map(state.theta)? * state.omega;
        let q_dot = Vector6::new(
            r_dot[0],
            r_dot[1],
            r_dot[2],
            theta_dot[0],
            theta_dot[1],
            theta_dot[2],
        );
        Ok(self.pretension - self.stiffness * q - self.damping * q_dot)
    }

    /// Platform-frame wrench and line tensions.
    pub fn loads(&self, state: &StateVector) -> Result<MooringLoads, FrameError> {
        let w = self.inertial_wrench(state)?;
        let rot = state.rotation();
        let force_i = Vec3::new(w[0], w[1], w[2]);
        let moment_i = Vec3::new(w[3], w[4], w[5]);
        let wrench = LoadWrench::new(
            rot.transpose() * force_i,
            rot.transpose() * moment_i,
            LoadSource::Mooring,
        );
        let (fairlead_tension, anchor_tension) = self.line_tensions(state, &force_i);
        Ok(MooringLoads {
            wrench,
            fairlead_tension,
            anchor_tension,
        })
    }

    /// Distributes the inertial mooring force over the three lines along
    /// their fairlead tangents. Anchor tension is the fairlead tension less
    /// the submerged weight of the vertical span.
    pub fn line_tensions(&self, state: &StateVector, force: &Vec3) -> ([f64; 3], [f64; 3]) {
        let rot = state.rotation();
        let (sd, cd) = self.declination.sin_cos();
        let mut dirs = Matrix3::zeros();
        let mut heights = [0.0; 3];
        for i in 0..3 {
            let p = state.r + rot * self.fairleads[i];
            let mut h = self.anchors[i] - p;
            h[2] = 0.0;
            let h = h.normalize();
            dirs.set_column(i, &Vec3::new(cd * h[0], cd * h[1], -sd));
            heights[i] = p[2] - self.anchors[i][2];
        }
        let tensions = dirs.lu().solve(force).unwrap_or_else(Vec3::zeros);
        let fair = [tensions[0], tensions[1], tensions[2]];
        let anchor = [
            fair[0] - self.line_weight * heights[0],
            fair[1] - self.line_weight * heights[1],
            fair[2] - self.line_weight * heights[2],
        ];
        (fair, anchor)
    }
}
