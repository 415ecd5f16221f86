//! The 13-entry plant state.

use nalgebra::SVector;

use crate::frames::{rotation_matrix, EulerTriad, Mat3, Vec3};
use crate::rigid_body::{Vector13, Vector7};

/// Platform position (inertial), Euler angles, body-frame linear and angular
/// velocity, and rotor speed.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct StateVector {
    pub r: Vec3,
    pub theta: EulerTriad,
    pub v: Vec3,
    pub omega: Vec3,
    pub rotor_speed: f64,
}

/// Column names in state-vector order.
pub const STATE_NAMES: [&str; 13] = [
    "surge", "sway", "heave", "roll", "pitch", "yaw", "u", "v", "w", "p", "q", "r", "rotor_speed",
];

impl StateVector {
    pub fn to_vector(&self) -> Vector13 {
        let mut x = SVector::<f64, 13>::zeros();
        x.fixed_rows_mut::<3>(0).copy_from(&self.r);
        x.fixed_rows_mut::<3>(3).copy_from(&self.theta.to_vector());
        x.fixed_rows_mut::<3>(6).copy_from(&self.v);
        x.fixed_rows_mut::<3>(9).copy_from(&self.omega);
        x[12] = self.rotor_speed;
        x
    }

    pub fn from_vector(x: &Vector13) -> Self {
        Self {
            r: x.fixed_rows::<3>(0).into_owned(),
            theta: EulerTriad::from_vector(&x.fixed_rows::<3>(3).into_owned()),
            v: x.fixed_rows::<3>(6).into_owned(),
            omega: x.fixed_rows::<3>(9).into_owned(),
            rotor_speed: x[12],
        }
    }

    pub fn rotation(&self) -> Mat3 {
        rotation_matrix(self.theta)
    }

    /// `[v, omega, rotor speed]`.
    pub fn generalized_velocity(&self) -> Vector7 {
        Vector7::from_column_slice(&[
            self.v[0],
            self.v[1],
            self.v[2],
            self.omega[0],
            self.omega[1],
            self.omega[2],
            self.rotor_speed,
        ])
    }

    pub fn is_finite(&self) -> bool {
        self.to_vector().iter().all(|v| v.is_finite())
    }

    /// Pitch rate of the Euler angle, `cos(roll) q - sin(roll) r`.
    pub fn pitch_rate(&self) -> f64 {
        let (s, c) = self.theta.roll.sin_cos();
        c * self.omega[1] - s * self.omega[2]
    }
}
