//! Coordinate frames and small linear-algebra helpers.
//!
//! The platform frame is attached at the platform mass center with x pointing
//! downwind along the rotor shaft and z up. Attitude uses the 3-2-1 (yaw,
//! pitch, roll) Euler sequence, so `R = Rz(yaw) * Ry(pitch) * Rx(roll)` maps
//! body components to inertial components.

use nalgebra::{Matrix3, Vector3};

use crate::error::FrameError;

pub type Vec3 = Vector3<f64>;
pub type Mat3 = Matrix3<f64>;

/// Default distance from the pitch singularity at which the rate map refuses
/// to evaluate.
pub const DEFAULT_GIMBAL_GUARD: f64 = 1e-3;

/// Roll, pitch and yaw of the platform in radians.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct EulerTriad {
    pub roll: f64,
    pub pitch: f64,
    pub yaw: f64,
}

impl EulerTriad {
    pub fn new(roll: f64, pitch: f64, yaw: f64) -> Self {
        Self { roll, pitch, yaw }
    }

    pub fn from_vector(v: &Vec3) -> Self {
        Self::new(v[0], v[1], v[2])
    }

    pub fn to_vector(self) -> Vec3 {
        Vec3::new(self.roll, self.pitch, self.yaw)
    }
}

/// Body-to-inertial rotation for the 3-2-1 sequence.
pub fn rotation_matrix(theta: EulerTriad) -> Mat3 {
    let (sx, cx) = theta.roll.sin_cos();
    let (sy, cy) = theta.pitch.sin_cos();
    let (sz, cz) = theta.yaw.sin_cos();
    Mat3::new(
        cz * cy,
        cz * sy * sx - sz * cx,
        cz * sy * cx + sz * sx,
        sz * cy,
        sz * sy * sx + cz * cx,
        sz * sy * cx - cz * sx,
        -sy,
        cy * sx,
        cy * cx,
    )
}

/// Map from body angular rate to Euler-angle rates, `theta_dot = J * omega`.
pub fn euler_rate_map(theta: EulerTriad) -> Result<Mat3, FrameError> {
    euler_rate_map_guarded(theta, DEFAULT_GIMBAL_GUARD)
}

/// Same as [`euler_rate_map`] with an explicit distance from the singularity.
pub fn euler_rate_map_guarded(theta: EulerTriad, guard: f64) -> Result<Mat3, FrameError> {
    check_attitude(theta, guard)?;
    let (sx, cx) = theta.roll.sin_cos();
    let (sy, cy) = theta.pitch.sin_cos();
    let ty = sy / cy;
    Ok(Mat3::new(
        1.0,
        sx * ty,
        cx * ty,
        0.0,
        cx,
        -sx,
        0.0,
        sx / cy,
        cx / cy,
    ))
}

/// Errors when the pitch angle is within `guard` of +-pi/2.
pub fn check_attitude(theta: EulerTriad, guard: f64) -> Result<(), FrameError> {
    if !theta.pitch.is_finite() || theta.pitch.abs() >= std::f64::consts::FRAC_PI_2 - guard {
        return Err(FrameError::SingularAttitude {
            pitch: theta.pitch,
        });
    }
    Ok(())
}

/// Cross-product matrix: `skew(v) * w == v.cross(&w)`.
pub fn skew(v: &Vec3) -> Mat3 {
    Mat3::new(0.0, -v[2], v[1], v[2], 0.0, -v[0], -v[1], v[0], 0.0)
}

pub fn body_to_inertial(theta: EulerTriad, x: &Vec3) -> Vec3 {
    rotation_matrix(theta) * x
}

pub fn inertial_to_body(theta: EulerTriad, x: &Vec3) -> Vec3 {
    rotation_matrix(theta).transpose() * x
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn zero_rotation_is_identity() {
        assert_eq!(rotation_matrix(EulerTriad::default()), Mat3::identity());
    }

    #[test]
    fn quarter_yaw_maps_x_to_y() {
        let r = rotation_matrix(EulerTriad::new(0.0, 0.0, std::f64::consts::FRAC_PI_2));
        let e = r * Vec3::x();
        assert_relative_eq!(e, Vec3::y(), epsilon = 1e-15);
    }

    #[test]
    fn rotation_is_orthonormal() {
        let r = rotation_matrix(EulerTriad::new(0.1, 0.2, 0.3));
        let err = (r.transpose() * r - Mat3::identity()).abs().max();
        assert!(err < 1e-12);
        assert!((r.determinant() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn rate_map_identity_without_roll_and_pitch() {
        let j = euler_rate_map(EulerTriad::new(0.0, 0.0, 1.3)).unwrap();
        assert_eq!(j, Mat3::identity());
    }

    #[test]
    fn rate_map_rejects_gimbal_lock() {
        let near = std::f64::consts::FRAC_PI_2 - 5e-4;
        assert!(matches!(
            euler_rate_map(EulerTriad::new(0.0, near, 0.0)),
            Err(FrameError::SingularAttitude { .. })
        ));
    }

    #[test]
    fn skew_follows_right_hand_rule() {
        assert_eq!(skew(&Vec3::zeros()), Mat3::zeros());
        assert_eq!(skew(&Vec3::x()) * Vec3::y(), Vec3::z());
    }
}
