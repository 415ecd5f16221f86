use serde::{Deserialize, Serialize};

use crate::error::EnvironmentError;
use crate::frames::Vec3;

/// Regular wave description. The amplitude is half the wave height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WaveSpec {
    pub height: f64,
    pub period: f64,
    /// Propagation heading from the inertial x axis (rad).
    #[serde(default)]
    pub heading: f64,
    #[serde(default)]
    pub phase: f64,
    /// Finite water depth; deep water when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub water_depth: Option<f64>,
}

impl WaveSpec {
    pub fn calm() -> Self {
        Self {
            height: 0.0,
            period: 10.0,
            heading: 0.0,
            phase: 0.0,
            water_depth: None,
        }
    }

    pub fn validate(&self) -> Result<(), EnvironmentError> {
        if !(self.height >= 0.0 && self.height.is_finite()) {
            return Err(EnvironmentError::InvalidWave("height must be non-negative".into()));
        }
        if !(self.period > 0.0 && self.period.is_finite()) {
            return Err(EnvironmentError::InvalidWave("period must be positive".into()));
        }
        if let Some(d) = self.water_depth {
            if !(d > 0.0 && d.is_finite()) {
                return Err(EnvironmentError::InvalidWave("water depth must be positive".into()));
            }
        }
        Ok(())
    }
}

/// Solves `omega^2 = g k tanh(k h)` for the wavenumber; deep water when
/// `depth` is `None`.
pub fn solve_wavenumber(omega: f64, gravity: f64, depth: Option<f64>) -> f64 {
    let deep = omega * omega / gravity;
    let Some(h) = depth else {
        return deep;
    };
    // Newton from the larger of the deep- and shallow-water estimates.
    let mut k = deep.max(omega / (gravity * h).sqrt());
    for _ in 0..100 {
        let th = (k * h).tanh();
        let f = gravity * k * th - omega * omega;
        let df = gravity * th + gravity * k * h * (1.0 - th * th);
        let step = f / df;
        k -= step;
        if step.abs() <= 1e-15 * k {
            break;
        }
    }
    k
}

/// Particle velocity, acceleration and dynamic pressure at a point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct WaterKinematics {
    pub eta: f64,
    pub vel: Vec3,
    pub acc: Vec3,
    pub p_dyn: f64,
}

/// Evaluator for a regular Airy wave; coordinates are relative to the still
/// water level with z up.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveField {
    amplitude: f64,
    omega: f64,
    k: f64,
    cos_h: f64,
    sin_h: f64,
    phase: f64,
    depth: Option<f64>,
    rho_g: f64,
}

impl WaveField {
    pub fn new(spec: &WaveSpec, gravity: f64, water_density: f64) -> Result<Self, EnvironmentError> {
        spec.validate()?;
        let omega = 2.0 * std::f64::consts::PI / spec.period;
        let k = solve_wavenumber(omega, gravity, spec.water_depth);
        // Past kh = 20 the hyperbolic profile equals the exponential to
        // machine precision and would overflow.
        let depth = spec.water_depth.filter(|h| k * h < 20.0);
        Ok(Self {
            amplitude: 0.5 * spec.height,
            omega,
            k,
            cos_h: spec.heading.cos(),
            sin_h: spec.heading.sin(),
            phase: spec.phase,
            depth,
            rho_g: water_density * gravity,
        })
    }

    pub fn calm(gravity: f64, water_density: f64) -> Self {
        Self::new(&WaveSpec::calm(), gravity, water_density).expect("calm sea is valid")
    }

    pub fn amplitude(&self) -> f64 {
        self.amplitude
    }

    pub fn wavenumber(&self) -> f64 {
        self.k
    }

    pub fn angular_frequency(&self) -> f64 {
        self.omega
    }

    pub fn is_calm(&self) -> bool {
        self.amplitude == 0.0
    }

    fn argument(&self, x: f64, y: f64, t: f64) -> f64 {
        self.k * (x * self.cos_h + y * self.sin_h) - self.omega * t + self.phase
    }

    pub fn elevation(&self, x: f64, y: f64, t: f64) -> f64 {
        if self.is_calm() {
            return 0.0;
        }
        self.amplitude * self.argument(x, y, t).cos()
    }

    /// Depth profiles `(horizontal, vertical, pressure)` at elevation `z`;
    /// points above the still water level use the surface values.
    fn profiles(&self, z: f64) -> (f64, f64, f64) {
        let z = z.min(0.0);
        match self.depth {
            None => {
                let e = (self.k * z).exp();
                (e, e, e)
            }
            Some(h) => {
                let kh = self.k * h;
                let s = kh.sinh();
                let zz = self.k * (z + h).max(0.0);
                (zz.cosh() / s, zz.sinh() / s, zz.cosh() / kh.cosh())
            }
        }
    }

    pub fn kinematics(&self, x: f64, y: f64, z: f64, t: f64) -> WaterKinematics {
        if self.is_calm() {
            return WaterKinematics::default();
        }
        let (s, c) = self.argument(x, y, t).sin_cos();
        let (fh, fv, fp) = self.profiles(z);
        let aw = self.amplitude * self.omega;
        let aw2 = aw * self.omega;
        let u = aw * fh * c;
        let du = aw2 * fh * s;
        WaterKinematics {
            eta: self.amplitude * c,
            vel: Vec3::new(u * self.cos_h, u * self.sin_h, aw * fv * s),
            acc: Vec3::new(du * self.cos_h, du * self.sin_h, -aw2 * fv * c),
            p_dyn: self.rho_g * self.amplitude * fp * c,
        }
    }

    /// Dynamic pressure only, for heave-plate faces.
    pub fn dynamic_pressure(&self, x: f64, y: f64, z: f64, t: f64) -> f64 {
        if self.is_calm() {
            return 0.0;
        }
        let (_, _, fp) = self.profiles(z);
        self.rho_g * self.amplitude * fp * self.argument(x, y, t).cos()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn spec(height: f64) -> WaveSpec {
        WaveSpec {
            height,
            period: 10.0,
            heading: 0.0,
            phase: 0.0,
            water_depth: None,
        }
    }

    #[test]
    fn calm_sea_is_still() {
        let w = WaveField::new(&spec(0.0), 9.81, 1025.0).unwrap();
        assert_eq!(w.elevation(3.0, 4.0, 12.0), 0.0);
        assert_eq!(w.kinematics(3.0, 4.0, -5.0, 12.0), WaterKinematics::default());
    }

    #[test]
    fn crest_at_origin() {
        let w = WaveField::new(&spec(3.0), 9.81, 1025.0).unwrap();
        assert_eq!(w.elevation(0.0, 0.0, 0.0), 1.5);
    }

    #[test]
    fn deep_water_wavenumber() {
        let omega = 2.0 * std::f64::consts::PI / 10.0;
        let k = solve_wavenumber(omega, 9.81, None);
        assert!((k - 0.040_24).abs() < 5e-6);
    }

    #[test]
    fn surface_speed_under_crest() {
        let w = WaveField::new(&spec(3.0), 9.81, 1025.0).unwrap();
        let kin = w.kinematics(0.0, 0.0, 0.0, 0.0);
        let expected = 1.5 * 2.0 * std::f64::consts::PI / 10.0;
        assert!((kin.vel[0] - expected).abs() < 1e-12);
    }

    #[test]
    fn rejects_negative_height() {
        assert!(WaveField::new(&spec(-1.0), 9.81, 1025.0).is_err());
    }
}
