//! Physical parameter set of the turbine, platform, mooring and rotor.
//!
//! Parameters are read from a TOML file; see `params/nrel5mw_oc4.toml` for the
//! shipped reference set. Unknown keys are rejected.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::ParamError;
use crate::frames::Vec3;

/// Masses, inertias and geometric offsets of the four rigid components.
///
/// Heights are measured upward from the platform mass center. The nacelle
/// mass center sits `nacelle_offset` downwind of the tower axis and the rotor
/// `rotor_overhang` upwind of it, both at `hub_height`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BodyProperties {
    pub platform_mass: f64,
    pub tower_mass: f64,
    pub nacelle_mass: f64,
    pub rotor_mass: f64,
    pub platform_inertia: [f64; 3],
    pub tower_inertia: [f64; 3],
    pub nacelle_inertia: [f64; 3],
    pub rotor_inertia: [f64; 3],
    pub tower_cm_height: f64,
    pub hub_height: f64,
    pub nacelle_offset: f64,
    pub rotor_overhang: f64,
    pub gravity: f64,
}

impl BodyProperties {
    pub fn total_mass(&self) -> f64 {
        self.platform_mass + self.tower_mass + self.nacelle_mass + self.rotor_mass
    }

    /// Hub position in the platform frame.
    pub fn hub_position(&self) -> Vec3 {
        Vec3::new(-self.rotor_overhang, 0.0, self.hub_height)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        let positive = [
            ("platform_mass", self.platform_mass),
            ("tower_mass", self.tower_mass),
            ("nacelle_mass", self.nacelle_mass),
            ("rotor_mass", self.rotor_mass),
            ("gravity", self.gravity),
        ];
        for (name, value) in positive {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamError::InvalidParameters(format!(
                    "{name} must be positive, got {value}"
                )));
            }
        }
        let inertias = [
            ("platform_inertia", self.platform_inertia),
            ("tower_inertia", self.tower_inertia),
            ("nacelle_inertia", self.nacelle_inertia),
            ("rotor_inertia", self.rotor_inertia),
        ];
        for (name, values) in inertias {
            if values.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
                return Err(ParamError::InvalidParameters(format!(
                    "{name} entries must be positive, got {values:?}"
                )));
            }
        }
        let offsets = [
            self.tower_cm_height,
            self.hub_height,
            self.nacelle_offset,
            self.rotor_overhang,
        ];
        if offsets.iter().any(|v| !v.is_finite()) {
            return Err(ParamError::InvalidParameters(
                "geometric offsets must be finite".into(),
            ));
        }
        if self.hub_height <= self.tower_cm_height {
            return Err(ParamError::InvalidParameters(format!(
                "hub_height ({}) must exceed tower_cm_height ({})",
                self.hub_height, self.tower_cm_height
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CylinderRole {
    MainColumn,
    UpperColumn,
    BaseColumn,
}

impl CylinderRole {
    pub fn is_floating(self) -> bool {
        !matches!(self, CylinderRole::BaseColumn)
    }
}

/// One vertical cylinder of the platform. `base` is the center of its bottom
/// face in the platform frame; `submerged_length` is the draft at rest.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CylinderSpec {
    pub role: CylinderRole,
    pub base: [f64; 3],
    pub submerged_length: f64,
    pub length: f64,
    pub diameter: f64,
    pub drag_coefficient: f64,
    pub added_mass_coefficient: f64,
    #[serde(default)]
    pub heave_drag_coefficient: f64,
    #[serde(default)]
    pub heave_added_mass_coefficient: f64,
}

impl CylinderSpec {
    pub fn base_vec(&self) -> Vec3 {
        Vec3::from(self.base)
    }

    pub fn area(&self) -> f64 {
        std::f64::consts::PI * self.diameter * self.diameter / 4.0
    }

    /// Volume of the hemisphere of fluid entrained by a heave plate.
    pub fn heave_reference_volume(&self) -> f64 {
        let r = 0.5 * self.diameter;
        2.0 / 3.0 * std::f64::consts::PI * r * r * r
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HydroSettings {
    pub water_density: f64,
    #[serde(default = "default_quadrature_points")]
    pub quadrature_points: usize,
}

fn default_quadrature_points() -> usize {
    32
}

/// Linearized mooring about the undisplaced platform position.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MooringConfig {
    pub stiffness: [[f64; 6]; 6],
    pub damping: [[f64; 6]; 6],
    /// Inertial wrench applied by the lines at the undisplaced position.
    pub pretension: [f64; 6],
    /// Fairlead positions in the platform frame.
    pub fairleads: [[f64; 3]; 3],
    /// Anchor positions in the inertial frame.
    pub anchors: [[f64; 3]; 3],
    /// Declination of the line tangent below horizontal at the fairlead.
    pub fairlead_declination_deg: f64,
    /// Submerged weight per unit length of the lines.
    pub line_weight: f64,
}

/// Constants of the analytic rotor coefficient surface.
///
/// `Cp = peak_cp * s^p * exp(p (1 - s)) * exp(-a b - q b^2)` with
/// `s = lambda / peak_tip_speed_ratio`, `p = shape_exponent` and pitch `b` in
/// degrees. Thrust follows from actuator-disc momentum theory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SurrogateCoefficients {
    pub peak_cp: f64,
    pub peak_tip_speed_ratio: f64,
    pub shape_exponent: f64,
    pub pitch_linear_per_deg: f64,
    pub pitch_quadratic_per_deg2: f64,
}

/// Breakpoints used when tabulating the surrogate.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TableGrid {
    pub lambda_min: f64,
    pub lambda_max: f64,
    pub lambda_step: f64,
    pub beta_max_deg: f64,
    pub beta_step_deg: f64,
}

impl Default for TableGrid {
    fn default() -> Self {
        Self {
            lambda_min: 0.5,
            lambda_max: 16.0,
            lambda_step: 0.1,
            beta_max_deg: 90.0,
            beta_step_deg: 0.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AeroSettings {
    pub surrogate: SurrogateCoefficients,
    #[serde(default)]
    pub grid: TableGrid,
    /// Optional coefficient table replacing the surrogate, relative to the
    /// parameter file.
    #[serde(default)]
    pub table_file: Option<PathBuf>,
}

/// Rotor geometry, air density and the generator torque law.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotorSpec {
    pub radius: f64,
    pub air_density: f64,
    pub rated_speed: f64,
    pub rated_torque: f64,
    pub rated_power: f64,
    /// Below this rotor speed the generator applies no torque.
    pub cut_in_speed: f64,
    /// Torque ramps linearly from zero at cut-in to rated at this speed.
    pub ramp_end_speed: f64,
}

impl RotorSpec {
    pub fn validate(&self) -> Result<(), ParamError> {
        let fields = [
            ("radius", self.radius),
            ("air_density", self.air_density),
            ("rated_speed", self.rated_speed),
            ("rated_torque", self.rated_torque),
            ("rated_power", self.rated_power),
            ("cut_in_speed", self.cut_in_speed),
            ("ramp_end_speed", self.ramp_end_speed),
        ];
        for (name, value) in fields {
            if !(value > 0.0 && value.is_finite()) {
                return Err(ParamError::InvalidParameters(format!(
                    "rotor {name} must be positive, got {value}"
                )));
            }
        }
        if self.ramp_end_speed <= self.cut_in_speed {
            return Err(ParamError::InvalidParameters(
                "ramp_end_speed must exceed cut_in_speed".into(),
            ));
        }
        Ok(())
    }
}

/// Complete parameter file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TurbineParams {
    pub body: BodyProperties,
    #[serde(rename = "cylinder")]
    pub cylinders: Vec<CylinderSpec>,
    pub hydro: HydroSettings,
    pub mooring: MooringConfig,
    pub rotor: RotorSpec,
    pub aero: AeroSettings,
}

/// Shipped reference parameters, compiled into the library.
pub const REFERENCE_PARAMS_TOML: &str = include_str!("../../../params/nrel5mw_oc4.toml");

impl TurbineParams {
    pub fn reference() -> Self {
        Self::from_toml_str(REFERENCE_PARAMS_TOML, Path::new("params/nrel5mw_oc4.toml"))
            .expect("shipped reference parameters are valid")
    }

    pub fn from_file(path: &Path) -> Result<Self, ParamError> {
        let text = fs::read_to_string(path).map_err(|source| ParamError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        let mut params = Self::from_toml_str(&text, path)?;
        if let Some(table) = &params.aero.table_file {
            if table.is_relative() {
                let dir = path.parent().unwrap_or_else(|| Path::new("."));
                params.aero.table_file = Some(dir.join(table));
            }
        }
        Ok(params)
    }

    pub fn from_toml_str(text: &str, origin: &Path) -> Result<Self, ParamError> {
        let params: TurbineParams = toml::from_str(text).map_err(|e| ParamError::Parse {
            path: origin.to_path_buf(),
            message: e.to_string(),
        })?;
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<(), ParamError> {
        self.body.validate()?;
        self.rotor.validate()?;
        if self.cylinders.len() != 7 {
            return Err(ParamError::InvalidParameters(format!(
                "expected 7 cylinders, found {}",
                self.cylinders.len()
            )));
        }
        for (i, c) in self.cylinders.iter().enumerate() {
            let floating = i < 4;
            if c.role.is_floating() != floating {
                return Err(ParamError::InvalidParameters(format!(
                    "cylinder {} must be {}",
                    i + 1,
                    if floating { "a floating column" } else { "a base column" }
                )));
            }
            if !(c.diameter > 0.0 && c.submerged_length > 0.0 && c.length > 0.0) {
                return Err(ParamError::InvalidParameters(format!(
                    "cylinder {} needs positive diameter and lengths",
                    i + 1
                )));
            }
            if c.submerged_length > c.length {
                return Err(ParamError::InvalidParameters(format!(
                    "cylinder {} is deeper than it is long",
                    i + 1
                )));
            }
            let coefficients = [
                c.drag_coefficient,
                c.added_mass_coefficient,
                c.heave_drag_coefficient,
                c.heave_added_mass_coefficient,
            ];
            if coefficients.iter().any(|v| *v < 0.0 || !v.is_finite()) {
                return Err(ParamError::InvalidParameters(format!(
                    "cylinder {} has a negative hydrodynamic coefficient",
                    i + 1
                )));
            }
        }
        for pair in 4..7 {
            if self.cylinders[pair].diameter < self.cylinders[pair - 3].diameter {
                return Err(ParamError::InvalidParameters(format!(
                    "base column {} is narrower than the column above it",
                    pair + 1
                )));
            }
        }
        let swl = self.still_water_level();
        for (i, c) in self.cylinders.iter().enumerate().take(4) {
            let level = c.base[2] + c.submerged_length;
            if (level - swl).abs() > 1e-6 {
                return Err(ParamError::InvalidParameters(format!(
                    "cylinder {} puts the waterline at {level} m, expected {swl} m",
                    i + 1
                )));
            }
        }
        if !(self.hydro.water_density > 0.0) {
            return Err(ParamError::InvalidParameters(
                "water_density must be positive".into(),
            ));
        }
        if self.hydro.quadrature_points < 8 {
            return Err(ParamError::InvalidParameters(
                "quadrature_points must be at least 8".into(),
            ));
        }
        let k = &self.mooring.stiffness;
        for i in 0..6 {
            for j in 0..6 {
                if (k[i][j] - k[j][i]).abs() > 1e-9 * (1.0 + k[i][j].abs()) {
                    return Err(ParamError::InvalidParameters(
                        "mooring stiffness must be symmetric".into(),
                    ));
                }
            }
        }
        let stiffness = nalgebra::Matrix6::from_fn(|i, j| k[i][j]);
        let min_eig = stiffness.symmetric_eigen().eigenvalues.min();
        if min_eig < -1e-9 * stiffness.abs().max() {
            return Err(ParamError::InvalidParameters(
                "mooring stiffness must be positive semidefinite".into(),
            ));
        }
        let s = &self.aero.surrogate;
        if !(s.peak_cp > 0.0 && s.peak_cp <= 16.0 / 27.0) {
            return Err(ParamError::InvalidParameters(
                "surrogate peak_cp must lie in (0, 16/27]".into(),
            ));
        }
        if !(s.peak_tip_speed_ratio > 0.0 && s.shape_exponent > 0.0) {
            return Err(ParamError::InvalidParameters(
                "surrogate tip-speed ratio and exponent must be positive".into(),
            ));
        }
        if s.pitch_linear_per_deg < 0.0 || s.pitch_quadratic_per_deg2 < 0.0 {
            return Err(ParamError::InvalidParameters(
                "surrogate pitch coefficients must be non-negative".into(),
            ));
        }
        Ok(())
    }

    /// Height of the still water level above the platform mass center.
    pub fn still_water_level(&self) -> f64 {
        let c = &self.cylinders[0];
        c.base[2] + c.submerged_length
    }
}
