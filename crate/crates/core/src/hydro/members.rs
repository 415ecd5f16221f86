use crate::environment::WaveField;
use crate::error::HydroError;
use crate::frames::{Mat3, Vec3};
use crate::loads::{LoadSource, LoadWrench};
use crate::params::{CylinderSpec, TurbineParams};
use crate::state::StateVector;

/// Number of platform members.
pub const MEMBERS: usize = 7;

/// Smallest admissible vertical component of a member axis.
const MIN_AXIS_COSINE: f64 = 0.1;

/// How the wetted volume is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BuoyancyModel {
    /// Wetted lengths follow platform motion and the local wave elevation.
    #[default]
    Instantaneous,
    /// Wetted lengths stay at their rest drafts; buoyancy is a constant
    /// vertical force through a fixed body point.
    FrozenVolume,
}

/// Hydrostatic and hydrodynamic loads at one instant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HydroLoads {
    pub buoyancy: LoadWrench,
    pub hydrodynamic: LoadWrench,
    /// Wave elevation at each member's base center.
    pub eta: [f64; MEMBERS],
    pub lengths: [f64; MEMBERS],
    /// Set when a wetted length hit zero or the column top.
    pub clamped: bool,
}

/// The seven-cylinder platform with precomputed load coefficients.
#[derive(Debug, Clone)]
pub struct Platform {
    cylinders: Vec<CylinderSpec>,
    rho: f64,
    gravity: f64,
    swl: f64,
    quadrature_points: usize,
    buoyancy_model: BuoyancyModel,
    drag: [f64; MEMBERS],
    added: [f64; MEMBERS],
    heave_drag: [f64; MEMBERS],
    heave_added: [f64; MEMBERS],
}

impl Platform {
    pub fn new(params: &TurbineParams) -> Self {
        let rho = params.hydro.water_density;
        let cylinders = params.cylinders.clone();
        let mut drag = [0.0; MEMBERS];
        let mut added = [0.0; MEMBERS];
        let mut heave_drag = [0.0; MEMBERS];
        let mut heave_added = [0.0; MEMBERS];
        for (i, c) in cylinders.iter().enumerate() {
            drag[i] = 0.5 * rho * c.drag_coefficient * c.diameter;
            added[i] = c.added_mass_coefficient * rho * c.area();
            heave_drag[i] = 0.5 * rho * c.heave_drag_coefficient * c.area();
            heave_added[i] = c.heave_added_mass_coefficient * rho * c.heave_reference_volume();
        }
        Self {
            cylinders,
            rho,
            gravity: params.body.gravity,
            swl: params.still_water_level(),
            quadrature_points: params.hydro.quadrature_points,
            buoyancy_model: BuoyancyModel::Instantaneous,
            drag,
            added,
            heave_drag,
            heave_added,
        }
    }

    pub fn with_quadrature_points(mut self, n: usize) -> Self {
        self.quadrature_points = n.max(1);
        self
    }

    pub fn with_buoyancy_model(mut self, model: BuoyancyModel) -> Self {
        self.buoyancy_model = model;
        self
    }

    pub fn cylinders(&self) -> &[CylinderSpec] {
        &self.cylinders
    }

    pub fn quadrature_points(&self) -> usize {
        self.quadrature_points
    }

    pub fn buoyancy_model(&self) -> BuoyancyModel {
        self.buoyancy_model
    }

    /// Height of the still water level in the inertial frame.
    pub fn still_water_level(&self) -> f64 {
        self.swl
    }

    /// Inertial position of a platform-frame point.
    fn inertial_point(state: &StateVector, rot: &Mat3, p: &Vec3) -> Vec3 {
        state.r + rot * p
    }

    /// Wave elevation at each member's instantaneous base-center position.
    pub fn member_elevations(&self, state: &StateVector, waves: &WaveField, t: f64) -> [f64; MEMBERS] {
        let mut eta = [0.0; MEMBERS];
        if waves.is_calm() {
            return eta;
        }
        let rot = state.rotation();
        for (i, c) in self.cylinders.iter().enumerate() {
            let p = Self::inertial_point(state, &rot, &c.base_vec());
            eta[i] = waves.elevation(p[0], p[1], t);
        }
        eta
    }

    /// Wetted length of member `i` measured along its axis from the base,
    /// and whether it had to be clamped to the physical column.
    pub fn submerged_length(&self, i: usize, state: &StateVector, eta: f64) -> Result<(f64, bool), HydroError> {
        let c = &self.cylinders[i];
        if !c.role.is_floating() || self.buoyancy_model == BuoyancyModel::FrozenVolume {
            let l = if c.role.is_floating() { c.submerged_length } else { c.length };
            return Ok((l, false));
        }
        let rot = state.rotation();
        let cosine = rot[(2, 2)];
        if cosine < MIN_AXIS_COSINE {
            return Err(HydroError::DegenerateAttitude { member: i, cosine });
        }
        let base = c.base_vec();
        let heave_drop = base[2] - Self::inertial_point(state, &rot, &base)[2];
        let raw = (eta + c.submerged_length + heave_drop) / cosine;
        let clamped = raw.clamp(0.0, c.length);
        Ok((clamped, clamped != raw))
    }

    /// Buoyant force of the given wetted lengths, acting at the volume
    /// centroid of the member mid-points.
    pub fn buoyancy_wrench(&self, state: &StateVector, lengths: &[f64; MEMBERS]) -> LoadWrench {
        let mut volume = 0.0;
        let mut moment_arm = Vec3::zeros();
        for (c, l) in self.cylinders.iter().zip(lengths) {
            let v = c.area() * l;
            volume += v;
            moment_arm += v * (c.base_vec() + Vec3::new(0.0, 0.0, 0.5 * l));
        }
        if volume == 0.0 {
            return LoadWrench::zero(LoadSource::Buoyancy);
        }
        let centroid = moment_arm / volume;
        let rot = state.rotation();
        let force = rot.transpose() * Vec3::new(0.0, 0.0, self.rho * self.gravity * volume);
        LoadWrench::at_point(&centroid, force, LoadSource::Buoyancy)
    }

    /// Transverse Morison drag and wave inertia on member `i` over its wetted
    /// length. Structure-acceleration terms are carried by the added-mass
    /// matrix and excluded here.
    pub fn morison_transverse(
        &self,
        i: usize,
        state: &StateVector,
        length: f64,
        waves: &WaveField,
        t: f64,
    ) -> LoadWrench {
        self.morison_with_points(i, state, length, waves, t, self.quadrature_points)
    }

    pub fn morison_with_points(
        &self,
        i: usize,
        state: &StateVector,
        length: f64,
        waves: &WaveField,
        t: f64,
        points: usize,
    ) -> LoadWrench {
        let mut out = LoadWrench::zero(LoadSource::Hydrodynamic);
        if length <= 0.0 || points == 0 {
            return out;
        }
        let c = &self.cylinders[i];
        let rot = state.rotation();
        let rot_t = rot.transpose();
        let base = c.base_vec();
        let dz = length / points as f64;
        let inertia = self.added[i] + self.rho * c.area();
        for k in 0..points {
            let z = (k as f64 + 0.5) * dz;
            let ra = base + Vec3::new(0.0, 0.0, z);
            let (w_vel, w_acc) = if waves.is_calm() {
                (Vec3::zeros(), Vec3::zeros())
            } else {
                let p = Self::inertial_point(state, &rot, &ra);
                let kin = waves.kinematics(p[0], p[1], p[2] - self.swl, t);
                (rot_t * kin.vel, rot_t * kin.acc)
            };
            let rel = w_vel - (state.v + state.omega.cross(&ra));
            let rel_n = Vec3::new(rel[0], rel[1], 0.0);
            let acc_n = Vec3::new(w_acc[0], w_acc[1], 0.0);
            let df = (self.drag[i] * rel_n.norm() * rel_n + inertia * acc_n) * dz;
            out.force += df;
            out.moment += ra.cross(&df);
        }
        out
    }

    /// Axial drag, wave inertia and face pressures on base column `i`.
    pub fn heave_plate_loads(
        &self,
        i: usize,
        state: &StateVector,
        waves: &WaveField,
        t: f64,
    ) -> Result<LoadWrench, HydroError> {
        let c = &self.cylinders[i];
        if c.role.is_floating() || i < 3 {
            return Err(HydroError::RoleMismatch { member: i });
        }
        let above = &self.cylinders[i - 3];
        let rot = state.rotation();
        let rot_t = rot.transpose();
        let base = c.base_vec();
        let top = base + Vec3::new(0.0, 0.0, c.length);
        let center = base + Vec3::new(0.0, 0.0, 0.5 * c.length);
        let (w_vel, w_acc, p_bottom, p_top) = if waves.is_calm() {
            (Vec3::zeros(), Vec3::zeros(), 0.0, 0.0)
        } else {
            let pc = Self::inertial_point(state, &rot, &center);
            let kin = waves.kinematics(pc[0], pc[1], pc[2] - self.swl, t);
            let pb = Self::inertial_point(state, &rot, &base);
            let pt = Self::inertial_point(state, &rot, &top);
            (
                rot_t * kin.vel,
                rot_t * kin.acc,
                waves.dynamic_pressure(pb[0], pb[1], pb[2] - self.swl, t),
                waves.dynamic_pressure(pt[0], pt[1], pt[2] - self.swl, t),
            )
        };
        let rel = w_vel - (state.v + state.omega.cross(&center));
        let axial = rel[2];
        let pressure = c.area() * p_bottom - (c.area() - above.area()) * p_top;
        let fz = self.heave_drag[i] * axial.abs() * axial + self.heave_added[i] * w_acc[2] + pressure;
        Ok(LoadWrench::at_point(
            &center,
            Vec3::new(0.0, 0.0, fz),
            LoadSource::Hydrodynamic,
        ))
    }

    /// Sum of all transverse and heave-plate loads, in member order.
    pub fn total_hydro(
        &self,
        state: &StateVector,
        lengths: &[f64; MEMBERS],
        waves: &WaveField,
        t: f64,
    ) -> Result<LoadWrench, HydroError> {
        let mut total = LoadWrench::zero(LoadSource::Hydrodynamic);
        for (i, l) in lengths.iter().enumerate() {
            total += self.morison_transverse(i, state, *l, waves, t);
        }
        for (i, c) in self.cylinders.iter().enumerate() {
            if !c.role.is_floating() {
                total += self.heave_plate_loads(i, state, waves, t)?;
            }
        }
        Ok(total)
    }

    /// Buoyancy and hydrodynamic loads for the current state.
    pub fn loads(&self, state: &StateVector, waves: &WaveField, t: f64) -> Result<HydroLoads, HydroError> {
        let eta = self.member_elevations(state, waves, t);
        let mut lengths = [0.0; MEMBERS];
        let mut clamped = false;
        for (i, l) in lengths.iter_mut().enumerate() {
            let (len, hit) = self.submerged_length(i, state, eta[i])?;
            *l = len;
            clamped |= hit;
        }
        Ok(HydroLoads {
            buoyancy: self.buoyancy_wrench(state, &lengths),
            hydrodynamic: self.total_hydro(state, &lengths, waves, t)?,
            eta,
            lengths,
            clamped,
        })
    }

    /// Displaced volume at the rest drafts.
    pub fn rest_volume(&self) -> f64 {
        self.cylinders
            .iter()
            .map(|c| {
                let l = if c.role.is_floating() { c.submerged_length } else { c.length };
                c.area() * l
            })
            .sum()
    }

    /// Potential of the frozen-volume buoyancy force, zero at rest.
    pub fn frozen_buoyancy_potential(&self, state: &StateVector) -> f64 {
        let lengths = self.rest_lengths();
        let mut volume = 0.0;
        let mut arm = Vec3::zeros();
        for (c, l) in self.cylinders.iter().zip(&lengths) {
            let v = c.area() * l;
            volume += v;
            arm += v * (c.base_vec() + Vec3::new(0.0, 0.0, 0.5 * l));
        }
        let centroid = arm / volume;
        let z = state.r[2] + (state.rotation() * centroid)[2];
        -self.rho * self.gravity * volume * z
    }

    pub fn rest_lengths(&self) -> [f64; MEMBERS] {
        let mut out = [0.0; MEMBERS];
        for (o, c) in out.iter_mut().zip(&self.cylinders) {
            *o = if c.role.is_floating() { c.submerged_length } else { c.length };
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn platform() -> Platform {
        Platform::new(&TurbineParams::reference())
    }

    #[test]
    fn upright_length_equals_draft() {
        let p = platform();
        let s = StateVector::default();
        assert_eq!(p.submerged_length(0, &s, 0.0).unwrap(), (20.0, false));
        assert_eq!(p.submerged_length(0, &s, 1.0).unwrap(), (21.0, false));
    }

    #[test]
    fn base_columns_are_always_full() {
        let p = platform();
        let mut s = StateVector::default();
        s.r[2] = 3.0;
        assert_eq!(p.submerged_length(5, &s, 2.0).unwrap(), (6.0, false));
    }

    #[test]
    fn heave_plate_rejects_floating_member() {
        let p = platform();
        let calm = WaveField::calm(9.81, 1025.0);
        assert_eq!(
            p.heave_plate_loads(1, &StateVector::default(), &calm, 0.0),
            Err(HydroError::RoleMismatch { member: 1 })
        );
    }

    #[test]
    fn still_water_at_rest_has_no_hydrodynamic_load() {
        let p = platform();
        let calm = WaveField::calm(9.81, 1025.0);
        let loads = p.loads(&StateVector::default(), &calm, 0.0).unwrap();
        assert_eq!(loads.hydrodynamic.force, Vec3::zeros());
        assert_eq!(loads.hydrodynamic.moment, Vec3::zeros());
    }
}
