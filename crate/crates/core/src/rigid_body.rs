//! Structural mass, added mass, Coriolis/gyroscopic and gravity terms of the
//! seven-DOF equations of motion.
//!
//! Generalized velocities are ordered `[v (3), omega (3), rotor speed]`, all
//! in the platform frame. The 7x7 block `M_s` couples them; the full 13x13
//! left-hand matrix prepends an identity for the kinematic rows.

use nalgebra::{Cholesky, Matrix6, SMatrix, SVector, U7};

use crate::error::ParamError;
use crate::frames::{skew, Vec3};
use crate::params::{BodyProperties, CylinderSpec};
use crate::state::StateVector;

pub type Matrix7 = SMatrix<f64, 7, 7>;
pub type Vector7 = SVector<f64, 7>;
pub type Matrix13 = SMatrix<f64, 13, 13>;
pub type Vector13 = SVector<f64, 13>;

/// Lumped inertia coefficients `a1..a7`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct InertiaCoefficients {
    /// Total mass.
    pub a1: f64,
    /// Vertical first moment of the tower, nacelle and rotor.
    pub a2: f64,
    /// Longitudinal first moment of nacelle and rotor.
    pub a3: f64,
    pub a4: f64,
    pub a5: f64,
    pub a6: f64,
    pub a7: f64,
}

impl InertiaCoefficients {
    pub fn from_properties(p: &BodyProperties) -> Self {
        let (hr, ht) = (p.hub_height, p.tower_cm_height);
        let (hnc, hro) = (p.nacelle_offset, p.rotor_overhang);
        let (mt, mnc, mr) = (p.tower_mass, p.nacelle_mass, p.rotor_mass);
        let [ipx, ipy, ipz] = p.platform_inertia;
        let [itx, ity, itz] = p.tower_inertia;
        let [inx, iny, inz] = p.nacelle_inertia;
        let [irx, iry, irz] = p.rotor_inertia;
        Self {
            a1: p.total_mass(),
            a2: hr * (mr + mnc) + mt * ht,
            a3: hnc * mnc - hro * mr,
            a4: ipx + itx + inx + irx + hr * hr * (mr + mnc) + ht * ht * mt,
            a5: ipy
                + ity
                + iny
                + iry
                + mr * (hr * hr + hro * hro)
                + mnc * (hr * hr + hnc * hnc)
                + ht * ht * mt,
            a6: hr * hro * mr - hr * hnc * mnc,
            a7: ipz + itz + inz + irz + mr * hro * hro + mnc * hnc * hnc,
        }
    }

    /// First moment of mass about the platform origin, `(a3, 0, a2)`.
    pub fn first_moment(&self) -> Vec3 {
        Vec3::new(self.a3, 0.0, self.a2)
    }

    /// 6x6 rigid-body block for the platform velocities.
    pub fn m_s1(&self) -> Matrix6<f64> {
        let mut m = Matrix6::zeros();
        m[(0, 0)] = self.a1;
        m[(1, 1)] = self.a1;
        m[(2, 2)] = self.a1;
        m[(3, 3)] = self.a4;
        m[(4, 4)] = self.a5;
        m[(5, 5)] = self.a7;
        let off = [
            (0, 4, self.a2),
            (1, 3, -self.a2),
            (1, 5, self.a3),
            (2, 4, -self.a3),
            (3, 5, self.a6),
        ];
        for (i, j, v) in off {
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
        m
    }
}

/// Structural 7x7 matrix: the rigid-body block bordered by the rotor inertia
/// about the shaft.
pub fn structural_mass_matrix(props: &BodyProperties) -> Result<(InertiaCoefficients, Matrix7), ParamError> {
    props.validate()?;
    let a = InertiaCoefficients::from_properties(props);
    let irx = props.rotor_inertia[0];
    let mut m = Matrix7::zeros();
    m.fixed_view_mut::<6, 6>(0, 0).copy_from(&a.m_s1());
    m[(3, 6)] = irx;
    m[(6, 3)] = irx;
    m[(6, 6)] = irx;
    Ok((a, m))
}

/// Added-mass matrix with member lengths frozen at their rest drafts.
///
/// Transverse strips contribute `C_A = Ca rho A` per unit length, heave plates
/// `C_Az = Caz rho V_R` with `V_R` the entrained hemisphere volume.
pub fn added_mass_matrix(cylinders: &[CylinderSpec], rho_w: f64) -> Result<Matrix6<f64>, ParamError> {
    if !(rho_w > 0.0) {
        return Err(ParamError::InvalidParameters("water density must be positive".into()));
    }
    let (mut b11, mut b15, mut b33, mut b44, mut b66) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for c in cylinders {
        if c.added_mass_coefficient < 0.0 || c.heave_added_mass_coefficient < 0.0 {
            return Err(ParamError::InvalidParameters(
                "added-mass coefficients must be non-negative".into(),
            ));
        }
        let ca = c.added_mass_coefficient * rho_w * c.area();
        let l = c.submerged_length;
        let [x, y, z] = c.base;
        b11 += ca * l;
        b15 += ca * (l * l / 2.0 + l * z);
        b44 += ca * (l * l * l / 3.0 + l * l * z + l * z * z);
        b66 += ca * l * (x * x + y * y);
        if !c.role.is_floating() {
            let caz = c.heave_added_mass_coefficient * rho_w * c.heave_reference_volume();
            b33 += caz;
            // Roll and pitch share one entry; the lever arms agree for a
            // three-fold symmetric layout.
            b44 += caz * x * x;
        }
    }
    let mut m = Matrix6::zeros();
    m[(0, 0)] = b11;
    m[(1, 1)] = b11;
    m[(2, 2)] = b33;
    m[(3, 3)] = b44;
    m[(4, 4)] = b44;
    m[(5, 5)] = b66;
    m[(0, 4)] = b15;
    m[(4, 0)] = b15;
    m[(1, 3)] = -b15;
    m[(3, 1)] = -b15;
    Ok(m)
}

/// Assembled left-hand matrices with a reusable factorization.
#[derive(Debug, Clone)]
pub struct SystemMatrices {
    pub coefficients: InertiaCoefficients,
    /// Signed first moment of nacelle and rotor along the shaft (kg m).
    pub m_d: f64,
    pub rotor_inertia_x: f64,
    pub m_s: Matrix7,
    pub m_a: Matrix6<f64>,
    pub m_bar_s: Matrix7,
    factor: Cholesky<f64, U7>,
}

impl SystemMatrices {
    pub fn assemble(
        props: &BodyProperties,
        cylinders: &[CylinderSpec],
        rho_w: f64,
    ) -> Result<Self, ParamError> {
        let (a, m_s) = structural_mass_matrix(props)?;
        let m_a = added_mass_matrix(cylinders, rho_w)?;
        Self::from_blocks(a, props.rotor_inertia[0], m_s, m_a)
    }

    pub fn from_blocks(
        coefficients: InertiaCoefficients,
        rotor_inertia_x: f64,
        m_s: Matrix7,
        m_a: Matrix6<f64>,
    ) -> Result<Self, ParamError> {
        let mut m_bar_s = m_s;
        let mut block = m_bar_s.fixed_view_mut::<6, 6>(0, 0);
        block += m_a;
        let factor = Cholesky::new(m_bar_s).ok_or(ParamError::NotPositiveDefinite)?;
        Ok(Self {
            coefficients,
            m_d: coefficients.a3,
            rotor_inertia_x,
            m_s,
            m_a,
            m_bar_s,
            factor,
        })
    }

    /// Solves `M_bar_s x = rhs`.
    pub fn solve(&self, rhs: &Vector7) -> Vector7 {
        self.factor.solve(rhs)
    }

    /// Full 13x13 left-hand matrix.
    pub fn m_bar(&self) -> Matrix13 {
        let mut m = Matrix13::zeros();
        m.fixed_view_mut::<6, 6>(0, 0).fill_with_identity();
        m.fixed_view_mut::<7, 7>(6, 6).copy_from(&self.m_bar_s);
        m
    }

    /// Solves `M_bar x = rhs` for the full 13-vector.
    pub fn solve_full(&self, rhs: &Vector13) -> Vector13 {
        let mut out = *rhs;
        let tail = self.solve(&rhs.fixed_rows::<7>(6).into_owned());
        out.fixed_rows_mut::<7>(6).copy_from(&tail);
        out
    }

    /// Diagonal of the Cholesky factor.
    pub fn pivots(&self) -> Vector7 {
        self.factor.l().diagonal()
    }

    /// Gyroscopic/Coriolis plus gravity column; rows 1-6 are zero.
    pub fn coriolis_and_gravity(&self, state: &StateVector, gravity: f64) -> Vector13 {
        let mut s = Vector13::zeros();
        let tail = self.coriolis(state) + self.gravity(state, gravity);
        s.fixed_rows_mut::<7>(6).copy_from(&tail);
        s
    }

    /// `-C_s nu` for the generalized velocity `nu = [v, omega, rotor speed]`.
    pub fn coriolis(&self, state: &StateVector) -> Vector7 {
        let v = state.v;
        let w = state.omega;
        let nu6 = nalgebra::Vector6::new(v[0], v[1], v[2], w[0], w[1], w[2]);
        let p = self.coefficients.m_s1() * nu6;
        let lin = Vec3::new(p[0], p[1], p[2]);
        let ang = Vec3::new(p[3], p[4], p[5]);
        let wt = skew(&w);
        let top = wt * lin;
        let bottom = skew(&v) * lin + wt * ang;
        let irx = self.rotor_inertia_x;
        let spin = state.rotor_speed;
        Vector7::from_column_slice(&[
            -top[0],
            -top[1],
            -top[2],
            -bottom[0],
            -bottom[1] - irx * w[2] * spin,
            -bottom[2] + irx * w[1] * spin,
            0.0,
        ])
    }

    /// Weight of all components resolved in the platform frame, with its
    /// moment about the platform origin.
    pub fn gravity(&self, state: &StateVector, g: f64) -> Vector7 {
        let a = &self.coefficients;
        let (sx, cx) = state.theta.roll.sin_cos();
        let (sy, cy) = state.theta.pitch.sin_cos();
        let md = self.m_d;
        g * Vector7::from_column_slice(&[
            a.a1 * sy,
            -a.a1 * cy * sx,
            -a.a1 * cx * cy,
            cy * sx * a.a2,
            sy * a.a2 + cx * cy * md,
            -sx * cy * md,
            0.0,
        ])
    }

    /// Generalized momentum `M_bar_s nu`.
    pub fn momentum(&self, state: &StateVector) -> Vector7 {
        self.m_bar_s * state.generalized_velocity()
    }

    /// Kinetic energy including added mass, `0.5 nu' M_bar_s nu`.
    pub fn kinetic_energy(&self, state: &StateVector) -> f64 {
        let nu = state.generalized_velocity();
        0.5 * nu.dot(&(self.m_bar_s * nu))
    }

    /// Gravitational potential energy relative to the rest position.
    pub fn gravity_potential(&self, state: &StateVector, g: f64) -> f64 {
        let r = state.rotation();
        let cm = r * self.coefficients.first_moment();
        g * (self.coefficients.a1 * state.r[2] + cm[2])
    }
}

/// Rotor and platform-pitch input gains of the reduced rotor-speed dynamics.
///
/// Returns `(b1, b2)`; both are positive for a physically sensible platform.
pub fn control_input_gains(props: &BodyProperties, mats: &SystemMatrices) -> (f64, f64) {
    let a = &mats.coefficients;
    let ma = &mats.m_a;
    let h1 = a.a1 + ma[(2, 2)];
    let h2 = a.a2 + ma[(0, 4)];
    let h3 = a.a1 + ma[(0, 0)];
    let h4 = a.a3;
    let h5 = a.a5 + ma[(4, 4)];
    let b1 = 1.0 / props.rotor_inertia[0];
    let b2 = h1 * (h2 - props.hub_height * h3) / (h1 * h2 * h2 + h3 * h4 * h4 - h5 * h3 * h1);
    (b1, b2)
}
