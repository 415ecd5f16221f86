//! Force/moment pairs in the platform frame.

use std::ops::{Add, AddAssign};

use crate::frames::{Mat3, Vec3};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum LoadSource {
    Buoyancy,
    Hydrodynamic,
    Aerodynamic,
    Mooring,
    #[default]
    Combined,
}

/// Force and moment about the platform origin, platform-frame components.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct LoadWrench {
    pub force: Vec3,
    pub moment: Vec3,
    pub source: LoadSource,
}

impl LoadWrench {
    pub fn zero(source: LoadSource) -> Self {
        Self {
            force: Vec3::zeros(),
            moment: Vec3::zeros(),
            source,
        }
    }

    pub fn new(force: Vec3, moment: Vec3, source: LoadSource) -> Self {
        Self { force, moment, source }
    }

    /// Force applied at `point` (platform frame).
    pub fn at_point(point: &Vec3, force: Vec3, source: LoadSource) -> Self {
        Self::new(force, point.cross(&force), source)
    }

    /// Same wrench with components rotated by `r`.
    pub fn rotated(&self, r: &Mat3) -> Self {
        Self::new(r * self.force, r * self.moment, self.source)
    }

    pub fn as_array(&self) -> [f64; 6] {
        [
            self.force[0],
            self.force[1],
            self.force[2],
            self.moment[0],
            self.moment[1],
            self.moment[2],
        ]
    }
}

impl Add for LoadWrench {
    type Output = LoadWrench;

    fn add(self, rhs: LoadWrench) -> LoadWrench {
        let source = if self.source == rhs.source {
            self.source
        } else {
            LoadSource::Combined
        };
        LoadWrench::new(self.force + rhs.force, self.moment + rhs.moment, source)
    }
}

impl AddAssign for LoadWrench {
    fn add_assign(&mut self, rhs: LoadWrench) {
        *self = *self + rhs;
    }
}
