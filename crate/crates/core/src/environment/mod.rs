//! Wind and wave inputs.
//!
//! Waves are regular Airy waves; wind is a hub-height velocity that is
//! constant, interpolated from a file, or synthesized from a Kaimal spectrum.

mod wave;
mod wind;

pub use wave::{solve_wavenumber, WaterKinematics, WaveField, WaveSpec};
pub use wind::{kaimal_spectrum, read_wind_series, WindField, WindSource};

use crate::frames::Vec3;

/// Snapshot of the environment at a given time, held fixed over one
/// integration step.
#[derive(Debug, Clone, Copy)]
pub struct EnvironmentSample<'a> {
    pub t: f64,
    pub wind: Vec3,
    pub waves: &'a WaveField,
}
