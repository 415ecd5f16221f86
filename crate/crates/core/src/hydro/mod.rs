//! Hydrostatic, hydrodynamic and mooring loads on the platform.
//!
//! Floating members (main and upper columns) pierce the free surface; their
//! wetted length follows the platform motion and the local wave elevation.
//! Base columns are always fully submerged and act as heave plates.

mod members;
mod mooring;

pub use members::{BuoyancyModel, HydroLoads, Platform};
pub use mooring::{MooringLoads, MooringModel};
