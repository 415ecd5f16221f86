//! Seven-DOF floating wind turbine simulator with a pitch-controller test
//! bench.

pub mod aero;
pub mod analysis;
pub mod config;
pub mod control;
pub mod dynamics;
pub mod environment;
pub mod error;
pub mod frames;
pub mod hydro;
pub mod loads;
pub mod params;
pub mod rigid_body;
pub mod runner;
pub mod state;
pub mod trajectory;
