//! Downlink co-channel interference from a LEO satellite beam onto a
//! terrestrial UE sharing the same band.
//!
//! The chain for one point is: [`geometry`] places the beam centre and
//! the UE on a spherical Earth, [`antenna`] evaluates the circular-aperture
//! gain towards the UE, [`propagation`] stacks the path-loss terms and
//! [`linkbudget`] turns the result into received power, INR and SINR.
//! [`sweep`] runs that chain over a slant-range × α grid.

pub mod antenna;
pub mod chart;
pub mod error;
pub mod geometry;
pub mod linkbudget;
pub mod output;
pub mod propagation;
pub mod sweep;

pub use error::{Error, Result};
pub use sweep::{load_config, run_sweep, ScenarioConfig, SweepRow};
