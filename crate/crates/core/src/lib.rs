//! Coupled orbital-thermal evolution of a satellite pair near a second-order
//! mean-motion resonance.
//!
//! The crate is organised the way the simulation loop is:
//!
//! * [`model`] holds body records, orbital elements and the nonsingular
//!   variables shared by everything else.
//! * [`rheology`] turns a mean temperature into a complex Love number and a
//!   dissipation factor.
//! * [`thermal`] is a 1-D spherical conduction solver with radiogenic and
//!   tidal sources.
//! * [`tides`] has dissipation power, Cassini obliquity and Kaula rates.
//! * [`dynamics`] is the averaged three-body resonant model, the ABM-10
//!   integrator and a direct (non-averaged) three-body oracle.
//! * [`coupling`] runs the feedback loop between the pieces above.
//! * [`cartography`] builds phase-space maps from grids of short runs.
//! * [`config`] and [`output`] are the file-facing side used by the CLI.

// `!(x > 0.0)` style checks are used on purpose: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cartography;
pub mod config;
pub mod constants;
pub mod coupling;
pub mod dynamics;
mod error;
pub mod model;
pub mod output;
pub mod rheology;
pub mod thermal;
pub mod tides;

pub use cartography::{MapModel, MapResult, MapSpec};
pub use config::Config;
pub use coupling::{ScenarioConfig, SimulationRecord};
pub use dynamics::{AveragedModel, DynState};
pub use error::{Error, Result};
pub use model::{
    BodyPhysical, OrbitalElements, PlanetModel, ResonantAngles, SatelliteDynState, SystemState,
};
pub use rheology::{RheologyModel, RheologyParams, TidalResponse};
pub use thermal::{MixtureProps, RadiogenicInventory, ThermalGrid};
