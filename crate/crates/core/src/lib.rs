//! Direct data-driven interpolation, approximation and way-point control of
//! linear parameter-varying (LPV) system trajectories.
//!
//! A single measured data dictionary, arranged into Hankel matrices together
//! with a scheduling-lifted copy of itself, serves as a nonparametric
//! representation of the finite-horizon behavior. On top of that
//! representation this crate recovers missing entries of partially specified
//! trajectories ([`interpolate`]), projects inconsistent data onto the
//! behavior in a weighted least-squares sense ([`approximate`]), and plans
//! way-point-constrained minimum-cost trajectories ([`control`]), including an
//! iterative scheme for endogenous scheduling maps. The [`conditions`] module
//! provides the rank tests that decide existence and uniqueness, and
//! [`lpv_sim`] supplies a model-based simulator that acts as the ground-truth
//! oracle for everything else.

pub mod approximate;
pub mod conditions;
pub mod control;
pub mod error;
pub mod hankel;
pub mod interpolate;
pub mod io;
pub mod lpv_sim;
pub mod numerics;
pub mod sampling;
pub mod signals;

pub use error::{Error, Result};
pub use signals::{
    DataDictionary, IndexSet, IoPartition, SchedulingTrajectory, SystemStructure, Trajectory,
};

#[cfg(test)]
pub(crate) mod test_util;
