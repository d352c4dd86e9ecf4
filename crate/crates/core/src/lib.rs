//! Simulation and stability certification of delayed Nicholson blowfly patch
//! models on arbitrary time scales.
//!
//! A time scale is any nonempty closed subset of the reals; it unifies
//! continuous (`R`), discrete (`Z`, `hZ`) and hybrid time domains. This crate
//! provides:
//!
//! - explicit windowed time scales with jump operators, graininess,
//!   translation-set diagnostics and simulation grids ([`timescale`]);
//! - the time-scale calculus kernel: regressivity, circle operations, the
//!   generalized exponential, delta integration/differentiation ([`tscalc`]);
//! - the n-patch blowfly model with quasi-periodic coefficient expression
//!   trees and delayed right-hand side ([`model`]);
//! - a method-of-steps integrator that is exact across right-scattered
//!   points and classical RK4 on dense segments ([`simulator`]);
//! - mechanical certification of the sufficient conditions for existence,
//!   positivity, boundedness and exponential stability ([`certifier`]);
//! - post-hoc diagnostics: envelope verification, decay fitting,
//!   translation-number search, continuous/discrete comparison
//!   ([`analysis`]);
//! - a bundled three-patch benchmark with a quasi-periodic coefficient set
//!   ([`preset`]).
//!
//! All numerics are generic over the scalar type via [`real::Real`]
//! (`f32` or `f64`); the `*64` aliases below fix the common choice.

pub mod analysis;
pub mod certifier;
pub mod error;
pub mod model;
pub mod preset;
pub mod real;
pub mod simulator;
pub mod timescale;
pub mod tscalc;

pub use error::{Error, Result};
pub use real::Real;

/// `f64` aliases for the main library types.
pub type TimeScale64 = timescale::TimeScale<f64>;
pub type ScaleFamily64 = timescale::ScaleFamily<f64>;
pub type Grid64 = timescale::Grid<f64>;
pub type Coefficient64 = model::Coefficient<f64>;
pub type NicholsonModel64 = model::NicholsonModel<f64>;
pub type InitialCondition64 = model::InitialCondition<f64>;
pub type Trajectory64 = simulator::Trajectory<f64>;
pub type BoundsTable64 = certifier::BoundsTable<f64>;
pub type Certificate64 = certifier::Certificate<f64>;
