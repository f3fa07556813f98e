//! Zero-energy-limit solutions of the modified Gross-Pitaevskii equation.
//!
//! The library has four layers:
//!
//! - [`params`]: physical constants and the derived scales (coupling
//!   constant, trap length, healing length, diluteness).
//! - [`zero_energy`]: the closed-form radial solution of the source-driven
//!   Laplace problem on an annulus, its derivative, and three independent
//!   evaluations of the curvature energy.
//! - [`bvp`]: a second-order finite-difference solver for the same
//!   boundary-value problem, used to cross-validate the closed form.
//! - [`gpe`]: a 1D stationary Gross-Pitaevskii ground-state solver
//!   (semi-implicit normalized gradient flow) with energy and
//!   chemical-potential diagnostics.
//!
//! The [`config`] and [`run`] modules back the `gpez` CLI.

// Validation deliberately uses `!(x > 0.0)` so NaN fails the check.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bvp;
pub mod config;
pub mod error;
pub mod gpe;
pub mod grid;
pub mod params;
pub mod quad;
pub mod run;
pub mod zero_energy;

pub use error::Error;
pub use grid::{RadialGrid, WaveFunction};
pub use params::PhysicalParams;
pub use zero_energy::{EnergyBreakdown, ZeroEnergyConfig};
