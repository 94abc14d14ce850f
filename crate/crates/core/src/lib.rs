//! Mesh-free topology optimization with physics-informed neural networks.
//!
//! The crate detects hidden voids and inclusions in elastic and thermally
//! conducting bodies from sparse boundary measurements. Coordinate networks
//! approximate the physical fields and a level-set function; the material
//! density is `sigmoid(phi / delta)`, and an eikonal penalty in a narrow band
//! around `phi = 0` keeps the density close to binary.
//!
//! Module map:
//!
//! - [`autodiff`]: tape-based reverse mode with nested spatial duals
//! - [`networks`]: SIREN networks, hard boundary-condition transforms, checkpoints
//! - [`density`]: level-set to density map and the eikonal narrow band
//! - [`physics`]: PDE residuals for linear elasticity, Neo-Hookean hyperelasticity
//!   and nonlinear heat conduction, plus nondimensionalization
//! - [`losses`]: measurement, governing-equation and regularization losses
//! - [`training`]: Latin hypercube sampling, ADAM, pretraining and the main loop
//! - [`dataforge`]: shape catalog, FEM ground truth, measurements, case files
//! - [`metrics`]: IoU and raster export
//! - [`config`]: flat `key = value` run configuration
//! - [`problem`]: domains, boundary sides and physics kinds
//! - [`run`]: data generation, training, evaluation and sweeps on disk

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod autodiff;
pub mod config;
pub mod dataforge;
pub mod density;
pub mod error;
mod fsutil;
pub mod losses;
pub mod metrics;
pub mod networks;
pub mod physics;
pub mod problem;
pub mod run;
pub mod training;

pub use error::{Error, Result};
