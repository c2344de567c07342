//! Simulation and verification of planar stochastic hyperbolic triangulations
//! and their scaling limits.

#![allow(clippy::neg_cmp_op_on_partial_ord, clippy::needless_range_loop)]

pub mod cli;
pub mod combinatorics;
pub mod continuum;
pub mod error;
pub mod exec;
pub mod harness;
pub mod mapbuild;
pub mod peeling;
pub mod quad;
pub mod rng;

pub use error::{Error, Result};
