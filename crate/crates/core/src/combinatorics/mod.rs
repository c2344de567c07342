//! Exact enumeration, Boltzmann weights and Markov constants.

mod counts;
mod limits;
mod params;
mod series;
mod size;
mod tables;

pub use counts::*;
pub use limits::*;
pub use params::*;
pub use series::*;
pub use size::*;
pub use tables::*;
