//! Statistical tests, experiments and the validation suite.

mod bridge;
mod experiments;
mod report;
mod stats;
mod suite;

pub use bridge::*;
pub use experiments::*;
pub use report::*;
pub use stats::*;
pub use suite::*;
