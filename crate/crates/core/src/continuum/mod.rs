//! Transform oracles and path simulators for the scaling limits.

mod levy;
mod nu;
mod path;
mod sigma;
mod stable;
mod transforms;

use std::io::Write;
use std::path::Path;

pub use levy::*;
pub use nu::*;
pub use path::*;
pub use sigma::*;
pub use stable::martingale_check;
pub use stable::martingale_factor;
pub use transforms::*;


use crate::error::{Error, Result};

/// Writes `joint_transform` on a grid as CSV with columns `r,lambda,mu,transform_value`.
pub fn write_transform_table<W: Write>(mut out: W, radii: &[f64], lambdas: &[f64], mus: &[f64]) -> Result<()> {
    let io = |e| Error::io("<transform table>", e);
    writeln!(out, "r,lambda,mu,transform_value").map_err(io)?;
    for &r in radii {
        for &l in lambdas {
            for &m in mus {
                let v = joint_transform(l, m, r)?;
                writeln!(out, "{r},{l},{m},{v:.15e}").map_err(io)?;
            }
        }
    }
    Ok(())
}

pub fn save_transform_table(path: &Path, radii: &[f64], lambdas: &[f64], mus: &[f64]) -> Result<()> {
    let file = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    write_transform_table(std::io::BufWriter::new(file), radii, lambdas, mus)
}
