use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Right-continuous path sampled at increasing times; `jump[i]` is the jump
/// at `times[i]` (zero for grid points) and `values[i]` the value after it.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct CadlagPath {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub jump: Vec<f64>,
}

impl CadlagPath {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn push(&mut self, t: f64, value: f64, jump: f64) {
        debug_assert!(self.times.last().is_none_or(|&s| s <= t));
        self.times.push(t);
        self.values.push(value);
        self.jump.push(jump);
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    /// Value at `t`: the last recorded value at or before `t`.
    pub fn value_at(&self, t: f64) -> Option<f64> {
        let k = self.times.partition_point(|&s| s <= t);
        k.checked_sub(1).map(|i| self.values[i])
    }

    pub fn jumps(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.times
            .iter()
            .zip(&self.jump)
            .filter(|(_, &j)| j != 0.0)
            .map(|(&t, &j)| (t, j))
    }

    pub fn last_value(&self) -> Option<f64> {
        self.values.last().copied()
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,value,jump_flag")?;
        for i in 0..self.times.len() {
            writeln!(out, "{},{},{}", self.times[i], self.values[i], u8::from(self.jump[i] != 0.0))?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(f);
        self.write_csv(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }
}

/// Number of jumps of absolute size at least `h` at times in `[a, b]`.
pub fn jump_counter(path: &CadlagPath, a: f64, b: f64, h: f64) -> usize {
    path.jumps().filter(|&(t, j)| t >= a && t <= b && j.abs() >= h).count()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counting() {
        let mut p = CadlagPath::new();
        assert_eq!(jump_counter(&p, 0.0, 3.0, 1.0), 0);
        p.push(0.0, 0.0, 0.0);
        p.push(1.0, 0.5, 0.5);
        p.push(2.0, 2.5, 2.0);
        p.push(3.0, 2.5, 0.0);
        assert_eq!(jump_counter(&p, 0.0, 3.0, 1.0), 1);
        assert_eq!(p.value_at(1.5), Some(0.5));
        assert_eq!(p.value_at(-1.0), None);
        let mut buf = Vec::new();
        p.write_csv(&mut buf).unwrap();
        assert!(String::from_utf8(buf).unwrap().starts_with("t,value,jump_flag\n0,0,0\n1,0.5,1"));
    }
}
