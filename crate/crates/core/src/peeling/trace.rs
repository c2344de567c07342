use std::io::Write;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::combinatorics::LambdaParams;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct HullRow {
    pub r: u32,
    pub boundary_edges: u64,
    pub vertices: u64,
    pub peel_steps: u64,
}

/// Hull perimeter and volume by radius for one peeling run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullTrace {
    pub params: LambdaParams,
    pub seed: u64,
    pub replica: u64,
    pub rows: Vec<HullRow>,
}

impl HullTrace {
    pub fn row(&self, r: u32) -> Option<&HullRow> {
        r.checked_sub(1).and_then(|k| self.rows.get(k as usize))
    }

    pub fn check(&self) -> Result<()> {
        for (k, w) in self.rows.iter().enumerate() {
            if w.r as usize != k + 1 || w.boundary_edges == 0 {
                return Err(Error::Invalid(format!("malformed trace row {k}")));
            }
            if k > 0 && w.vertices < self.rows[k - 1].vertices {
                return Err(Error::Invalid(format!("volume decreased at row {k}")));
            }
        }
        Ok(())
    }

    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "r,boundary_edges,vertices,peel_steps")?;
        for w in &self.rows {
            writeln!(out, "{},{},{},{}", w.r, w.boundary_edges, w.vertices, w.peel_steps)?;
        }
        Ok(())
    }

    pub fn save_csv(&self, path: &Path) -> Result<()> {
        let f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
        let mut w = std::io::BufWriter::new(f);
        self.write_csv(&mut w).map_err(|e| Error::io(path, e))?;
        w.flush().map_err(|e| Error::io(path, e))
    }

    pub fn read_csv(text: &str, params: LambdaParams, seed: u64, replica: u64) -> Result<Self> {
        let mut lines = text.lines();
        if lines.next() != Some("r,boundary_edges,vertices,peel_steps") {
            return Err(Error::Invalid("missing trace header".into()));
        }
        let mut rows = Vec::new();
        for line in lines.filter(|l| !l.is_empty()) {
            let f: Vec<u64> = line
                .split(',')
                .map(|s| s.trim().parse::<u64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|e| Error::Invalid(format!("bad trace row '{line}': {e}")))?;
            if f.len() != 4 {
                return Err(Error::Invalid(format!("bad trace row '{line}'")));
            }
            rows.push(HullRow {
                r: f[0] as u32,
                boundary_edges: f[1],
                vertices: f[2],
                peel_steps: f[3],
            });
        }
        Ok(HullTrace {
            params,
            seed,
            replica,
            rows,
        })
    }
}

/// Run metadata written next to trace files.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    pub lambda: String,
    pub h: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<u32>,
    pub seed: u64,
    pub replicas: u64,
}

impl RunMetadata {
    pub fn new(params: &LambdaParams, n: Option<u32>, seed: u64, replicas: u64) -> Self {
        RunMetadata {
            lambda: format!("{:e}", params.lambda),
            h: format!("{:e}", params.h),
            n,
            seed,
            replicas,
        }
    }
}
