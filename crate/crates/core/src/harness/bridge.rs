use serde::{Deserialize, Serialize};

use super::report::TestReport;
use super::stats::EmpiricalTransform;
use crate::continuum::joint_transform;
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::peeling::near_critical_run;

/// Perimeter and volume normalizations between the discrete hulls and the plane.
pub const PERIMETER_SCALE: f64 = 1.5;
pub const VOLUME_SCALE: f64 = 3.0;

pub const DEFAULT_S_GRID: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeRow {
    pub n: u32,
    pub radius: u32,
    pub perimeter: EmpiricalTransform,
    pub volume: EmpiricalTransform,
    /// Largest perimeter-transform discrepancy over the grid and its stderr.
    pub perimeter_discrepancy: (f64, f64),
    pub volume_discrepancy: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BridgeOutcome {
    pub r: f64,
    pub s_grid: Vec<f64>,
    pub rows: Vec<BridgeRow>,
}

/// True when the sequence never increases, except for at most one step up
/// that stays within the combined standard error.
pub fn trend_is_decreasing(seq: &[(f64, f64)]) -> bool {
    let mut inversions = 0;
    for w in seq.windows(2) {
        let ((a, sa), (b, sb)) = (w[0], w[1]);
        if b > a {
            inversions += 1;
            if inversions > 1 || b - a > (sa * sa + sb * sb).sqrt() {
                return false;
            }
        }
    }
    true
}

/// Compares near-critical hulls at radius `⌈r n⌉` with the plane transforms
/// `joint_transform(s, 0, r)` and `joint_transform(0, s, r)`.
pub fn bridge_run(
    n_list: &[u32],
    r: f64,
    s_grid: &[f64],
    replicas: u64,
    seed: u64,
    exec: Execution,
) -> Result<BridgeOutcome> {
    if n_list.is_empty() || s_grid.is_empty() {
        return Err(Error::Invalid("bridge needs scales and an s grid".into()));
    }
    let mut rows = Vec::new();
    for &n in n_list {
        let sample = near_critical_run(n, &[r], replicas, seed, exec)?;
        let p: Vec<f64> = sample.perimeter[0].iter().map(|x| x / PERIMETER_SCALE).collect();
        let v: Vec<f64> = sample.volume[0].iter().map(|x| x / VOLUME_SCALE).collect();
        let p_pts: Vec<(f64, f64)> = s_grid.iter().map(|&s| (s, 0.0)).collect();
        let v_pts: Vec<(f64, f64)> = s_grid.iter().map(|&s| (0.0, s)).collect();
        let perimeter = EmpiricalTransform::from_samples(&p_pts, &p, &v)?;
        let volume = EmpiricalTransform::from_samples(&v_pts, &p, &v)?;
        let target = |l: f64, m: f64| joint_transform(l, m, r);
        rows.push(BridgeRow {
            n,
            radius: sample.radii[0],
            perimeter_discrepancy: perimeter.sup_discrepancy(target)?,
            volume_discrepancy: volume.sup_discrepancy(target)?,
            perimeter,
            volume,
        });
    }
    Ok(BridgeOutcome {
        r,
        s_grid: s_grid.to_vec(),
        rows,
    })
}

impl BridgeOutcome {
    /// Passes when the perimeter discrepancies decrease in `n`.
    pub fn report(&self) -> TestReport {
        let seq: Vec<(f64, f64)> = self.rows.iter().map(|r| r.perimeter_discrepancy).collect();
        let pass = trend_is_decreasing(&seq);
        let last = seq.last().map_or(f64::NAN, |d| d.0);
        let config = serde_json::json!({
            "r": self.r,
            "s_grid": self.s_grid,
            "n": self.rows.iter().map(|r| r.n).collect::<Vec<_>>(),
            "replicas": self.rows.first().map_or(0, |r| r.perimeter.replicas),
            "perimeter_discrepancy": seq,
            "volume_discrepancy": self.rows.iter().map(|r| r.volume_discrepancy).collect::<Vec<_>>(),
        });
        TestReport {
            name: "bridge_perimeter_trend".into(),
            statistic: last,
            p_value: None,
            margin: None,
            threshold: 0.0,
            pass,
            config,
            note: Some("pass iff discrepancies decrease in n".into()),
            required: true,
        }
    }
}

/// Near-critical experiment on scales `n_list` with the default s grid.
pub fn bridge_experiment(n_list: &[u32], r: f64, replicas: u64, seed: u64, exec: Execution) -> Result<TestReport> {
    Ok(bridge_run(n_list, r, &DEFAULT_S_GRID, replicas, seed, exec)?.report())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trend_rule() {
        assert!(trend_is_decreasing(&[(0.3, 0.01), (0.2, 0.01), (0.1, 0.01)]));
        assert!(trend_is_decreasing(&[(0.3, 0.01), (0.305, 0.01), (0.1, 0.01)]));
        assert!(!trend_is_decreasing(&[(0.3, 0.01), (0.4, 0.01), (0.1, 0.01)]));
        assert!(!trend_is_decreasing(&[(0.3, 0.01), (0.305, 0.01), (0.31, 0.01)]));
    }

    #[test]
    fn zero_argument_is_exact() {
        let out = bridge_run(&[4], 0.5, &[0.0], 20, 1, Execution::Sequential).unwrap();
        assert_eq!(out.rows[0].perimeter.estimates[0], 1.0);
        assert_eq!(out.rows[0].perimeter_discrepancy.0, 0.0);
    }

    #[test]
    fn target_fixture() {
        // frozen plane target at s = 1, r = 0.5
        let v = joint_transform(1.0, 0.0, 0.5).unwrap();
        assert!((v - 0.788_563_445_174_971_7).abs() < 1e-13, "{v}");
    }
}
