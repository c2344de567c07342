//! Layered peeling exploration of the hyperbolic triangulations.

mod engine;
mod fill;
mod law;
mod trace;

pub use engine::*;
pub use fill::*;
pub use law::*;
pub use trace::*;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{LambdaParams, SizeDistribution};
use crate::error::{Error, Result};
use crate::exec::{try_map_replicas, Execution};
use crate::rng::stream;

/// Draws an inner-vertex count from a tabulated size law.
pub fn sample_swallowed_size<R: Rng + ?Sized>(dist: &SizeDistribution, rng: &mut R) -> usize {
    dist.sample(rng)
}

/// Peels layers `1..=r_max` on stream `(seed, replica)`.
pub fn peel_to_radius(law: &PeelLaw, r_max: u32, seed: u64, replica: u64) -> Result<HullTrace> {
    let mut law = law.clone();
    let mut rng = stream(seed, replica);
    let rows = Explorer::new().run(&mut law, &mut CountSink, r_max, &mut rng)?;
    Ok(HullTrace {
        params: *law.params(),
        seed,
        replica,
        rows,
    })
}

/// Independent traces for replicas `0..replicas`.
pub fn peel_replicas(
    params: LambdaParams,
    r_max: u32,
    replicas: u64,
    seed: u64,
    exec: Execution,
) -> Result<Vec<HullTrace>> {
    let law = PeelLaw::new(params);
    try_map_replicas(replicas as usize, exec, |k| peel_to_radius(&law, r_max, seed, k as u64))
}

/// Rescaled hull perimeters and volumes at the near-critical weight of scale `n`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NearCriticalSample {
    pub n: u32,
    pub params: LambdaParams,
    pub r_grid: Vec<f64>,
    /// Discrete radius `⌈r n⌉` used for each grid point.
    pub radii: Vec<u32>,
    /// `perimeter[g][k] = |∂B| / n²` for grid point `g` and replica `k`.
    pub perimeter: Vec<Vec<f64>>,
    /// `volume[g][k] = |B| / n⁴`.
    pub volume: Vec<Vec<f64>>,
}

pub fn near_critical_run(
    n: u32,
    r_grid: &[f64],
    replicas: u64,
    seed: u64,
    exec: Execution,
) -> Result<NearCriticalSample> {
    if n < 4 {
        return Err(Error::domain("near-critical scale n must be at least 4"));
    }
    if r_grid.is_empty() || r_grid.iter().any(|&r| !(r > 0.0)) {
        return Err(Error::domain("radius grid must be nonempty and positive"));
    }
    let params = LambdaParams::near_critical(n)?;
    let nf = f64::from(n);
    let radii: Vec<u32> = r_grid.iter().map(|r| (r * nf).ceil() as u32).collect();
    let r_max = *radii.iter().max().unwrap();
    let traces = peel_replicas(params, r_max, replicas, seed, exec)?;
    let n2 = nf * nf;
    let pick = |f: &dyn Fn(&HullRow) -> f64| -> Vec<Vec<f64>> {
        radii
            .iter()
            .map(|&r| traces.iter().map(|t| f(t.row(r).unwrap())).collect())
            .collect()
    };
    Ok(NearCriticalSample {
        n,
        params,
        r_grid: r_grid.to_vec(),
        radii: radii.clone(),
        perimeter: pick(&|w| w.boundary_edges as f64 / n2),
        volume: pick(&|w| w.vertices as f64 / (n2 * n2)),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_trace_for_zero_radius() {
        let law = PeelLaw::new(LambdaParams::critical());
        let t = peel_to_radius(&law, 0, 1, 0).unwrap();
        assert!(t.rows.is_empty());
    }

    #[test]
    fn traces_are_well_formed_and_reproducible() {
        let law = PeelLaw::new(LambdaParams::from_ratio(0.9).unwrap());
        let a = peel_to_radius(&law, 5, 9, 3).unwrap();
        let b = peel_to_radius(&law, 5, 9, 3).unwrap();
        assert_eq!(a, b);
        a.check().unwrap();
        assert_eq!(a.rows.len(), 5);
        let c = peel_to_radius(&law, 5, 9, 4).unwrap();
        assert_ne!(a.rows, c.rows);
    }

    #[test]
    fn csv_round_trip() {
        let law = PeelLaw::new(LambdaParams::critical());
        let t = peel_to_radius(&law, 5, 2, 0).unwrap();
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let back = HullTrace::read_csv(std::str::from_utf8(&buf).unwrap(), t.params, 2, 0).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn near_critical_weight() {
        let p = LambdaParams::near_critical(10).unwrap();
        assert!((p.ratio() - (1.0 - 2.0 / 30_000.0)).abs() < 1e-15);
        let s = near_critical_run(4, &[0.5, 1.0], 3, 1, Execution::Sequential).unwrap();
        assert_eq!(s.radii, vec![2, 4]);
        assert_eq!(s.perimeter[0].len(), 3);
    }
}
