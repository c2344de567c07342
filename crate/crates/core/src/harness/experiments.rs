use serde::{Deserialize, Serialize};

use crate::continuum::{jump_counter, simulate_pv, PvConfig, PvStart};
use crate::error::Result;
use crate::exec::{try_map_replicas, Execution};
use crate::rng::stream;

/// Growth rate of the hull perimeter, `2√2`.
pub const GROWTH_RATE: f64 = 2.0 * std::f64::consts::SQRT_2;

/// Perimeter and volume at radius `r` for `replicas` independent hulls.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HullSamples {
    pub r: f64,
    pub perimeter: Vec<f64>,
    pub volume: Vec<f64>,
}

impl HullSamples {
    /// `e^{-2√2 r} P_r`, asymptotically exponential with rate 12.
    pub fn rescaled_perimeter(&self) -> Vec<f64> {
        let s = (-GROWTH_RATE * self.r).exp();
        self.perimeter.iter().map(|p| p * s).collect()
    }

    pub fn volume_ratio(&self) -> Vec<f64> {
        self.volume.iter().zip(&self.perimeter).map(|(v, p)| v / p).collect()
    }
}

pub fn hull_samples(r: f64, cfg: &PvConfig, replicas: usize, seed: u64, exec: Execution) -> Result<HullSamples> {
    let out = try_map_replicas(replicas, exec, |k| {
        let mut rng = stream(seed, k as u64);
        simulate_pv(r, cfg, &mut rng).map(|s| (s.perimeter, s.volume))
    })?;
    let (perimeter, volume) = out.into_iter().unzip();
    Ok(HullSamples { r, perimeter, volume })
}

/// Per-replica `(P_r, N)` where `N` counts volume jumps of size at least `eps`
/// in `[r, r + window]`, with the perimeter started from its exact law at `r`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MarkJumpCounts {
    pub r: f64,
    pub window: f64,
    pub eps: f64,
    pub start: Vec<f64>,
    pub counts: Vec<usize>,
}

impl MarkJumpCounts {
    /// `(mean of ε^{3/4} N / window, mean of P_r)`.
    pub fn normalized_means(&self) -> (f64, f64) {
        let n = self.counts.len() as f64;
        let scale = self.eps.powf(0.75) / self.window;
        let lhs = self.counts.iter().map(|&c| c as f64 * scale).sum::<f64>() / n;
        let p = self.start.iter().sum::<f64>() / n;
        (lhs, p)
    }

    /// Per-replica `ε^{3/4} N / window - c P_r`, whose mean should vanish.
    pub fn residuals(&self, c: f64) -> Vec<f64> {
        let scale = self.eps.powf(0.75) / self.window;
        self.counts
            .iter()
            .zip(&self.start)
            .map(|(&n, &p)| n as f64 * scale - c * p)
            .collect()
    }
}

pub fn mark_jump_counts(
    r: f64,
    window: f64,
    eps: f64,
    eps_cut: f64,
    replicas: usize,
    seed: u64,
    exec: Execution,
) -> Result<MarkJumpCounts> {
    let cfg = PvConfig {
        start: PvStart::Marginal { r0: r },
        eps_cut,
        record: true,
        ..PvConfig::default()
    };
    let out = try_map_replicas(replicas, exec, |k| {
        let mut rng = stream(seed, k as u64);
        let s = simulate_pv(r + window, &cfg, &mut rng)?;
        let p0 = s.p_path.values[0];
        Ok::<_, crate::error::Error>((p0, jump_counter(&s.v_path, r, r + window, eps)))
    })?;
    let (start, counts) = out.into_iter().unzip();
    Ok(MarkJumpCounts {
        r,
        window,
        eps,
        start,
        counts,
    })
}
