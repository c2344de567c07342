use rand::Rng;
use rug::ops::Pow;
use rug::Float;

use super::counts::{count_triangulations, ln_boundary_constant};
use super::params::{LambdaParams, LAMBDA_C};
use super::tables::partition_function_hp;
use crate::error::{Error, Result};

pub const DEFAULT_TAIL: f64 = 1e-9;
const MAX_CUTOFF: usize = 50_000_000;

/// Law of the number of inner vertices of a Boltzmann triangulation of the
/// `p`-gon, `P(n) = #T_{n,p} λ^n / Z_p`, truncated where the tail is below a bound.
#[derive(Debug, Clone)]
pub struct SizeDistribution {
    pub p: usize,
    pub weights: Vec<f64>,
    pub tail_mass: f64,
    cumulative: Vec<f64>,
}

/// Upper estimate of the mass above `cut` from the fixed-perimeter asymptotics.
fn tail_estimate(ln_scale: f64, ratio: f64, cut: usize) -> f64 {
    let c = cut as f64;
    (ln_scale + c * ratio.ln()).exp() * (2.0 / 3.0) * c.powf(-1.5) * 1.5
}

impl SizeDistribution {
    pub fn new(params: &LambdaParams, p: usize) -> Result<Self> {
        Self::with_tail(params, p, DEFAULT_TAIL)
    }

    pub fn with_tail(params: &LambdaParams, p: usize, tail: f64) -> Result<Self> {
        if p == 0 {
            return Err(Error::domain("perimeter must be at least 1"));
        }
        let z = partition_function_hp(params, p, 40)?;
        let ln_scale = ln_boundary_constant(p as u64) - Float::with_val(160, z.ln_ref()).to_f64();
        let ratio = (params.lambda / LAMBDA_C).min(1.0);
        let mut cut = 64usize;
        while tail_estimate(ln_scale, ratio, cut) > tail {
            cut *= 2;
            if cut > MAX_CUTOFF {
                return Err(Error::Capacity {
                    perimeter: p,
                    capacity: MAX_CUTOFF,
                });
            }
        }
        let (mut lo, mut hi) = (cut / 2, cut);
        while hi - lo > 1 {
            let mid = (lo + hi) / 2;
            if tail_estimate(ln_scale, ratio, mid) > tail {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let cut = hi.max(8);
        let bits = 256;
        let lambda = Float::with_val(bits, params.lambda);
        let seed = |n: usize| -> f64 {
            if (n, p) == (0, 1) {
                return 0.0;
            }
            let c = count_triangulations(n as u64, p as u64).unwrap();
            let v = Float::with_val(bits, c) * Float::with_val(bits, (&lambda).pow(n as u32)) / &z;
            v.to_f64()
        };
        let mut weights = vec![0.0; cut + 1];
        weights[0] = seed(0);
        weights[1] = seed(1);
        let l2 = params.lambda * params.lambda;
        let pf = p as f64;
        for n in 0..cut.saturating_sub(1) {
            let nf = n as f64;
            let m = 2.0 * pf + 3.0 * nf;
            let r = 16.0 * (m + 1.0) * (m - 1.0) * (m - 3.0)
                / ((2.0 * pf + nf + 1.0) * (nf + 1.0) * (nf + 2.0));
            weights[n + 2] = if (n, p) == (0, 1) {
                seed(2)
            } else {
                weights[n] * r * l2
            };
        }
        let mut cumulative = Vec::with_capacity(weights.len());
        let mut acc = 0.0;
        for w in &weights {
            acc += w;
            cumulative.push(acc);
        }
        let tail_mass = (1.0 - acc).max(0.0);
        Ok(SizeDistribution {
            p,
            weights,
            tail_mass,
            cumulative,
        })
    }

    pub fn cutoff(&self) -> usize {
        self.weights.len() - 1
    }

    pub fn mean(&self) -> f64 {
        let body: f64 = self.weights.iter().enumerate().map(|(n, w)| n as f64 * w).sum();
        body / (1.0 - self.tail_mass)
    }

    /// Draws from the truncated body; the tail event is resampled.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cumulative.last().unwrap();
        let u = rng.gen::<f64>() * total;
        self.cumulative.partition_point(|&c| c <= u).min(self.cutoff())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn weights_match_exact_counts() {
        let params = LambdaParams::from_ratio(0.8).unwrap();
        for p in 1..=5usize {
            let d = SizeDistribution::new(&params, p).unwrap();
            assert!(d.tail_mass <= 1e-9, "p = {p}: tail {}", d.tail_mass);
            let z = partition_function_hp(&params, p, 40).unwrap();
            for n in 0..40usize {
                if (n, p) == (0, 1) {
                    assert_eq!(d.weights[0], 0.0);
                    continue;
                }
                let c = count_triangulations(n as u64, p as u64).unwrap();
                let exact = (Float::with_val(200, c)
                    * Float::with_val(200, params.lambda).pow(n as u32)
                    / &z)
                    .to_f64();
                assert!((d.weights[n] - exact).abs() <= 1e-12 * exact, "n {n} p {p}");
            }
        }
    }

    #[test]
    fn critical_tail_is_controlled() {
        let d = SizeDistribution::new(&LambdaParams::critical(), 2).unwrap();
        assert!(d.tail_mass <= 1e-9, "tail {}", d.tail_mass);
        let sum: f64 = d.weights.iter().sum();
        assert!((sum + d.tail_mass - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sampler_matches_weights() {
        let params = LambdaParams::from_ratio(0.5).unwrap();
        let d = SizeDistribution::new(&params, 3).unwrap();
        let mut rng = stream(7, 0);
        let mut counts = [0usize; 4];
        let trials = 200_000;
        for _ in 0..trials {
            let n = d.sample(&mut rng);
            if n < 4 {
                counts[n] += 1;
            }
        }
        for n in 0..4 {
            let f = counts[n] as f64 / trials as f64;
            let sd = (d.weights[n] * (1.0 - d.weights[n]) / trials as f64).sqrt();
            assert!((f - d.weights[n]).abs() < 5.0 * sd + 1e-4, "n {n}");
        }
    }
}
