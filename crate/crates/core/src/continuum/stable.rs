use rand::rngs::SmallRng;
use rand::{Rng, SeedableRng};
use rand_distr::{Distribution, Exp1, Poisson, StandardNormal};

use super::levy::jump_scale;
use crate::exec::{map_replicas, Execution};
use crate::quad::Quadrature;
use crate::rng::stream;

/// `(1 + 2x) e^{-2x}`, the product factor of the exponential martingale.
pub fn martingale_factor(x: f64) -> f64 {
    (1.0 + 2.0 * x) * (-2.0 * x).exp()
}

/// `ln f(x) = ln(1 + 2x) - 2x`, by its series where the difference cancels.
pub(crate) fn log_factor(x: f64) -> f64 {
    if x > 1e-2 {
        return (2.0 * x).ln_1p() - 2.0 * x;
    }
    let z = 2.0 * x;
    let mut term = z;
    let mut sum = 0.0;
    for n in 2..16 {
        term *= -z;
        sum += term / n as f64;
    }
    sum
}

/// `t ∫_0^ε ln f(x) μ(dx)` for the stable jump measure `μ(dx) = k x^{-5/2} dx`.
fn small_jump_log_factor(eps: f64) -> f64 {
    let q = Quadrature::with_tol(1e-15, 1e-12);
    // x = e^s; ln f(x) ≈ -2x² keeps the integrand bounded near zero
    let g = |s: f64| {
        let x = s.exp();
        jump_scale() * log_factor(x) * x.powf(-1.5)
    };
    q.integrate(g, eps.ln() - 80.0, eps.ln()).expect("bounded integrand").value
}

/// One sample of `M_t = e^{-S_t} ∏ (1 + 2ΔS) e^{-2ΔS}` for the spectrally positive
/// 3/2-stable process `S`, jumps below `eps` folded into a Gaussian and a
/// deterministic product factor.
fn martingale_sample<R: Rng>(t: f64, eps: f64, small_log: f64, rng: &mut R) -> f64 {
    let k = jump_scale();
    let rate = t * k * 2.0 / 3.0 * eps.powf(-1.5);
    let n = Poisson::new(rate).expect("positive rate").sample(rng) as u64;
    let mut sum = 0.0;
    let mut log_prod = 0.0;
    let mut prod = 1.0;
    let mut largest = 0.0f64;
    for _ in 0..n {
        let e: f64 = Exp1.sample(rng);
        let x = eps * (2.0 * e / 3.0).exp();
        sum += x;
        largest = largest.max(x);
        prod *= 1.0 + 2.0 * x;
        if prod > 1e200 {
            log_prod += prod.ln();
            prod = 1.0;
        }
    }
    log_prod += prod.ln();
    // f is decreasing, so the smallest factor sits at the largest jump
    assert!(martingale_factor(largest) <= 1.0);
    let z: f64 = StandardNormal.sample(rng);
    let s = sum - t * 2.0 * k * eps.powf(-0.5) + (t * 2.0 * k * eps.sqrt()).sqrt() * z;
    (-s - 2.0 * sum + log_prod + t * small_log).exp()
}

/// Monte Carlo estimate of `E[M_t]` with its standard error.
pub fn martingale_check(t: f64, replicas: usize, eps_cut: f64, seed: u64, exec: Execution) -> (f64, f64) {
    let small_log = small_jump_log_factor(eps_cut);
    let samples = map_replicas(replicas, exec, |i| {
        let mut rng = SmallRng::from_rng(stream(seed, i as u64)).expect("seedable");
        martingale_sample(t, eps_cut, small_log, &mut rng)
    });
    mean_stderr(&samples)
}

fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (v / n).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_bounded_by_one() {
        for i in 0..1000 {
            let x = i as f64 * 0.01;
            assert!(martingale_factor(x) <= 1.0);
        }
    }

    #[test]
    fn log_factor_is_continuous() {
        for x in [1e-12f64, 1e-6, 1e-3, 0.009_999] {
            let direct = (2.0 * x).ln_1p() - 2.0 * x;
            assert!((log_factor(x) - direct).abs() <= 1e-9 * direct.abs().max(1e-300) + 1e-28, "x {x}");
        }
        let a = log_factor(0.01 - 1e-12);
        let b = log_factor(0.01 + 1e-12);
        assert!((a - b).abs() < 1e-13);
    }

    #[test]
    fn small_jump_factor_is_second_order() {
        // ln f(x) ≈ -2x² near zero, so the integral ≈ -4k ε^{1/2}
        let eps = 1e-6;
        let v = small_jump_log_factor(eps);
        assert!((v / (-4.0 * jump_scale() * eps.sqrt()) - 1.0).abs() < 1e-2);
    }

    #[test]
    fn coarse_martingale_mean() {
        let (m, se) = martingale_check(1.0, 20_000, 1e-2, 3, Execution::Sequential);
        assert!((m - 1.0).abs() < 4.0 * se, "{m} ± {se}");
    }
}
