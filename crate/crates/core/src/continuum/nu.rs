use std::f64::consts::PI;

use rand::Rng;
use rand_distr::{ChiSquared, Distribution};

use crate::error::{Error, Result};

/// Law of the volume mark carried by a perimeter jump of size `delta`.
///
/// With `ξ` of density `(2π ξ⁵)^{-1/2} e^{-1/(2ξ)}`, the mark is `δ² ξ` under
/// the bias `e^{-2 δ² ξ}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NuDeltaLaw {
    pub delta: f64,
}

/// Attempts before giving up on one draw; the acceptance rate is `(1+2δ)e^{-2δ}`.
const MAX_ATTEMPTS: u64 = 1 << 40;

impl NuDeltaLaw {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta.is_finite()) {
            return Err(Error::domain("delta must be positive"));
        }
        Ok(NuDeltaLaw { delta })
    }

    fn normalizer(&self) -> f64 {
        (1.0 + 2.0 * self.delta) * (-2.0 * self.delta).exp()
    }

    pub fn density(&self, v: f64) -> f64 {
        if v <= 0.0 {
            return 0.0;
        }
        let d = self.delta;
        (2.0 * PI).sqrt().recip() * d.powi(3) * v.powf(-2.5) * (-d * d / (2.0 * v) - 2.0 * v).exp()
            / self.normalizer()
    }

    pub fn mean(&self) -> f64 {
        self.delta * self.delta / (1.0 + 2.0 * self.delta)
    }

    /// `E[e^{-β X}]` for `β >= -2`.
    pub fn laplace(&self, beta: f64) -> f64 {
        let s = self.delta * (4.0 + 2.0 * beta).sqrt();
        (1.0 + s) * (-s).exp() / self.normalizer()
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        sample_nu(self.delta, rng)
    }
}

/// Draws from `ν_δ` by tilting the inverse chi-square base.
pub fn sample_nu<R: Rng + ?Sized>(delta: f64, rng: &mut R) -> f64 {
    // Gamma(3/2, rate 1/2) is chi-square with three degrees of freedom
    let base = ChiSquared::new(3.0).unwrap();
    let d2 = delta * delta;
    for _ in 0..MAX_ATTEMPTS {
        let xi = 1.0 / base.sample(rng);
        if rng.gen::<f64>() < (-2.0 * d2 * xi).exp() {
            return d2 * xi;
        }
    }
    unreachable!("acceptance probability is positive")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Quadrature;
    use crate::rng::stream;

    #[test]
    fn density_is_normalized_with_the_right_mean() {
        let q = Quadrature::with_tol(1e-13, 1e-12);
        for d in [0.5, 1.0, 3.0] {
            let law = NuDeltaLaw::new(d).unwrap();
            let mass = q.integrate_to_inf(|v| law.density(v), 0.0).unwrap().value;
            let mean = q.integrate_to_inf(|v| v * law.density(v), 0.0).unwrap().value;
            assert!((mass - 1.0).abs() < 1e-10, "delta {d}: {mass}");
            assert!((mean - law.mean()).abs() < 1e-10);
            let lap = q.integrate_to_inf(|v| (-2.0 * v).exp() * law.density(v), 0.0).unwrap().value;
            assert!((lap - law.laplace(2.0)).abs() < 1e-10);
        }
    }

    #[test]
    fn laplace_example() {
        let law = NuDeltaLaw::new(1.0).unwrap();
        let want = (1.0 + 8f64.sqrt()) * (-(8f64.sqrt())).exp() / (3.0 * (-2f64).exp());
        assert!((law.laplace(2.0) - want).abs() < 1e-15);
        assert!((law.laplace(0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampler_mean() {
        let mut rng = stream(21, 0);
        let n = 50_000;
        let s: f64 = (0..n).map(|_| sample_nu(1.0, &mut rng)).sum();
        assert!((s / n as f64 / (1.0 / 3.0) - 1.0).abs() < 0.02);
    }
}
