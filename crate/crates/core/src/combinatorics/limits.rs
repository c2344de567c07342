use crate::error::{Error, Result};
use crate::quad::Quadrature;

/// Rescaled partial sum `p_n^{-1/2} Σ_{q<p_n} binom(2q,q) h_n^q` and its
/// limit `(2/√π) ∫₀¹ e^{-3px²} dx`.
pub fn central_binomial_sum_limit(p: f64, p_n: u64, h_n: f64) -> Result<(f64, f64)> {
    if p_n == 0 || !(h_n > 0.0 && h_n <= 0.25) || !(p >= 0.0) {
        return Err(Error::domain("need p >= 0, p_n >= 1 and h_n in (0, 1/4]"));
    }
    let mut term = 1.0_f64;
    let mut sum = 0.0_f64;
    let mut comp = 0.0_f64;
    for q in 0..p_n {
        if q > 0 {
            let qf = q as f64;
            term *= h_n * 2.0 * (2.0 * qf - 1.0) / qf;
        }
        // Kahan summation, the sum has up to ~10^6 comparable terms
        let y = term - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
    let finite = sum / (p_n as f64).sqrt();
    let quad = Quadrature::with_tol(1e-13, 1e-13);
    let integral = quad.integrate(|x| (-3.0 * p * x * x).exp(), 0.0, 1.0)?.value;
    Ok((finite, 2.0 / std::f64::consts::PI.sqrt() * integral))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seq(n: u64) -> (u64, f64) {
        let nf = n as f64;
        ((1.5 * nf * nf).ceil() as u64, 0.25 - 1.0 / (2.0 * nf * nf))
    }

    #[test]
    fn zero_parameter_limit() {
        let (_, l) = central_binomial_sum_limit(0.0, 10, 0.25).unwrap();
        assert!((l - std::f64::consts::FRAC_2_SQRT_PI).abs() < 1e-14);
    }

    #[test]
    fn converges_monotonically() {
        let mut gaps = Vec::new();
        for n in [50, 100, 200] {
            let (pn, hn) = seq(n);
            let (f, l) = central_binomial_sum_limit(1.0, pn, hn).unwrap();
            gaps.push((f - l).abs() / l);
        }
        assert!(gaps[2] < 0.02, "{gaps:?}");
        assert!(gaps[0] > gaps[1] && gaps[1] > gaps[2], "{gaps:?}");
    }
}
