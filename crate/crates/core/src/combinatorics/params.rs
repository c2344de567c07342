use rug::Float;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Critical weight `1 / (12 √3)`.
pub const LAMBDA_C: f64 = 0.048_112_522_432_468_816;

const CRITICAL_REL_TOL: f64 = 1e-12;
const LAMBDA_SLACK: f64 = 1e-15;

/// The coupled pair `(λ, h)` with `λ = h / (1 + 8h)^{3/2}`, `h ∈ (0, 1/4]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LambdaParams {
    pub lambda: f64,
    pub h: f64,
    pub is_critical: bool,
}

#[inline]
fn lambda_of_h(h: f64) -> f64 {
    h / (1.0 + 8.0 * h).powf(1.5)
}

/// Solves `λ = h / (1 + 8h)^{3/2}` for `h ∈ (0, 1/4]`.
///
/// The map is increasing on the bracket with a double root at the critical
/// point, so bisection does the bulk of the work and Newton only polishes.
pub fn h_from_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= LAMBDA_C + LAMBDA_SLACK) {
        return Err(Error::domain(format!(
            "lambda = {lambda} outside the admissible interval (0, 1/(12√3)] = (0, {LAMBDA_C}]"
        )));
    }
    if (lambda - LAMBDA_C).abs() <= CRITICAL_REL_TOL * LAMBDA_C {
        return Ok(0.25);
    }
    let (mut lo, mut hi) = (0.0_f64, 0.25_f64);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if lambda_of_h(mid) < lambda {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo < 1e-15 * hi {
            break;
        }
    }
    let mut h = 0.5 * (lo + hi);
    for _ in 0..8 {
        let s = 1.0 + 8.0 * h;
        let g = lambda_of_h(h) - lambda;
        let dg = (1.0 - 4.0 * h) / s.powf(2.5);
        if dg <= 0.0 {
            break;
        }
        let next = (h - g / dg).clamp(lo.min(h), 0.25);
        if (next - h).abs() <= 1e-17 {
            h = next;
            break;
        }
        h = next;
    }
    Ok(h)
}

/// Bits of mantissa used for `digits` significant decimal digits, plus guard bits.
pub fn bits_for_digits(digits: u32) -> u32 {
    (f64::from(digits) * std::f64::consts::LOG2_10).ceil() as u32 + 32
}

impl LambdaParams {
    pub fn critical() -> Self {
        LambdaParams {
            lambda: LAMBDA_C,
            h: 0.25,
            is_critical: true,
        }
    }

    pub fn from_lambda(lambda: f64) -> Result<Self> {
        let h = h_from_lambda(lambda)?;
        if h == 0.25 {
            return Ok(Self::critical());
        }
        Ok(LambdaParams {
            lambda,
            h,
            is_critical: false,
        })
    }

    /// `λ = ratio · λ_c` with `ratio ∈ (0, 1]`.
    pub fn from_ratio(ratio: f64) -> Result<Self> {
        if !(ratio > 0.0 && ratio <= 1.0 + 1e-14) {
            return Err(Error::domain(format!(
                "lambda ratio {ratio} outside (0, 1]"
            )));
        }
        Self::from_lambda(ratio.min(1.0) * LAMBDA_C)
    }

    pub fn from_h(h: f64) -> Result<Self> {
        if !(h > 0.0 && h <= 0.25) {
            return Err(Error::domain(format!("h = {h} outside (0, 1/4]")));
        }
        if (h - 0.25).abs() <= CRITICAL_REL_TOL {
            return Ok(Self::critical());
        }
        Ok(LambdaParams {
            lambda: lambda_of_h(h),
            h,
            is_critical: false,
        })
    }

    /// Near-critical weight `λ_n = λ_c (1 − 2/(3n⁴))`.
    pub fn near_critical(n: u32) -> Result<Self> {
        if n == 0 {
            return Err(Error::domain("near-critical scale n must be positive"));
        }
        let n4 = f64::from(n).powi(4);
        Self::from_ratio(1.0 - 2.0 / (3.0 * n4))
    }

    pub fn ratio(&self) -> f64 {
        self.lambda / LAMBDA_C
    }

    /// Relative residual of `λ (1 + 8h)^{3/2} = h`.
    pub fn residual(&self) -> f64 {
        (lambda_of_h(self.h) - self.lambda).abs() / self.lambda
    }

    /// `(λ, h)` at `bits` of precision.
    ///
    /// The critical pair is exact. Otherwise the binary value of `lambda` is
    /// taken as exact and `h` is refined by Newton from the `f64` root.
    pub fn high_precision(&self, bits: u32) -> (Float, Float) {
        if self.is_critical {
            let lambda = Float::with_val(bits, 1) / (Float::with_val(bits, 3).sqrt() * 12);
            return (lambda, Float::with_val(bits, 0.25));
        }
        let lambda = Float::with_val(bits, self.lambda);
        let mut h = Float::with_val(bits, self.h);
        let eps = Float::with_val(bits, Float::i_exp(1, -(bits as i32) + 4));
        for _ in 0..64 {
            let s: Float = Float::with_val(bits, 1) + Float::with_val(bits, &h * 8u32);
            let s32 = Float::with_val(bits, s.clone().sqrt() * &s);
            let g = Float::with_val(bits, &h / &s32) - &lambda;
            let one_minus = Float::with_val(bits, 1) - Float::with_val(bits, &h * 4u32);
            let dg = one_minus / (s32 * s);
            let step = g / dg;
            h -= &step;
            if step.abs() <= eps {
                break;
            }
        }
        (lambda, h)
    }
}
