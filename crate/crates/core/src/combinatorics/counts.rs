use rug::{Float, Integer};

use super::params::LAMBDA_C;
use crate::error::{Error, Result};

fn product(terms: &[Integer]) -> Integer {
    match terms.len() {
        0 => Integer::from(1),
        1 => terms[0].clone(),
        n => {
            let (a, b) = terms.split_at(n / 2);
            product(a) * product(b)
        }
    }
}

/// `p (2p)! / (p!)²`, the boundary factor shared by the exact count and the
/// Markov constant.
pub fn boundary_factor(p: u64) -> Integer {
    Integer::from(p) * Integer::from(Integer::binomial_u(2 * p as u32, p as u32))
}

/// Exact number of rooted triangulations of the `p`-gon with `n` inner vertices.
///
/// The only parameter pair needing a double factorial of a negative odd
/// number below `-1` is `(n, p) = (0, 1)`, which is reported as a convention hole.
pub fn count_triangulations(n: u64, p: u64) -> Result<Integer> {
    if p == 0 {
        return Err(Error::domain("perimeter must be at least 1"));
    }
    if n == 0 && p == 1 {
        return Err(Error::ConventionHole { n, p, arg: -3 });
    }
    let mut num = boundary_factor(p);
    let mut den = Integer::from(Integer::factorial(n as u32));
    // 4^{n-1}
    if n == 0 {
        den *= 4;
    } else {
        num <<= 2 * (n as u32 - 1);
    }
    // (2p+3n-5)!! / (2p+n-1)!!
    match n {
        0 => den *= Integer::from(2 * p - 1) * Integer::from(2 * p - 3),
        1 => den *= 2 * p,
        _ => {
            let terms: Vec<Integer> = (0..n - 2)
                .map(|k| Integer::from(2 * p + n + 1 + 2 * k))
                .collect();
            num *= product(&terms);
        }
    }
    let (q, r) = num.div_rem(den);
    if r != 0 {
        return Err(Error::Invalid(format!(
            "non-integral count at (n, p) = ({n}, {p})"
        )));
    }
    Ok(q)
}

/// Natural log of an exact integer.
pub fn ln_integer(x: &Integer) -> f64 {
    let bits = x.significant_bits().max(64) + 64;
    Float::with_val(bits, x).ln().to_f64()
}

/// Boundary constant in the fixed-perimeter asymptotics,
/// `3^{p-2} p (2p)! / (4 √(2π) (p!)²)`, returned as its natural log.
pub fn ln_boundary_constant(p: u64) -> f64 {
    (p as f64 - 2.0) * 3f64.ln() + ln_integer(&boundary_factor(p))
        - (4.0 * (2.0 * std::f64::consts::PI).sqrt()).ln()
}

/// Log of the fixed-`p` large-`n` asymptotic `C(p) λ_c^{-n} n^{-5/2}`.
pub fn ln_fixed_perimeter_asymptotic(n: u64, p: u64) -> f64 {
    let n = n as f64;
    ln_boundary_constant(p) - n * LAMBDA_C.ln() - 2.5 * n.ln()
}

/// Log of the joint-regime asymptotic
/// `(36π√2)^{-1} λ_c^{-n} n^{-5/2} 12^p √p exp(-2p²/(3n))`.
pub fn ln_joint_asymptotic(n: u64, p: u64) -> f64 {
    let (nf, pf) = (n as f64, p as f64);
    -(36.0 * std::f64::consts::PI * 2f64.sqrt()).ln() - nf * LAMBDA_C.ln() - 2.5 * nf.ln()
        + pf * 12f64.ln()
        + 0.5 * pf.ln()
        - 2.0 * pf * pf / (3.0 * nf)
}

/// Log of the sphere asymptotic `#T_{n-1,1} ≈ (72 √(6π))^{-1} λ_c^{-n} n^{-5/2}`.
pub fn ln_sphere_asymptotic(n: u64) -> f64 {
    let nf = n as f64;
    -(72.0 * (6.0 * std::f64::consts::PI).sqrt()).ln() - nf * LAMBDA_C.ln() - 2.5 * nf.ln()
}

/// `count / asymptotic` computed in log space.
pub fn asymptotic_ratio(count: &Integer, ln_asymptotic: f64) -> f64 {
    (ln_integer(count) - ln_asymptotic).exp()
}
