use std::f64::consts::PI;

use libm::tgamma as gamma;

use super::levy::jump_scale;
use crate::error::Result;
use crate::quad::Quadrature;

/// Density of the volume-mark mixing law, `(2π y⁵)^{-1/2} e^{-1/(2y)}`.
pub fn mark_density(y: f64) -> f64 {
    if y <= 0.0 {
        0.0
    } else {
        (2.0 * PI * y.powi(5)).powf(-0.5) * (-0.5 / y).exp()
    }
}

/// Constant `c` announced for the tail `σ([ε, ∞)) = c ε^{-3/4}`.
pub fn stated_tail_constant() -> f64 {
    2f64.powf(0.25) * gamma(0.75) / (PI * 3f64.sqrt())
}

/// Constant obtained by integrating the product measure in closed form.
pub fn computed_tail_constant() -> f64 {
    2f64.powf(0.75) * gamma(0.75) / (PI * 3f64.sqrt())
}

/// `σ([ε, ∞))` by nested quadrature of `1{x² y ≥ ε}` against the stable jump
/// measure in `x` and the mark law in `y`.
pub fn sigma_tail(eps: f64) -> Result<f64> {
    let q = Quadrature::with_tol(1e-13, 1e-11);
    let k = jump_scale();
    // y = e^u, x = a e^w with a = √(ε / y)
    let outer = |u: f64| -> f64 {
        let y = u.exp();
        let a = (eps / y).sqrt();
        let inner = |w: f64| k * (a * w.exp()).powf(-1.5);
        let mass = q.integrate_to_inf(inner, 0.0).map(|e| e.value).unwrap_or(f64::NAN);
        mass * mark_density(y) * y
    };
    let lo = q.integrate(outer, -8.0, 0.0)?.value;
    let hi = q.integrate(outer, 0.0, 40.0)?.value;
    Ok(lo + hi)
}
