use std::f64::consts::{PI, SQRT_2};

use crate::error::{Error, Result};
use crate::quad::Quadrature;

fn sqrt_8_3() -> f64 {
    (8.0f64 / 3.0).sqrt()
}

/// `e^{-2v} e^{p} ∫₀¹ e^{-3px²} dx`.
pub fn phi(p: f64, v: f64) -> Result<f64> {
    if !(p >= 0.0 && v >= 0.0) {
        return Err(Error::domain("phi needs p, v >= 0"));
    }
    let q = Quadrature::with_tol(1e-13, 1e-13);
    let i = q.integrate(|x| (-3.0 * p * x * x).exp(), 0.0, 1.0)?.value;
    Ok((p - 2.0 * v).exp() * i)
}

/// `∫₀¹ e^{-3px²} dx` through the error function.
pub fn phi_integral_closed_form(p: f64) -> f64 {
    if p == 0.0 {
        return 1.0;
    }
    let s = (3.0 * p).sqrt();
    PI.sqrt() / (2.0 * s) * libm::erf(s)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchingMechanisms {
    pub psi_stable: f64,
    pub psi_tilted: f64,
    pub psi_m: f64,
}

/// Stable, tilted and martingale exponents at `u >= 0`.
pub fn branching_mechanisms(u: f64) -> Result<BranchingMechanisms> {
    if !(u >= 0.0) {
        return Err(Error::domain("branching mechanisms need u >= 0"));
    }
    let c = sqrt_8_3();
    Ok(BranchingMechanisms {
        psi_stable: c * u.powf(1.5),
        psi_tilted: psi_tilted(u),
        psi_m: c * (u * u + u - 2.0) / (u + 2.0).sqrt(),
    })
}

pub fn psi_tilted(u: f64) -> f64 {
    sqrt_8_3() * u * (u + 3.0).sqrt()
}

/// Closed-form solution `3 / sinh²(asinh(√(3/λ)) + √2 t)` of `u' = -ψ(u)`, `u_0 = λ`.
pub fn csbp_marginal(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda > 0.0 && t >= 0.0) {
        return Err(Error::domain("csbp marginal needs lambda > 0, t >= 0"));
    }
    if t == 0.0 {
        return Ok(lambda);
    }
    let s = ((3.0 / lambda).sqrt().asinh() + SQRT_2 * t).sinh();
    Ok(3.0 / (s * s))
}

/// Classical RK4 for `u' = -ψ(u)` with step `h`; returns the values on the grid.
pub fn csbp_rk4(lambda: f64, t_max: f64, h: f64) -> Vec<(f64, f64)> {
    let f = |u: f64| -psi_tilted(u.max(0.0));
    let steps = (t_max / h).ceil() as usize;
    let h = t_max / steps as f64;
    let mut u = lambda;
    let mut out = Vec::with_capacity(steps + 1);
    out.push((0.0, u));
    for k in 0..steps {
        let k1 = f(u);
        let k2 = f(u + 0.5 * h * k1);
        let k3 = f(u + 0.5 * h * k2);
        let k4 = f(u + h * k3);
        u += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        out.push(((k + 1) as f64 * h, u));
    }
    out
}

/// Extinction-time densities `(Φ^h_t(x), Φ_t(x))` of the tilted and critical CSBPs.
pub fn extinction_densities(x: f64, t: f64) -> Result<(f64, f64)> {
    if !(x > 0.0 && t > 0.0) {
        return Err(Error::domain("extinction densities need x, t > 0"));
    }
    let a = SQRT_2 * t;
    let (s, c) = (a.sinh(), a.cosh());
    let tilted = 6.0 * SQRT_2 * x * c / (s * s * s) * (-3.0 * x / (s * s)).exp();
    let crit = 3.0 * x / (t * t * t) * (-3.0 * x / (2.0 * t * t)).exp();
    Ok((tilted, crit))
}

/// `P(extinct by t)` for the tilted CSBP from `x`, `exp(-3x / sinh²(√2 t))`.
pub fn extinction_cdf(x: f64, t: f64) -> f64 {
    let s = (SQRT_2 * t).sinh();
    (-3.0 * x / (s * s)).exp()
}

/// Laplace transform of the hull perimeter marginal.
pub fn marginal_transform_x(lambda: f64, t: f64) -> Result<f64> {
    if !(lambda >= 0.0 && t >= 0.0) {
        return Err(Error::domain("marginal transform needs lambda, t >= 0"));
    }
    let a = SQRT_2 * t;
    let (s, th) = (a.sinh(), a.tanh());
    Ok(1.0 / (1.0 + lambda / 3.0 * s * s) / (1.0 + lambda / 3.0 * th * th).sqrt())
}

/// Scales `(a, b)` such that the perimeter at `t` is `a E + b G`,
/// `E ~ Exp(1)`, `G ~ Gamma(1/2, 1)`.
pub fn marginal_mixture_scales(t: f64) -> (f64, f64) {
    let a = SQRT_2 * t;
    (a.sinh().powi(2) / 3.0, a.tanh().powi(2) / 3.0)
}

/// Joint Laplace transform `E[exp(-λ P_r - μ V_r)]` of the hyperbolic hull.
pub fn joint_transform(lambda: f64, mu: f64, r: f64) -> Result<f64> {
    if !(mu >= 0.0 && r >= 0.0) {
        return Err(Error::domain("joint transform needs mu, r >= 0"));
    }
    let s = (2.0 * mu + 4.0).sqrt();
    let q = s.sqrt() * r;
    let b1 = 1.0 + (2.0 * lambda - 2.0 + s) / (3.0 * s) * q.sinh().powi(2);
    let b2 = 1.0 + (2.0 * lambda + 4.0 - 2.0 * s) / (3.0 * s) * q.tanh().powi(2);
    if !(b1 > 0.0 && b2 > 0.0) {
        return Err(Error::domain(format!(
            "joint transform diverges at (lambda, mu, r) = ({lambda}, {mu}, {r})"
        )));
    }
    Ok(1.0 / (b1 * b2.sqrt()))
}

/// Joint Laplace transform of hull perimeter and volume of the critical plane.
pub fn plane_hull_transform(lambda: f64, mu: f64, r: f64) -> Result<f64> {
    if !(mu >= 0.0 && r > 0.0) {
        return Err(Error::domain("plane hull transform needs mu >= 0, r > 0"));
    }
    let base = if mu == 0.0 {
        1.0 + 2.0 * lambda * r * r / 3.0
    } else {
        let k = (2.0 * mu).powf(0.25);
        let kr = k * r;
        let coth = 1.0 / kr.tanh();
        let pre = kr.powi(3) * kr.cosh() / kr.sinh().powi(3);
        let inner = lambda + (mu / 2.0).sqrt() * (3.0 * coth * coth - 2.0) - 1.5 / (r * r);
        let b = 1.0 + 2.0 * r * r / 3.0 * inner;
        if !(b > 0.0) {
            return Err(Error::domain("plane hull transform diverges"));
        }
        return Ok(pre * b.powf(-1.5));
    };
    if !(base > 0.0) {
        return Err(Error::domain("plane hull transform diverges"));
    }
    Ok(base.powf(-1.5))
}

/// `∫₀¹ joint_transform(3x² − 1, 2, r) dx`.
pub fn check_mass(r: f64) -> Result<f64> {
    mass_integral(|x| joint_transform(3.0 * x * x - 1.0, 2.0, r))
}

/// `∫₀¹ plane_hull_transform(3x² − 1, 2, r) dx`, which is `E[φ(P_r, V_r)]`
/// for the critical plane hull.
pub fn check_mass_plane(r: f64) -> Result<f64> {
    mass_integral(|x| plane_hull_transform(3.0 * x * x - 1.0, 2.0, r))
}

fn mass_integral<F: Fn(f64) -> Result<f64>>(f: F) -> Result<f64> {
    let err = std::cell::RefCell::new(None);
    let q = Quadrature::with_tol(1e-12, 1e-12);
    let v = q
        .integrate(
            |x| match f(x) {
                Ok(v) => v,
                Err(e) => {
                    err.borrow_mut().get_or_insert(e);
                    f64::NAN
                }
            },
            0.0,
            1.0,
        )
        .map(|e| e.value);
    match err.into_inner() {
        Some(e) => Err(e),
        None => v,
    }
}

/// `(1 + λ/12 + μ/48)^{-1}`, the transform of the large-radius limit.
pub fn limiting_transform(lambda: f64, mu: f64) -> f64 {
    1.0 / (1.0 + lambda / 12.0 + mu / 48.0)
}

/// `joint_transform(λ e^{-2√2 r}, μ e^{-2√2 r}, r)`.
pub fn rescaled_joint_transform(lambda: f64, mu: f64, r: f64) -> Result<f64> {
    let s = (-2.0 * SQRT_2 * r).exp();
    joint_transform(lambda * s, mu * s, r)
}
