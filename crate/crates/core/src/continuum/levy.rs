use std::f64::consts::{PI, SQRT_2};

use rand::Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use serde::{Deserialize, Serialize};
use libm::{erf, erfc};

use super::nu::sample_nu;
use super::path::CadlagPath;
use super::transforms::marginal_mixture_scales;
use crate::error::{Error, Result};

/// `√(3 / (2π))`, the density scale of both jump measures.
pub fn jump_scale() -> f64 {
    (3.0 / (2.0 * PI)).sqrt()
}

/// Mean speed `2√2` of the backward Lévy process.
pub const LEVY_DRIFT: f64 = 2.0 * SQRT_2;

fn gamma_half_upper(y: f64) -> f64 {
    PI.sqrt() * erfc(y.sqrt())
}

fn gamma_m_half_upper(y: f64) -> f64 {
    2.0 * (y.powf(-0.5) * (-y).exp() - gamma_half_upper(y))
}

fn gamma_m_three_halves_upper(y: f64) -> f64 {
    2.0 / 3.0 * (y.powf(-1.5) * (-y).exp() - gamma_m_half_upper(y))
}

fn gamma_half_lower(y: f64) -> f64 {
    PI.sqrt() * erf(y.sqrt())
}

fn gamma_three_halves_lower(y: f64) -> f64 {
    0.5 * gamma_half_lower(y) - y.sqrt() * (-y).exp()
}

/// Jump measure `k (1 + 2x) x^{-5/2} e^{-3x} dx` of the tilted stable process.
#[derive(Debug, Clone, Copy, Default)]
pub struct TiltedJumps;

const SQRT_3: f64 = 1.732_050_807_568_877_2;

impl TiltedJumps {
    pub fn density(x: f64) -> f64 {
        jump_scale() * Self::accept_prob(x) * x.powf(-2.5)
    }

    /// Mass of `[ε, ∞)`.
    pub fn rate(eps: f64) -> f64 {
        let y = 3.0 * eps;
        jump_scale() * (3.0 * SQRT_3 * gamma_m_three_halves_upper(y) + 2.0 * SQRT_3 * gamma_m_half_upper(y))
    }

    /// `∫_ε^∞ x μ(dx)`.
    pub fn first_moment(eps: f64) -> f64 {
        let y = 3.0 * eps;
        jump_scale() * (SQRT_3 * gamma_m_half_upper(y) + 2.0 / SQRT_3 * gamma_half_upper(y))
    }

    /// `∫_0^ε x² μ(dx)`.
    pub fn small_variance(eps: f64) -> f64 {
        let y = 3.0 * eps;
        jump_scale() * (gamma_half_lower(y) / SQRT_3 + 2.0 / (3.0 * SQRT_3) * gamma_three_halves_lower(y))
    }

    /// `∫_0^ε x²/(1+2x) μ(dx)`, the mean volume rate carried by jumps below `ε`.
    pub fn small_volume_rate(eps: f64) -> f64 {
        jump_scale() * (PI / 3.0).sqrt() * erf((3.0 * eps).sqrt())
    }

    /// Rate of Pareto proposals `k x^{-5/2}` on `[ε, ∞)` dominating the measure.
    pub fn proposal_rate(eps: f64) -> f64 {
        jump_scale() * 2.0 / 3.0 * eps.powf(-1.5)
    }

    /// Pareto proposal above `ε`.
    pub fn propose<R: Rng + ?Sized>(eps: f64, rng: &mut R) -> f64 {
        let e: f64 = Exp1.sample(rng);
        eps * (2.0 * e / 3.0).exp()
    }

    pub fn accept_prob(x: f64) -> f64 {
        (1.0 + 2.0 * x) * (-3.0 * x).exp()
    }
}

/// Probability that the backward Lévy process started at `x` never hits zero.
pub fn survival_probability(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else {
        erf((3.0 * x).sqrt())
    }
}

/// Backward Lévy process on `[0, T]` from zero, jumps below `eps_cut`
/// replaced by their compensator and a matched Gaussian.
pub fn simulate_backward_levy<R: Rng + ?Sized>(t_end: f64, eps_cut: f64, rng: &mut R) -> Result<CadlagPath> {
    if !(t_end > 0.0) {
        return Err(Error::domain("horizon must be positive"));
    }
    if !(eps_cut > 0.0 && eps_cut <= 0.1) {
        return Err(Error::domain("eps_cut must lie in (0, 0.1]"));
    }
    let drift = LEVY_DRIFT + TiltedJumps::first_moment(eps_cut);
    let sd = TiltedJumps::small_variance(eps_cut).sqrt();
    let lam = TiltedJumps::proposal_rate(eps_cut);
    let mut path = CadlagPath::new();
    let (mut t, mut x) = (0.0, 0.0);
    path.push(0.0, 0.0, 0.0);
    loop {
        let w: f64 = Exp1.sample(rng);
        let next = t + w / lam;
        let dt = next.min(t_end) - t;
        let z: f64 = StandardNormal.sample(rng);
        x += drift * dt + sd * dt.sqrt() * z;
        t += dt;
        if next >= t_end {
            path.push(t_end, x, 0.0);
            return Ok(path);
        }
        let y = TiltedJumps::propose(eps_cut, rng);
        if rng.gen::<f64>() < TiltedJumps::accept_prob(y) {
            x -= y;
            path.push(t, x, -y);
        }
    }
}

/// Initial condition of the perimeter process.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum PvStart {
    /// Fixed level at radius zero.
    Level(f64),
    /// Exact perimeter marginal at radius `r0`, volume started at zero there.
    Marginal { r0: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PvConfig {
    pub start: PvStart,
    /// Jumps below `eps_cut · level` are compensated.
    pub eps_cut: f64,
    /// Relative change of the level allowed per continuous step.
    pub step: f64,
    /// Above this level hitting zero has probability below `1e-15`.
    pub safe_level: f64,
    pub max_attempts: usize,
    pub record: bool,
}

impl Default for PvConfig {
    fn default() -> Self {
        PvConfig {
            start: PvStart::Marginal { r0: 0.25 },
            eps_cut: 1e-3,
            step: 0.02,
            safe_level: 12.0,
            max_attempts: 100_000,
            record: false,
        }
    }
}

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct PvSample {
    pub perimeter: f64,
    pub volume: f64,
    pub attempts: usize,
    pub p_path: CadlagPath,
    pub v_path: CadlagPath,
}

/// Perimeter and volume of the hyperbolic hull up to radius `t_end`, from the
/// Lamperti time change of the backward Lévy process conditioned to stay positive.
pub fn simulate_pv<R: Rng + ?Sized>(t_end: f64, cfg: &PvConfig, rng: &mut R) -> Result<PvSample> {
    if !(cfg.eps_cut > 0.0 && cfg.eps_cut <= 0.1) {
        return Err(Error::domain("eps_cut must lie in (0, 0.1]"));
    }
    let (x0, r0) = match cfg.start {
        PvStart::Level(x) if x > 0.0 => (x, 0.0),
        PvStart::Level(_) => return Err(Error::domain("start level must be positive")),
        PvStart::Marginal { r0 } if r0 > 0.0 && r0 < t_end => {
            let (a, b) = marginal_mixture_scales(r0);
            let e: f64 = Exp1.sample(rng);
            let g: f64 = StandardNormal.sample(rng);
            (a * e + b * 0.5 * g * g, r0)
        }
        PvStart::Marginal { .. } => return Err(Error::domain("marginal start radius must lie in (0, T)")),
    };
    if !(t_end > r0) {
        return Err(Error::domain("horizon must exceed the start radius"));
    }
    for attempt in 1..=cfg.max_attempts {
        if let Some(mut s) = pv_attempt(x0, r0, t_end, cfg, rng) {
            s.attempts = attempt;
            return Ok(s);
        }
    }
    Err(Error::RejectionBudget {
        attempts: cfg.max_attempts,
        hint: format!("start level {x0:.3e} too close to zero; use a larger start"),
    })
}

fn pv_attempt<R: Rng + ?Sized>(x0: f64, r0: f64, t_end: f64, cfg: &PvConfig, rng: &mut R) -> Option<PvSample> {
    let mut out = PvSample::default();
    let (mut x, mut r, mut v) = (x0, r0, 0.0);
    let mut safe = x >= cfg.safe_level;
    if cfg.record {
        out.p_path.push(r, x, 0.0);
        out.v_path.push(r, v, 0.0);
    }
    let mut next_jump = f64::NAN;
    loop {
        let eps = cfg.eps_cut * x;
        let drift = LEVY_DRIFT + TiltedJumps::first_moment(eps);
        let var = TiltedJumps::small_variance(eps);
        let lam = TiltedJumps::proposal_rate(eps);
        let dt_max = (cfg.step * x / drift).min(cfg.step * cfg.step * x * x / var);
        // the proposal clock is memoryless, so it is redrawn whenever rates change
        if next_jump.is_nan() {
            let w: f64 = Exp1.sample(rng);
            next_jump = w / lam;
        }
        let dt = dt_max.min(next_jump);
        let z: f64 = StandardNormal.sample(rng);
        let y = x + drift * dt + (var * dt).sqrt() * z;
        if y <= 0.0 && !safe {
            return None;
        }
        let y = y.max(f64::MIN_POSITIVE);
        let dr = 0.5 * dt * (1.0 / x + 1.0 / y);
        if r + dr >= t_end {
            // survival beyond the horizon has probability erf(√(3x))
            if !safe && rng.gen::<f64>() >= survival_probability(y) {
                return None;
            }
            let f = (t_end - r) / dr;
            out.perimeter = x + f * (y - x);
            out.volume = v + f * dt * TiltedJumps::small_volume_rate(eps);
            if cfg.record {
                out.p_path.push(t_end, out.perimeter, 0.0);
                out.v_path.push(t_end, out.volume, 0.0);
            }
            return Some(out);
        }
        r += dr;
        x = y;
        v += dt * TiltedJumps::small_volume_rate(eps);
        safe |= x >= cfg.safe_level;
        if dt < next_jump {
            next_jump = f64::NAN;
            if cfg.record {
                out.p_path.push(r, x, 0.0);
                out.v_path.push(r, v, 0.0);
            }
            continue;
        }
        next_jump = f64::NAN;
        let size = TiltedJumps::propose(eps, rng);
        if rng.gen::<f64>() >= TiltedJumps::accept_prob(size) {
            continue;
        }
        x -= size;
        if x <= 0.0 {
            if !safe {
                return None;
            }
            x = f64::MIN_POSITIVE;
        }
        let mark = sample_nu(size, rng);
        v += mark;
        if cfg.record {
            out.p_path.push(r, x, -size);
            out.v_path.push(r, v, mark);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quad::Quadrature;
    use crate::rng::stream;

    #[test]
    fn closed_forms_match_quadrature() {
        let q = Quadrature::with_tol(1e-14, 1e-12);
        for eps in [1e-4, 1e-2, 0.3, 2.0] {
            let rate = q.integrate_to_inf(TiltedJumps::density, eps).unwrap().value;
            let m1 = q.integrate_to_inf(|x| x * TiltedJumps::density(x), eps).unwrap().value;
            // x = s² removes the x^{-1/2} singularity
            let var = q
                .integrate(|s| 2.0 * s.powi(5) * TiltedJumps::density(s * s), 0.0, eps.sqrt())
                .unwrap()
                .value;
            let vol = q
                .integrate(
                    |s| 2.0 * s.powi(5) / (1.0 + 2.0 * s * s) * TiltedJumps::density(s * s),
                    0.0,
                    eps.sqrt(),
                )
                .unwrap()
                .value;
            assert!((rate / TiltedJumps::rate(eps) - 1.0).abs() < 1e-9, "eps {eps}");
            assert!((m1 / TiltedJumps::first_moment(eps) - 1.0).abs() < 1e-9);
            assert!((var / TiltedJumps::small_variance(eps) - 1.0).abs() < 1e-9);
            assert!((vol / TiltedJumps::small_volume_rate(eps) - 1.0).abs() < 1e-9);
        }
    }

    #[test]
    fn levy_exponent_matches_jump_measure() {
        // ∫(e^{-ux} - 1 + ux) μ(dx) + 2√2 u = √(8/3) u √(u+3)
        let q = Quadrature::with_tol(1e-13, 1e-12);
        for u in [0.5, 1.0, 3.0] {
            // x = e^s keeps the cancellation near zero accurate
            let f = |s: f64| {
                let x = s.exp();
                let z = u * x;
                let c = if z > 1e-2 {
                    (-z).exp_m1() + z
                } else {
                    (2..14).fold((0.0, 1.0), |(acc, t), n| {
                        let t = t * -z / n as f64;
                        (acc + t * -z, t)
                    }).0
                };
                c * TiltedJumps::density(x) * x
            };
            let i = q.integrate(f, -60.0, 0.0).unwrap().value + q.integrate(f, 0.0, 4.0).unwrap().value;
            let psi = (8.0f64 / 3.0).sqrt() * u * (u + 3.0).sqrt();
            assert!((i + LEVY_DRIFT * u - psi).abs() < 1e-9, "u {u}");
        }
    }

    #[test]
    fn backward_levy_mean() {
        let mut rng = stream(4, 0);
        let n = 20_000;
        let vals: Vec<f64> = (0..n)
            .map(|_| simulate_backward_levy(1.0, 1e-3, &mut rng).unwrap().last_value().unwrap())
            .collect();
        let m = vals.iter().sum::<f64>() / n as f64;
        let sd = (vals.iter().map(|v| (v - m).powi(2)).sum::<f64>() / (n - 1) as f64).sqrt();
        assert!((m - LEVY_DRIFT).abs() < 4.0 * sd / (n as f64).sqrt(), "mean {m}");
    }

    #[test]
    fn pv_paths_are_positive() {
        let mut rng = stream(8, 0);
        let cfg = PvConfig {
            record: true,
            ..PvConfig::default()
        };
        for _ in 0..20 {
            let s = simulate_pv(1.0, &cfg, &mut rng).unwrap();
            assert!(s.p_path.values.iter().all(|&v| v > 0.0));
            assert!(s.p_path.jumps().all(|(_, j)| j < 0.0));
            assert!(s.v_path.jumps().all(|(_, j)| j > 0.0));
            assert!(s.perimeter > 0.0 && s.volume >= 0.0);
        }
    }

    #[test]
    fn survival_matches_rejection() {
        let mut rng = stream(9, 0);
        let n = 4000;
        let x0 = 0.3;
        let mut alive = 0;
        for _ in 0..n {
            let (mut x, mut t) = (x0, 0.0);
            let eps = 1e-3;
            let drift = LEVY_DRIFT + TiltedJumps::first_moment(eps);
            let sd = TiltedJumps::small_variance(eps).sqrt();
            let lam = TiltedJumps::proposal_rate(eps);
            let dt = 1e-3;
            while x > 0.0 && x < 12.0 && t < 50.0 {
                let z: f64 = StandardNormal.sample(&mut rng);
                x += drift * dt + sd * dt.sqrt() * z;
                let mut left = dt;
                loop {
                    let w: f64 = Exp1.sample(&mut rng);
                    if w / lam > left {
                        break;
                    }
                    left -= w / lam;
                    let y = TiltedJumps::propose(eps, &mut rng);
                    if rng.gen::<f64>() < TiltedJumps::accept_prob(y) {
                        x -= y;
                    }
                }
                t += dt;
            }
            if x > 0.0 {
                alive += 1;
            }
        }
        let p = alive as f64 / n as f64;
        let se = (p * (1.0 - p) / n as f64).sqrt();
        assert!((p - survival_probability(x0)).abs() < 4.0 * se + 0.01, "p {p}");
    }
}
