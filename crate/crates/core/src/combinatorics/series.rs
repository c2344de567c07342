use rug::{Float, Integer, Rational};

use super::params::{bits_for_digits, LambdaParams};
use crate::error::{Error, Result};

/// Radius of the square-root branch point, `1 / (4 (1 + 8h))`.
pub fn branch_point(params: &LambdaParams) -> f64 {
    0.25 / (1.0 + 8.0 * params.h)
}

/// Boundary generating function `Σ_p Z_p x^p` in closed form.
pub fn boundary_gf(params: &LambdaParams, x: f64) -> Result<f64> {
    if x.abs() >= branch_point(params) {
        return Err(Error::domain(format!(
            "|x| = {} outside radius {}",
            x.abs(),
            branch_point(params)
        )));
    }
    let (l, h) = (params.lambda, params.h);
    let a = (1.0 + 8.0 * h) / h;
    let b = 4.0 * (1.0 + 8.0 * h);
    Ok(0.5 * l * ((1.0 - a * x) * (1.0 - b * x).sqrt() - 1.0 + x / l))
}

/// Generating function `Σ_p C_p x^p` in closed form.
pub fn markov_gf(params: &LambdaParams, x: f64) -> Result<f64> {
    let h = params.h;
    let pole = h / (1.0 + 8.0 * h);
    let radius = branch_point(params).min(pole);
    if x.abs() >= radius {
        return Err(Error::domain(format!("|x| = {} outside radius {radius}", x.abs())));
    }
    let a = (1.0 + 8.0 * h) / h;
    let b = 4.0 * (1.0 + 8.0 * h);
    let c1 = 1.0 / params.lambda;
    Ok(c1 * x / ((1.0 - a * x) * (1.0 - b * x).sqrt()))
}

/// `binom(α, k) (-1)^k` for `k = 0..=n`, exact.
fn signed_binomials(alpha: &Rational, n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut c = Rational::from(1);
    out.push(c.clone());
    for k in 1..=n {
        // binom(α,k)(-1)^k = binom(α,k-1)(-1)^{k-1} * (k-1-α)/k
        let factor = (Rational::from(k as i64 - 1) - alpha) / Rational::from(k as i64);
        c *= factor;
        out.push(c.clone());
    }
    out
}

/// `[x^p]` of the boundary generating function at fixed weight, for `p = 0..=order`.
pub fn boundary_gf_coefficients(params: &LambdaParams, order: usize, digits: u32) -> Vec<Float> {
    let bits = bits_for_digits(digits);
    let (lambda, h) = params.high_precision(bits);
    let s = Float::with_val(bits, 1) + Float::with_val(bits, &h * 8u32);
    let b = Float::with_val(bits, &s * 4u32);
    let a = Float::with_val(bits, &s / &h);
    let binoms = signed_binomials(&Rational::from((1, 2)), order);
    let mut sq = Vec::with_capacity(order + 1);
    let mut bp = Float::with_val(bits, 1);
    for c in &binoms {
        sq.push(Float::with_val(bits, c * &bp));
        bp *= &b;
    }
    let half_l = Float::with_val(bits, &lambda / 2u32);
    let mut out = vec![Float::with_val(bits, 0)];
    for p in 1..=order {
        let mut v = Float::with_val(bits, &sq[p] - Float::with_val(bits, &a * &sq[p - 1]));
        v *= &half_l;
        if p == 1 {
            v += 0.5;
        }
        out.push(v);
    }
    out
}

/// `[x^p]` of the Markov-constant generating function at fixed weight.
pub fn markov_gf_coefficients(params: &LambdaParams, order: usize, digits: u32) -> Vec<Float> {
    let bits = bits_for_digits(digits);
    let (lambda, h) = params.high_precision(bits);
    let s = Float::with_val(bits, 1) + Float::with_val(bits, &h * 8u32);
    let b = Float::with_val(bits, &s * 4u32);
    let a = Float::with_val(bits, &s / &h);
    let binoms = signed_binomials(&Rational::from((-1, 2)), order);
    let mut inv_sq = Vec::with_capacity(order + 1);
    let mut bp = Float::with_val(bits, 1);
    for c in &binoms {
        inv_sq.push(Float::with_val(bits, c * &bp));
        bp *= &b;
    }
    let c1 = Float::with_val(bits, lambda.recip_ref());
    // 1/((1-ax)√(1-bx)) coefficients by the running recursion d_k = a d_{k-1} + t_k
    let mut d = Float::with_val(bits, 0);
    let mut out = vec![Float::with_val(bits, 0)];
    for t in inv_sq.iter().take(order) {
        d = Float::with_val(bits, &d * &a) + t;
        out.push(Float::with_val(bits, &d * &c1));
    }
    out
}

type Series = Vec<Rational>;

fn mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![Rational::new(); n + 1];
    for (i, x) in a.iter().enumerate().take(n + 1) {
        if *x == 0 {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n + 1 - i) {
            out[i + j] += Rational::from(x * y);
        }
    }
    out
}

/// `s^α` for a series with `s_0 = 1`.
fn pow_series(s: &Series, alpha: &Rational, n: usize) -> Series {
    let mut y = vec![Rational::new(); n + 1];
    y[0] = Rational::from(1);
    for k in 1..=n {
        let mut acc = Rational::new();
        for j in 1..=k.min(s.len() - 1) {
            let coef = (alpha * Rational::from(j as i64)) - Rational::from((k - j) as i64);
            acc += coef * Rational::from(&s[j] * &y[k - j]);
        }
        y[k] = acc / Rational::from(k as i64);
    }
    y
}

/// Exact counts `#T_{n,p}` for `n ≤ n_max`, `1 ≤ p ≤ p_max`, read off the
/// boundary generating function as a power series in the weight.
///
/// Returned as `table[p - 1][n]`. Independent of the closed-form count.
pub fn count_series_oracle(n_max: usize, p_max: usize) -> Result<Vec<Vec<Integer>>> {
    let n = n_max + 1;
    let lambda: Series = {
        let mut v = vec![Rational::new(); n + 1];
        v[1] = Rational::from(1);
        v
    };
    let three_halves = Rational::from((3, 2));
    let one_plus_8 = |h: &Series| {
        let mut s: Series = h.iter().map(|c| Rational::from(c * 8)).collect();
        s[0] += 1;
        s
    };
    let mut h = vec![Rational::new(); n + 1];
    for _ in 0..=n {
        let u = pow_series(&one_plus_8(&h), &three_halves, n);
        h = mul(&lambda, &u, n);
    }
    let s = one_plus_8(&h);
    let u = pow_series(&s, &three_halves, n);
    let inv_u = pow_series(&u, &Rational::from(-1), n);
    // λ a = 1/u + 8λ
    let mut la = inv_u;
    la[1] += 8;
    let sq = signed_binomials(&Rational::from((1, 2)), p_max);
    let four_pow = |k: usize| Rational::from(Integer::from(1) << (2 * k as u32));
    let mut s_pow = vec![vec![Rational::new(); n + 1]];
    s_pow[0][0] = Rational::from(1);
    for k in 1..=p_max {
        let next = mul(&s_pow[k - 1], &s, n);
        s_pow.push(next);
    }
    let mut table = Vec::with_capacity(p_max);
    for p in 1..=p_max {
        let mut z = vec![Rational::new(); n + 1];
        let cp = (&sq[p] * four_pow(p)) / 2;
        for (i, c) in s_pow[p].iter().enumerate().take(n) {
            z[i + 1] += Rational::from(c * &cp);
        }
        let cq = (&sq[p - 1] * four_pow(p - 1)) / 2;
        let second = mul(&la, &s_pow[p - 1], n);
        for i in 0..=n {
            z[i] -= Rational::from(&second[i] * &cq);
        }
        if p == 1 {
            z[0] += Rational::from((1, 2));
        }
        let mut row = Vec::with_capacity(n_max + 1);
        for (i, c) in z.into_iter().take(n_max + 1).enumerate() {
            if *c.denom() != 1 {
                return Err(Error::Invalid(format!("non-integral coefficient at (n, p) = ({i}, {p})")));
            }
            row.push(c.into_numer_denom().0);
        }
        table.push(row);
    }
    Ok(table)
}

#[cfg(test)]
mod tests {
    use super::super::counts::count_triangulations;
    use super::super::tables::{markov_constant_hp, BoltzmannTables};
    use super::*;

    #[test]
    fn series_oracle_matches_closed_form_counts() {
        let table = count_series_oracle(12, 8).unwrap();
        assert_eq!(table[0][0], 0);
        assert_eq!(table[0][1], 1);
        assert_eq!(table[0][2], 4);
        for p in 1..=8u64 {
            for n in 0..=12u64 {
                if (n, p) == (0, 1) {
                    continue;
                }
                let exact = count_triangulations(n, p).unwrap();
                assert_eq!(table[p as usize - 1][n as usize], exact, "(n, p) = ({n}, {p})");
            }
        }
    }

    #[test]
    fn coefficients_match_tables() {
        for ratio in [1.0, 0.6] {
            let params = LambdaParams::from_ratio(ratio).unwrap();
            let t = BoltzmannTables::new(params, 30, 50).unwrap();
            let g = boundary_gf_coefficients(&params, 30, 50);
            let f = markov_gf_coefficients(&params, 30, 50);
            for p in 1..=30 {
                let rz = ((g[p].clone() - t.z(p)) / t.z(p)).abs().to_f64();
                let rc = ((f[p].clone() - t.c(p)) / t.c(p)).abs().to_f64();
                assert!(rz < 1e-40 && rc < 1e-40, "p = {p}: {rz} {rc}");
            }
        }
    }

    #[test]
    fn closed_forms_match_partial_sums() {
        let params = LambdaParams::from_ratio(0.8).unwrap();
        let x = 0.5 * branch_point(&params).min(params.h / (1.0 + 8.0 * params.h));
        let g = boundary_gf_coefficients(&params, 200, 30);
        let sum: f64 = g.iter().enumerate().map(|(p, c)| c.to_f64() * x.powi(p as i32)).sum();
        assert!((sum - boundary_gf(&params, x).unwrap()).abs() < 1e-13);
        let c2 = markov_constant_hp(&params, 2, 30).unwrap().to_f64();
        let f = markov_gf_coefficients(&params, 200, 30);
        assert!((f[2].to_f64() - c2).abs() < 1e-12 * c2);
        let sum: f64 = f.iter().enumerate().map(|(p, c)| c.to_f64() * x.powi(p as i32)).sum();
        let cf = markov_gf(&params, x).unwrap();
        assert!((sum - cf).abs() < 1e-12 * cf.abs());
        assert!(boundary_gf(&params, 1.0).is_err());
    }
}
