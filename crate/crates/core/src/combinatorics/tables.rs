use std::path::Path;

use rug::ops::Pow;
use rug::Float;
use serde::{Deserialize, Serialize};

use super::counts::boundary_factor;
use super::params::{bits_for_digits, LambdaParams};
use crate::error::{Error, Result};

pub const DEFAULT_DIGITS: u32 = 60;

fn one(bits: u32) -> Float {
    Float::with_val(bits, 1)
}

/// Boundary partition functions `Z_1..=Z_{p_max}` at precision `bits`.
fn partition_sequence(lambda_h: &(Float, Float), p_max: usize, bits: u32) -> Vec<Float> {
    let h = &lambda_h.1;
    let s = one(bits) + Float::with_val(bits, h * 8u32);
    let sqrt_s = Float::with_val(bits, s.sqrt_ref());
    let mut out = Vec::with_capacity(p_max);
    if p_max == 0 {
        return out;
    }
    let z1 = Float::with_val(bits, 0.5)
        - (one(bits) + Float::with_val(bits, h * 2u32)) / (Float::with_val(bits, &sqrt_s * 2u32));
    out.push(z1);
    if p_max == 1 {
        return out;
    }
    let a = one(bits) - Float::with_val(bits, h * 4u32);
    let six_h = Float::with_val(bits, h * 6u32);
    let growth = Float::with_val(bits, &s * 2u32);
    // p = 2: (2+16h)^2 (-1)!! / 2! * (2a + 6h) / (4 s^{3/2})
    let lin = |p: u64| Float::with_val(bits, &a * p) + &six_h;
    let s32 = Float::with_val(bits, &sqrt_s * &s);
    let z2 = Float::with_val(bits, growth.clone().pow(2u32)) / 2u32 * lin(2) / (s32 * 4u32);
    out.push(z2);
    for p in 2..p_max as u64 {
        let prev = out.last().unwrap();
        let ratio = Float::with_val(bits, &growth * (2 * p - 3)) / (p + 1) * lin(p + 1) / lin(p);
        out.push(Float::with_val(bits, prev * ratio));
    }
    out
}

/// Markov constants `C_1..=C_{p_max}` at precision `bits`.
fn markov_sequence(lambda_h: &(Float, Float), p_max: usize, bits: u32) -> Vec<Float> {
    let (lambda, h) = lambda_h;
    let growth = Float::with_val(bits, 8) + Float::with_val(bits, h.recip_ref());
    let mut out = Vec::with_capacity(p_max);
    let mut partial = Float::with_val(bits, 0);
    let mut term = one(bits); // binom(2q, q) h^q
    let mut power = Float::with_val(bits, lambda.recip_ref());
    for p in 1..=p_max as u64 {
        let q = p - 1;
        if q > 0 {
            term *= Float::with_val(bits, h * (2 * (2 * q - 1))) / q;
            power *= &growth;
        }
        partial += &term;
        out.push(Float::with_val(bits, &power * &partial));
    }
    out
}

/// `Z_p` at `digits` significant digits.
pub fn partition_function_hp(params: &LambdaParams, p: usize, digits: u32) -> Result<Float> {
    if p == 0 {
        return Err(Error::domain("perimeter must be at least 1"));
    }
    let bits = bits_for_digits(digits);
    let lh = params.high_precision(bits);
    Ok(partition_sequence(&lh, p, bits).pop().unwrap())
}

/// `Z_p` rounded to `f64`; overflows to infinity for large perimeters near criticality.
pub fn partition_function(params: &LambdaParams, p: usize) -> Result<f64> {
    Ok(partition_function_hp(params, p, 30)?.to_f64())
}

/// `C_p` at `digits` significant digits.
pub fn markov_constant_hp(params: &LambdaParams, p: usize, digits: u32) -> Result<Float> {
    if p == 0 {
        return Err(Error::domain("perimeter must be at least 1"));
    }
    let bits = bits_for_digits(digits);
    let lh = params.high_precision(bits);
    Ok(markov_sequence(&lh, p, bits).pop().unwrap())
}

pub fn markov_constant(params: &LambdaParams, p: usize) -> Result<f64> {
    Ok(markov_constant_hp(params, p, 30)?.to_f64())
}

/// Closed form of `C_p` at the critical point, `2√3 · 3^p · p (2p)! / (p!)²`.
pub fn markov_constant_critical(p: u64, digits: u32) -> Float {
    let bits = bits_for_digits(digits);
    let f = Float::with_val(bits, boundary_factor(p));
    let three_p = Float::with_val(bits, 3).pow(p as u32);
    Float::with_val(bits, 3).sqrt() * 2u32 * three_p * f
}

/// High-precision tables of `Z_p` (`1..=p_max`) and `C_p` (`1..=p_max+1`).
#[derive(Debug, Clone)]
pub struct BoltzmannTables {
    pub params: LambdaParams,
    pub digits: u32,
    pub p_max: usize,
    z: Vec<Float>,
    c: Vec<Float>,
    lambda_hp: Float,
}

#[derive(Serialize, Deserialize)]
struct TablesFile {
    lambda: String,
    h: String,
    precision_digits: u32,
    p_max: usize,
    #[serde(rename = "Z")]
    z: Vec<String>,
    #[serde(rename = "C")]
    c: Vec<String>,
}

impl BoltzmannTables {
    pub fn new(params: LambdaParams, p_max: usize, digits: u32) -> Result<Self> {
        if p_max == 0 {
            return Err(Error::domain("p_max must be at least 1"));
        }
        let bits = bits_for_digits(digits);
        let lh = params.high_precision(bits);
        let z = partition_sequence(&lh, p_max, bits);
        let c = markov_sequence(&lh, p_max + 1, bits);
        Ok(BoltzmannTables {
            params,
            digits,
            p_max,
            z,
            c,
            lambda_hp: lh.0,
        })
    }

    pub fn bits(&self) -> u32 {
        bits_for_digits(self.digits)
    }

    /// Rebuilds the tables up to at least `p_max`, doubling the current size.
    pub fn extended(&self, p_max: usize) -> Result<Self> {
        Self::new(self.params, p_max.max(2 * self.p_max), self.digits)
    }

    pub fn z(&self, p: usize) -> &Float {
        &self.z[p - 1]
    }

    pub fn c(&self, p: usize) -> &Float {
        &self.c[p - 1]
    }

    pub fn lambda_hp(&self) -> &Float {
        &self.lambda_hp
    }

    pub fn ln_z(&self, p: usize) -> f64 {
        Float::with_val(self.bits(), self.z(p).ln_ref()).to_f64()
    }

    pub fn ln_c(&self, p: usize) -> f64 {
        Float::with_val(self.bits(), self.c(p).ln_ref()).to_f64()
    }

    /// Relative residual of `C_p = λ C_{p+1} + 2 Σ_{i<p} C_{p-i} Z_{i+1}`.
    pub fn recurrence_residual(&self, p: usize) -> f64 {
        let bits = self.bits();
        let mut rhs = Float::with_val(bits, &self.lambda_hp * self.c(p + 1));
        let mut sum = Float::with_val(bits, 0);
        for i in 0..p {
            sum += Float::with_val(bits, self.c(p - i) * self.z(i + 1));
        }
        rhs += sum * 2u32;
        let diff = rhs - self.c(p);
        (diff / self.c(p)).abs().to_f64()
    }

    pub fn to_json(&self) -> Result<String> {
        let d = self.digits as usize;
        let fmt = |x: &Float| x.to_string_radix(10, Some(d));
        let bits = self.bits();
        let (l, h) = self.params.high_precision(bits);
        let file = TablesFile {
            lambda: fmt(&l),
            h: fmt(&h),
            precision_digits: self.digits,
            p_max: self.p_max,
            z: self.z.iter().map(fmt).collect(),
            c: self.c.iter().map(fmt).collect(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: TablesFile = serde_json::from_str(text)?;
        let bits = bits_for_digits(file.precision_digits);
        let parse = |s: &str| -> Result<Float> {
            Float::parse(s)
                .map(|v| Float::with_val(bits, v))
                .map_err(|e| Error::Invalid(format!("bad decimal '{s}': {e}")))
        };
        if file.z.len() != file.p_max || file.c.len() != file.p_max + 1 {
            return Err(Error::Invalid("table lengths disagree with p_max".into()));
        }
        let lambda = parse(&file.lambda)?;
        let params = LambdaParams::from_lambda(lambda.to_f64())?;
        Ok(BoltzmannTables {
            params,
            digits: file.precision_digits,
            p_max: file.p_max,
            z: file.z.iter().map(|s| parse(s)).collect::<Result<_>>()?,
            c: file.c.iter().map(|s| parse(s)).collect::<Result<_>>()?,
            lambda_hp: lambda,
        })
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_json(&text)
    }
}

/// Growable `f64` tables of `ln Z_p` and `ln C_p`, for hot loops.
#[derive(Debug, Clone)]
pub struct LogTables {
    params: LambdaParams,
    ln_z: Vec<f64>,
    ln_c: Vec<f64>,
    partial: Vec<f64>,
    term: f64,
}

impl LogTables {
    pub fn new(params: LambdaParams, p_max: usize) -> Self {
        let mut t = LogTables {
            params,
            ln_z: Vec::new(),
            ln_c: Vec::new(),
            partial: Vec::new(),
            term: 1.0,
        };
        let h = params.h;
        let s = 1.0 + 8.0 * h;
        t.ln_z.push((0.5 - (1.0 + 2.0 * h) / (2.0 * s.sqrt())).ln());
        let a = 1.0 - 4.0 * h;
        let z2 = (2.0 * s).powi(2) / 2.0 * (2.0 * a + 6.0 * h) / (4.0 * s.powf(1.5));
        t.ln_z.push(z2.ln());
        t.partial.push(1.0);
        t.ln_c.push(-params.lambda.ln());
        t.grow(p_max.max(2));
        t
    }

    pub fn params(&self) -> &LambdaParams {
        &self.params
    }

    /// Largest `p` with `Z_p` available; `C` is available one step further.
    pub fn len(&self) -> usize {
        self.ln_z.len().min(self.ln_c.len() - 1)
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Ensures `Z` up to `p_max` and `C` up to `p_max + 1`, growing by doubling.
    pub fn grow(&mut self, p_max: usize) {
        if self.len() >= p_max {
            return;
        }
        let target = p_max.max(2 * self.len());
        let h = self.params.h;
        let a = 1.0 - 4.0 * h;
        let lin = |p: f64| a * p + 6.0 * h;
        let ln_growth_z = (2.0 + 16.0 * h).ln();
        while self.ln_z.len() < target {
            let p = self.ln_z.len() as f64;
            let r = ln_growth_z + (2.0 * p - 3.0).ln() - (p + 1.0).ln() + (lin(p + 1.0) / lin(p)).ln();
            let last = *self.ln_z.last().unwrap();
            self.ln_z.push(last + r);
        }
        let ln_growth_c = (8.0 + 1.0 / h).ln();
        while self.ln_c.len() < target + 1 {
            let q = self.ln_c.len() as f64;
            self.term *= h * 2.0 * (2.0 * q - 1.0) / q;
            let s = self.partial.last().unwrap() + self.term;
            self.partial.push(s);
            let p = q + 1.0;
            self.ln_c
                .push(-self.params.lambda.ln() + (p - 1.0) * ln_growth_c + s.ln());
        }
    }

    pub fn ln_z(&self, p: usize) -> f64 {
        self.ln_z[p - 1]
    }

    pub fn ln_c(&self, p: usize) -> f64 {
        self.ln_c[p - 1]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol * b.abs().max(1e-300)
    }

    #[test]
    fn critical_values() {
        let p = LambdaParams::critical();
        let z1 = partition_function(&p, 1).unwrap();
        let z2 = partition_function(&p, 2).unwrap();
        assert!((z1 - 0.066_987_298_107_780_68).abs() < 1e-15);
        assert!((z2 - 1.299_038_105_676_658).abs() < 1e-13);
        assert!(close(markov_constant(&p, 1).unwrap(), 12.0 * 3f64.sqrt(), 1e-15));
    }

    #[test]
    fn critical_markov_matches_closed_form() {
        let t = BoltzmannTables::new(LambdaParams::critical(), 40, 60).unwrap();
        for p in 1..=41usize {
            let cf = markov_constant_critical(p as u64, 60);
            let rel = ((t.c(p).clone() - &cf) / &cf).abs().to_f64();
            assert!(rel < 1e-55, "p = {p}, rel = {rel}");
        }
    }

    #[test]
    fn recurrence_holds_off_critical() {
        for ratio in [1.0, 0.9, 0.5, 0.01] {
            let t = BoltzmannTables::new(LambdaParams::from_ratio(ratio).unwrap(), 60, 60).unwrap();
            for p in 1..=60 {
                let r = t.recurrence_residual(p);
                assert!(r < 1e-50, "ratio {ratio}, p {p}: {r}");
            }
        }
    }

    #[test]
    fn log_tables_agree_with_high_precision() {
        let params = LambdaParams::from_ratio(0.7).unwrap();
        let t = BoltzmannTables::new(params, 300, 40).unwrap();
        let mut l = LogTables::new(params, 10);
        l.grow(300);
        for p in 1..=300 {
            assert!((l.ln_z(p) - t.ln_z(p)).abs() < 1e-11, "Z p = {p}");
            assert!((l.ln_c(p) - t.ln_c(p)).abs() < 1e-11, "C p = {p}");
        }
        assert!((l.ln_c(301) - t.ln_c(301)).abs() < 1e-11);
    }

    #[test]
    fn json_round_trip() {
        let t = BoltzmannTables::new(LambdaParams::from_ratio(0.5).unwrap(), 20, 50).unwrap();
        let back = BoltzmannTables::from_json(&t.to_json().unwrap()).unwrap();
        assert_eq!(back.p_max, 20);
        for p in 1..=20 {
            let rel = ((back.z(p).clone() - t.z(p)) / t.z(p)).abs().to_f64();
            assert!(rel < 1e-48);
        }
        assert!(back.recurrence_residual(10) < 1e-45);
    }
}
