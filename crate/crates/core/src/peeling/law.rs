use rand::Rng;
use rug::Float;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{BoltzmannTables, LambdaParams, LogTables};
use crate::error::{Error, Result};

/// Largest perimeter the `f64` law tables may grow to.
pub const MAX_PERIMETER: usize = 1 << 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Side {
    Left,
    Right,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PeelKind {
    NewVertex,
    SwallowLeft(usize),
    SwallowRight(usize),
}

impl PeelKind {
    pub fn perimeter_delta(&self) -> i64 {
        match *self {
            PeelKind::NewVertex => 1,
            PeelKind::SwallowLeft(i) | PeelKind::SwallowRight(i) => -(i as i64),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct PeelEvent {
    pub kind: PeelKind,
    pub swallowed_inner_vertices: u64,
}

/// One-step peeling law at perimeter `p`, evaluated from high-precision tables.
#[derive(Debug, Clone)]
pub struct StepDistribution {
    pub p: usize,
    pub new_vertex: f64,
    /// Probability of a swallow of `i` edges on one given side, `i = 0..p`.
    pub swallow: Vec<f64>,
    /// `1 - total`, evaluated at table precision.
    pub defect: f64,
}

impl StepDistribution {
    pub fn total(&self) -> f64 {
        1.0 - self.defect
    }

    pub fn prob(&self, kind: PeelKind) -> f64 {
        match kind {
            PeelKind::NewVertex => self.new_vertex,
            PeelKind::SwallowLeft(i) | PeelKind::SwallowRight(i) => {
                self.swallow.get(i).copied().unwrap_or(0.0)
            }
        }
    }
}

pub fn step_distribution(tables: &BoltzmannTables, p: usize) -> Result<StepDistribution> {
    if p == 0 {
        return Err(Error::domain("perimeter must be at least 1"));
    }
    if p > tables.p_max {
        return Err(Error::Capacity {
            perimeter: p,
            capacity: tables.p_max,
        });
    }
    let bits = tables.bits();
    let cp = tables.c(p);
    let new = Float::with_val(bits, tables.lambda_hp() * tables.c(p + 1)) / cp;
    let mut total = new.clone();
    let mut swallow = Vec::with_capacity(p);
    for i in 0..p {
        let w = Float::with_val(bits, tables.c(p - i) * tables.z(i + 1)) / cp;
        total += Float::with_val(bits, &w * 2u32);
        swallow.push(w.to_f64());
    }
    Ok(StepDistribution {
        p,
        new_vertex: new.to_f64(),
        swallow,
        defect: (Float::with_val(bits, 1) - total).to_f64(),
    })
}

/// `f64` sampler for peeling steps and Boltzmann filling, backed by log tables
/// that grow geometrically on demand.
#[derive(Debug, Clone)]
pub struct PeelLaw {
    logs: LogTables,
    ln_lambda: f64,
    max_perimeter: usize,
}

impl PeelLaw {
    pub fn new(params: LambdaParams) -> Self {
        PeelLaw {
            logs: LogTables::new(params, 64),
            ln_lambda: params.lambda.ln(),
            max_perimeter: MAX_PERIMETER,
        }
    }

    pub fn with_capacity_limit(params: LambdaParams, max_perimeter: usize) -> Self {
        PeelLaw {
            max_perimeter,
            ..Self::new(params)
        }
    }

    pub fn params(&self) -> &LambdaParams {
        self.logs.params()
    }

    fn ensure(&mut self, p: usize) -> Result<()> {
        if p > self.max_perimeter {
            return Err(Error::Capacity {
                perimeter: p,
                capacity: self.max_perimeter,
            });
        }
        if p > self.logs.len() {
            self.logs.grow((2 * self.logs.len()).max(p).min(self.max_perimeter));
        }
        Ok(())
    }

    /// One peeling step at perimeter `p`.
    pub fn sample_step<R: Rng + ?Sized>(&mut self, p: usize, rng: &mut R) -> Result<PeelKind> {
        self.ensure(p + 1)?;
        let ln_cp = self.logs.ln_c(p);
        let mut u: f64 = rng.gen();
        let new = (self.ln_lambda + self.logs.ln_c(p + 1) - ln_cp).exp();
        if u < new {
            return Ok(PeelKind::NewVertex);
        }
        u -= new;
        for i in 0..p {
            let w = (self.logs.ln_c(p - i) + self.logs.ln_z(i + 1) - ln_cp).exp();
            if u < 2.0 * w {
                return Ok(if u < w {
                    PeelKind::SwallowLeft(i)
                } else {
                    PeelKind::SwallowRight(i)
                });
            }
            u -= 2.0 * w;
        }
        // rounding residue of order 1e-15
        Ok(PeelKind::SwallowRight(p - 1))
    }

    /// One step of the Boltzmann filling of a `q`-gon.
    pub fn sample_fill<R: Rng + ?Sized>(&mut self, q: usize, rng: &mut R) -> Result<FillStep> {
        self.ensure(q + 1)?;
        let ln_zq = self.logs.ln_z(q);
        let mut u: f64 = rng.gen();
        let new = (self.ln_lambda + self.logs.ln_z(q + 1) - ln_zq).exp();
        if u < new {
            return Ok(FillStep::NewVertex);
        }
        u -= new;
        if q == 2 {
            let close = (-ln_zq).exp();
            if u < close {
                return Ok(FillStep::Close);
            }
            u -= close;
        }
        // split weights are symmetric under i <-> q-1-i and largest at the ends
        let (mut lo, mut hi) = (0usize, q - 1);
        while lo <= hi {
            let w = (self.logs.ln_z(lo + 1) + self.logs.ln_z(q - lo) - ln_zq).exp();
            if lo == hi {
                if u < w {
                    return Ok(FillStep::Split(lo));
                }
                break;
            }
            if u < 2.0 * w {
                return Ok(FillStep::Split(if u < w { lo } else { hi }));
            }
            u -= 2.0 * w;
            lo += 1;
            hi -= 1;
        }
        Ok(FillStep::Split(0))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FillStep {
    NewVertex,
    /// Triangle on the root edge whose apex is the boundary vertex `i + 1`
    /// positions ahead, leaving holes of perimeters `i + 1` and `q - i`.
    Split(usize),
    /// A 2-gon glued into a single edge.
    Close,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn critical_perimeter_one() {
        let t = BoltzmannTables::new(LambdaParams::critical(), 8, 60).unwrap();
        let d = step_distribution(&t, 1).unwrap();
        assert!((d.new_vertex - 3f64.sqrt() / 2.0).abs() < 1e-15);
        assert!((d.swallow[0] - (2.0 - 3f64.sqrt()) / 4.0).abs() < 1e-15);
        assert!(d.defect.abs() < 1e-50);
    }

    #[test]
    fn subcritical_grows_faster() {
        let c = BoltzmannTables::new(LambdaParams::critical(), 12, 60).unwrap();
        let s = BoltzmannTables::new(LambdaParams::from_ratio(0.5).unwrap(), 12, 60).unwrap();
        let pc = step_distribution(&c, 10).unwrap().new_vertex;
        let ps = step_distribution(&s, 10).unwrap().new_vertex;
        assert!(ps > pc, "{ps} vs {pc}");
    }

    #[test]
    fn capacity_error_beyond_tables() {
        let t = BoltzmannTables::new(LambdaParams::critical(), 8, 30).unwrap();
        assert!(matches!(step_distribution(&t, 9), Err(Error::Capacity { .. })));
        let mut law = PeelLaw::with_capacity_limit(LambdaParams::critical(), 100);
        let mut rng = stream(1, 1);
        assert!(matches!(law.sample_step(100, &mut rng), Err(Error::Capacity { .. })));
    }

    #[test]
    fn f64_law_matches_tables() {
        let params = LambdaParams::from_ratio(0.9).unwrap();
        let t = BoltzmannTables::new(params, 40, 40).unwrap();
        let law = PeelLaw::new(params);
        for p in [1usize, 2, 7, 40] {
            let d = step_distribution(&t, p).unwrap();
            let new = (law.ln_lambda + law.logs.ln_c(p + 1) - law.logs.ln_c(p)).exp();
            assert!((new - d.new_vertex).abs() < 1e-12);
        }
    }

    #[test]
    fn fill_law_is_normalized() {
        // λ Z_{q+1} + Σ_i Z_{i+1} Z_{q-i} + [q = 2] = Z_q
        let params = LambdaParams::from_ratio(0.7).unwrap();
        let t = BoltzmannTables::new(params, 30, 50).unwrap();
        let bits = t.bits();
        for q in 1..30usize {
            let mut s = Float::with_val(bits, t.lambda_hp() * t.z(q + 1));
            for i in 0..q {
                s += Float::with_val(bits, t.z(i + 1) * t.z(q - i));
            }
            if q == 2 {
                s += 1;
            }
            let rel = ((s - t.z(q)) / t.z(q)).abs().to_f64();
            assert!(rel < 1e-40, "q = {q}: {rel}");
        }
    }
}
