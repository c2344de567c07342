use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};

use super::report::TestReport;
use crate::error::{Error, Result};

/// Sample mean and its standard error.
pub fn mean_stderr(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    if xs.is_empty() {
        return (f64::NAN, f64::NAN);
    }
    let m = xs.iter().sum::<f64>() / n;
    let v = xs.iter().map(|x| (x - m).powi(2)).sum::<f64>() / (n - 1.0).max(1.0);
    (m, (v / n).sqrt())
}

/// `P(K > x)` for the Kolmogorov distribution.
pub fn kolmogorov_survival(x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x < 0.3 {
        // theta-function form, fast for small arguments
        let t = -std::f64::consts::PI.powi(2) / (8.0 * x * x);
        let s: f64 = (1..40).step_by(2).map(|k| (t * (k * k) as f64).exp()).sum();
        let cdf = (2.0 * std::f64::consts::PI).sqrt() / x * s;
        return (1.0 - cdf).clamp(0.0, 1.0);
    }
    let mut s = 0.0;
    for k in 1..200 {
        let term = (-2.0 * (k * k) as f64 * x * x).exp();
        s += if k % 2 == 1 { term } else { -term };
        if term < 1e-18 {
            break;
        }
    }
    (2.0 * s).clamp(0.0, 1.0)
}

/// Two-sided Kolmogorov–Smirnov statistic of `samples` against `cdf`.
pub fn ks_statistic(samples: &[f64], cdf: impl Fn(f64) -> f64) -> f64 {
    let mut xs = samples.to_vec();
    xs.sort_by(f64::total_cmp);
    let n = xs.len() as f64;
    xs.iter().enumerate().fold(0.0, |d, (i, &x)| {
        let f = cdf(x);
        d.max(f - i as f64 / n).max((i + 1) as f64 / n - f)
    })
}

/// Asymptotic p-value with the small-sample correction of Stephens.
pub fn ks_p_value(d: f64, n: usize) -> f64 {
    let sn = (n as f64).sqrt();
    kolmogorov_survival((sn + 0.12 + 0.11 / sn) * d)
}

/// KS test of `samples` against `Exp(rate)`; passes when `p > 1e-3`.
pub fn ks_exponential_test(samples: &[f64], rate: f64) -> Result<TestReport> {
    if samples.is_empty() {
        return Err(Error::Invalid("KS test needs samples".into()));
    }
    if samples.len() < 100 {
        return Err(Error::Invalid(format!("KS test needs at least 100 samples, got {}", samples.len())));
    }
    if !(rate > 0.0) {
        return Err(Error::domain("exponential rate must be positive"));
    }
    let d = ks_statistic(samples, |x| if x <= 0.0 { 0.0 } else { -(-rate * x).exp_m1() });
    let p = ks_p_value(d, samples.len());
    Ok(TestReport::hypothesis(
        format!("ks_exponential(rate={rate})"),
        d,
        p,
        1e-3,
        serde_json::json!({"samples": samples.len(), "rate": rate}),
    ))
}

/// Pearson χ² goodness of fit. Adjacent bins are merged until every
/// expected count is at least 5; passes when `p > 1e-3`.
pub fn chi_square_test(name: &str, observed: &[u64], probs: &[f64]) -> Result<TestReport> {
    if observed.len() != probs.len() || observed.is_empty() {
        return Err(Error::Invalid("observed and expected bins differ".into()));
    }
    let total: u64 = observed.iter().sum();
    let norm: f64 = probs.iter().sum();
    let mut bins: Vec<(f64, f64)> = Vec::new();
    let (mut o, mut e) = (0.0, 0.0);
    for (&ob, &pr) in observed.iter().zip(probs) {
        o += ob as f64;
        e += pr / norm * total as f64;
        if e >= 5.0 {
            bins.push((o, e));
            o = 0.0;
            e = 0.0;
        }
    }
    if e > 0.0 || o > 0.0 {
        match bins.last_mut() {
            Some(last) => {
                last.0 += o;
                last.1 += e;
            }
            None => bins.push((o, e)),
        }
    }
    if bins.len() < 2 {
        return Err(Error::Invalid("fewer than two bins after merging".into()));
    }
    let stat: f64 = bins.iter().map(|(o, e)| (o - e).powi(2) / e).sum();
    let dof = (bins.len() - 1) as f64;
    let p = 1.0 - ChiSquared::new(dof).expect("positive degrees of freedom").cdf(stat);
    Ok(TestReport::hypothesis(
        name,
        stat,
        p,
        1e-3,
        serde_json::json!({"samples": total, "bins": bins.len()}),
    ))
}

/// Total variation distance between empirical counts and a probability vector.
/// Mass outside both supports counts fully.
pub fn total_variation(counts: &[u64], probs: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let len = counts.len().max(probs.len());
    let mut tv = 0.0;
    let mut covered = 0.0;
    for i in 0..len {
        let c = counts.get(i).map_or(0.0, |&c| c as f64 / total as f64);
        let p = probs.get(i).copied().unwrap_or(0.0);
        covered += p;
        tv += (c - p).abs();
    }
    0.5 * (tv + (1.0 - covered).max(0.0))
}

/// Empirical joint Laplace transform `E[exp(-λ P - μ V)]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalTransform {
    pub points: Vec<(f64, f64)>,
    pub estimates: Vec<f64>,
    pub stderr: Vec<f64>,
    pub replicas: usize,
}

impl EmpiricalTransform {
    pub fn from_samples(points: &[(f64, f64)], perimeter: &[f64], volume: &[f64]) -> Result<Self> {
        if perimeter.len() != volume.len() || perimeter.is_empty() {
            return Err(Error::Invalid("perimeter and volume samples must pair up".into()));
        }
        let (estimates, stderr) = points
            .iter()
            .map(|&(l, m)| {
                let vals: Vec<f64> = perimeter
                    .iter()
                    .zip(volume)
                    .map(|(p, v)| (-l * p - m * v).exp())
                    .collect();
                mean_stderr(&vals)
            })
            .unzip();
        Ok(EmpiricalTransform {
            points: points.to_vec(),
            estimates,
            stderr,
            replicas: perimeter.len(),
        })
    }

    /// Largest `|estimate - target|` over the evaluation points, with the
    /// stderr at that point.
    pub fn sup_discrepancy(&self, target: impl Fn(f64, f64) -> Result<f64>) -> Result<(f64, f64)> {
        let mut best = (0.0f64, 0.0f64);
        for ((&(l, m), &e), &s) in self.points.iter().zip(&self.estimates).zip(&self.stderr) {
            let d = (e - target(l, m)?).abs();
            if d >= best.0 {
                best = (d, s);
            }
        }
        Ok(best)
    }
}
