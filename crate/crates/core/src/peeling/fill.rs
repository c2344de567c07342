use rand::Rng;

use super::law::{FillStep, PeelLaw};
use crate::error::Result;

/// Receiver of the elementary moves of a Boltzmann filling.
///
/// Every sink consumes the random stream identically, so a counting run and a
/// materializing run on the same stream describe the same triangulation.
pub trait FillSink {
    type Hole;
    fn perimeter(&self, hole: &Self::Hole) -> usize;
    /// Triangle on the root edge with a fresh apex; the hole grows by one.
    fn grow(&mut self, hole: &mut Self::Hole);
    /// Triangle on the root edge with apex `i + 1` boundary positions ahead.
    /// Returns the holes of perimeters `i + 1` and `q - i`, in that order.
    fn split(&mut self, hole: Self::Hole, i: usize) -> (Self::Hole, Self::Hole);
    /// Glues the two sides of a 2-gon.
    fn close(&mut self, hole: Self::Hole);
}

/// Fills `hole` with a Boltzmann triangulation; returns the number of inner vertices.
pub fn fill<S, R>(law: &mut PeelLaw, sink: &mut S, hole: S::Hole, rng: &mut R) -> Result<u64>
where
    S: FillSink,
    R: Rng + ?Sized,
{
    let mut inner = 0u64;
    let mut stack = vec![hole];
    while let Some(mut h) = stack.pop() {
        loop {
            let q = sink.perimeter(&h);
            match law.sample_fill(q, rng)? {
                FillStep::NewVertex => {
                    inner += 1;
                    sink.grow(&mut h);
                }
                FillStep::Close => {
                    sink.close(h);
                    break;
                }
                FillStep::Split(i) => {
                    let (a, b) = sink.split(h, i);
                    stack.push(b);
                    h = a;
                }
            }
        }
    }
    Ok(inner)
}

/// Sink that keeps only perimeters.
#[derive(Debug, Default, Clone, Copy)]
pub struct CountSink;

impl FillSink for CountSink {
    type Hole = usize;

    fn perimeter(&self, hole: &usize) -> usize {
        *hole
    }

    fn grow(&mut self, hole: &mut usize) {
        *hole += 1;
    }

    fn split(&mut self, hole: usize, i: usize) -> (usize, usize) {
        (i + 1, hole - i)
    }

    fn close(&mut self, _: usize) {}
}

/// Inner-vertex count of a Boltzmann triangulation of the `q`-gon.
pub fn sample_filler_size<R: Rng + ?Sized>(law: &mut PeelLaw, q: usize, rng: &mut R) -> Result<u64> {
    fill(law, &mut CountSink, q, rng)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::{LambdaParams, SizeDistribution};
    use crate::rng::stream;

    #[test]
    fn tiny_weight_collapses_to_minimal() {
        let params = LambdaParams::from_ratio(1e-6).unwrap();
        let mut law = PeelLaw::new(params);
        let mut rng = stream(3, 0);
        for _ in 0..1000 {
            assert_eq!(sample_filler_size(&mut law, 1, &mut rng).unwrap(), 1);
            assert_eq!(sample_filler_size(&mut law, 2, &mut rng).unwrap(), 0);
        }
    }

    #[test]
    fn size_law_small_sample() {
        let params = LambdaParams::from_ratio(0.8).unwrap();
        let exact = SizeDistribution::new(&params, 3).unwrap();
        let mut law = PeelLaw::new(params);
        let mut rng = stream(5, 0);
        let trials = 20_000;
        let mut counts = [0usize; 8];
        for _ in 0..trials {
            let n = sample_filler_size(&mut law, 3, &mut rng).unwrap() as usize;
            if n < 8 {
                counts[n] += 1;
            }
        }
        for n in 0..8 {
            let f = counts[n] as f64 / trials as f64;
            let w = exact.weights[n];
            let sd = (w * (1.0 - w) / trials as f64).sqrt();
            assert!((f - w).abs() < 5.0 * sd + 1e-4, "n = {n}: {f} vs {w}");
        }
    }
}
