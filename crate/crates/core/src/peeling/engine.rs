use std::collections::VecDeque;

use rand::Rng;

use super::fill::{fill, CountSink, FillSink};
use super::law::{PeelKind, PeelLaw, Side};
use super::trace::HullRow;
use crate::error::{Error, Result};

/// Receiver of the exploration moves, on top of the filling moves.
///
/// The boundary is the cyclic sequence `b_0, ..., b_{p-1}`; the peeled edge
/// always joins `b_{p-1}` to `b_0`.
pub trait ExploreSink: FillSink {
    /// Fresh apex `w`, appended after `b_{p-1}`.
    fn peel_new_vertex(&mut self);
    /// Apex `b_i` (right) or `b_{p-1-i}` (left); `i` boundary vertices are
    /// removed from the front (right) or the back (left). Returns the
    /// enclosed `(i + 1)`-gon.
    fn peel_swallow(&mut self, side: Side, i: usize) -> Self::Hole;
}

impl ExploreSink for CountSink {
    fn peel_new_vertex(&mut self) {}

    fn peel_swallow(&mut self, _: Side, i: usize) -> usize {
        i + 1
    }
}

/// Peeling by layers from a root loop.
///
/// Boundary vertices carry heights; those at the current height form a prefix
/// of the boundary and those one higher a suffix. Only edges incident to a
/// current-height vertex are peeled, so a layer closes when the prefix empties.
#[derive(Debug, Clone)]
pub struct Explorer {
    heights: VecDeque<u32>,
    radius: u32,
    vertices: u64,
    steps: u64,
}

impl Default for Explorer {
    fn default() -> Self {
        Self::new()
    }
}

impl Explorer {
    pub fn new() -> Self {
        Explorer {
            heights: VecDeque::from([0]),
            radius: 0,
            vertices: 1,
            steps: 0,
        }
    }

    pub fn perimeter(&self) -> usize {
        self.heights.len()
    }

    /// One peeling step; returns the event.
    pub fn step<S, R>(&mut self, law: &mut PeelLaw, sink: &mut S, rng: &mut R) -> Result<(PeelKind, u64)>
    where
        S: ExploreSink,
        R: Rng + ?Sized,
    {
        let p = self.heights.len();
        let kind = law.sample_step(p, rng)?;
        self.steps += 1;
        let inner = match kind {
            PeelKind::NewVertex => {
                sink.peel_new_vertex();
                self.heights.push_back(self.radius + 1);
                self.vertices += 1;
                0
            }
            PeelKind::SwallowRight(i) | PeelKind::SwallowLeft(i) => {
                let side = if matches!(kind, PeelKind::SwallowRight(_)) {
                    Side::Right
                } else {
                    Side::Left
                };
                let hole = sink.peel_swallow(side, i);
                for _ in 0..i {
                    match side {
                        Side::Right => self.heights.pop_front(),
                        Side::Left => self.heights.pop_back(),
                    };
                }
                let n = fill(law, sink, hole, rng)?;
                self.vertices += n;
                n
            }
        };
        if self.heights.is_empty() {
            return Err(Error::Invalid("perimeter reached zero".into()));
        }
        Ok((kind, inner))
    }

    /// Peels until the current layer closes; returns the new radius.
    pub fn complete_layer<S, R>(&mut self, law: &mut PeelLaw, sink: &mut S, rng: &mut R) -> Result<u32>
    where
        S: ExploreSink,
        R: Rng + ?Sized,
    {
        while self.heights.front() == Some(&self.radius) {
            self.step(law, sink, rng)?;
        }
        self.radius += 1;
        Ok(self.radius)
    }

    pub fn row(&self) -> HullRow {
        HullRow {
            r: self.radius,
            boundary_edges: self.heights.len() as u64,
            vertices: self.vertices,
            peel_steps: self.steps,
        }
    }

    /// Explores layers `1..=r_max`, one row per layer.
    pub fn run<S, R>(&mut self, law: &mut PeelLaw, sink: &mut S, r_max: u32, rng: &mut R) -> Result<Vec<HullRow>>
    where
        S: ExploreSink,
        R: Rng + ?Sized,
    {
        let mut rows = Vec::with_capacity(r_max as usize);
        while self.radius < r_max {
            self.complete_layer(law, sink, rng)?;
            rows.push(self.row());
        }
        Ok(rows)
    }
}
