use std::collections::VecDeque;

use super::map::{Builder, FaceKind, HalfEdgeMap};
use crate::peeling::{ExploreSink, FillSink, Side};

/// Materializes peeling and filling moves into half-edges.
///
/// Holes and the exploration boundary are stored as the cyclic sequence of
/// half-edges facing the unexplored side.
#[derive(Debug, Default)]
pub struct MapSink {
    pub(crate) b: Builder,
    pub(crate) boundary: VecDeque<u32>,
    pub(crate) root: u32,
}

impl MapSink {
    /// Root loop at vertex 0: the root face inside, the unexplored side outside.
    pub fn rooted_loop() -> Self {
        let mut b = Builder::default();
        let rho = b.new_vertex();
        let (inside, outside) = b.edge(rho, rho);
        let f = b.new_face(FaceKind::Root);
        b.next[inside as usize] = inside;
        b.face[inside as usize] = f;
        MapSink {
            b,
            boundary: VecDeque::from([outside]),
            root: inside,
        }
    }

    /// A `p`-cycle whose outer side is the outer face; returns the sink and
    /// the inner hole to be filled.
    pub fn polygon(p: usize) -> (Self, VecDeque<u32>) {
        let mut b = Builder::default();
        let vs: Vec<u32> = (0..p).map(|_| b.new_vertex()).collect();
        let mut hole = VecDeque::with_capacity(p);
        let mut outer = VecDeque::with_capacity(p);
        for j in 0..p {
            let (inner, out) = b.edge(vs[j], vs[(j + 1) % p]);
            hole.push_back(inner);
            outer.push_front(out);
        }
        let root = hole[0];
        (
            MapSink {
                b,
                boundary: outer,
                root,
            },
            hole,
        )
    }

    pub fn finish(self, radius: Option<u32>) -> HalfEdgeMap {
        self.b.finish(&self.boundary, self.root, radius)
    }

    fn apex(&self, seq: &VecDeque<u32>, k: usize, fallback: u32) -> u32 {
        seq.get(k).map_or(fallback, |&e| self.b.origin[e as usize])
    }
}

impl FillSink for MapSink {
    type Hole = VecDeque<u32>;

    fn perimeter(&self, hole: &Self::Hole) -> usize {
        hole.len()
    }

    fn grow(&mut self, hole: &mut Self::Hole) {
        let e = hole.pop_front().unwrap();
        let w = self.b.new_vertex();
        let (a, b) = self.b.triangle(e, w);
        hole.push_front(a);
        hole.push_front(b);
    }

    fn split(&mut self, mut hole: Self::Hole, i: usize) -> (Self::Hole, Self::Hole) {
        let e = hole.pop_front().unwrap();
        let x = self.b.origin[e as usize];
        let z = self.apex(&hole, i, x);
        let (a, b) = self.b.triangle(e, z);
        let mut rest = hole.split_off(i);
        hole.push_back(a);
        rest.push_back(b);
        (hole, rest)
    }

    fn close(&mut self, hole: Self::Hole) {
        self.b.glue(hole[0], hole[1]);
    }
}

impl ExploreSink for MapSink {
    fn peel_new_vertex(&mut self) {
        let e = self.boundary.pop_back().unwrap();
        let w = self.b.new_vertex();
        let (a, b) = self.b.triangle(e, w);
        self.boundary.push_back(b);
        self.boundary.push_back(a);
    }

    fn peel_swallow(&mut self, side: Side, i: usize) -> Self::Hole {
        let e = self.boundary.pop_back().unwrap();
        let x = self.b.origin[e as usize];
        match side {
            Side::Right => {
                let z = self.apex(&self.boundary, i, x);
                let (a, b) = self.b.triangle(e, z);
                let mut hole: VecDeque<u32> = self.boundary.drain(..i).collect();
                hole.push_back(a);
                self.boundary.push_back(b);
                hole
            }
            Side::Left => {
                let len = self.boundary.len();
                let z = if i == 0 { x } else { self.b.origin[self.boundary[len - i] as usize] };
                let (a, b) = self.b.triangle(e, z);
                let mut hole = self.boundary.split_off(len - i);
                hole.push_back(b);
                self.boundary.push_back(a);
                hole
            }
        }
    }
}
