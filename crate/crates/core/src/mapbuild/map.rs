use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub(crate) const HOLE: u32 = u32::MAX;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum FaceKind {
    Triangle,
    /// Inside the root loop.
    Root,
    /// The unexplored region or the outer face of a filled polygon.
    Outer,
}

/// Rooted planar map in half-edge form; loops and multiple edges allowed.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfEdgeMap {
    pub origin: Vec<u32>,
    pub twin: Vec<u32>,
    pub next: Vec<u32>,
    pub face: Vec<u32>,
    pub face_kind: Vec<FaceKind>,
    pub n_vertices: usize,
    pub root: u32,
    /// Outer face half-edges in cyclic order; empty if there is none.
    pub boundary: Vec<u32>,
    /// Radius of the explored ball, for maps built by peeling.
    pub explored_radius: Option<u32>,
}

/// Mutable half-edge store used while a map is grown.
#[derive(Debug, Clone, Default)]
pub(crate) struct Builder {
    pub origin: Vec<u32>,
    pub twin: Vec<u32>,
    pub next: Vec<u32>,
    pub face: Vec<u32>,
    pub alive: Vec<bool>,
    pub face_kind: Vec<FaceKind>,
    pub n_vertices: u32,
}

impl Builder {
    pub fn new_vertex(&mut self) -> u32 {
        self.n_vertices += 1;
        self.n_vertices - 1
    }

    fn half_edge(&mut self, origin: u32) -> u32 {
        let id = self.origin.len() as u32;
        self.origin.push(origin);
        self.twin.push(HOLE);
        self.next.push(HOLE);
        self.face.push(HOLE);
        self.alive.push(true);
        id
    }

    /// Two twinned half-edges `a→b`, `b→a`, both facing unexplored regions.
    pub fn edge(&mut self, a: u32, b: u32) -> (u32, u32) {
        let x = self.half_edge(a);
        let y = self.half_edge(b);
        self.twin[x as usize] = y;
        self.twin[y as usize] = x;
        (x, y)
    }

    pub fn new_face(&mut self, kind: FaceKind) -> u32 {
        self.face_kind.push(kind);
        (self.face_kind.len() - 1) as u32
    }

    pub fn head(&self, e: u32) -> u32 {
        self.origin[self.twin[e as usize] as usize]
    }

    /// Closes the hole half-edge `e = x→y` with a triangle of apex `z`.
    /// Returns the hole half-edges `(z→y, x→z)` created on the far side.
    pub fn triangle(&mut self, e: u32, z: u32) -> (u32, u32) {
        let x = self.origin[e as usize];
        let y = self.head(e);
        let (t1, a) = self.edge(y, z);
        let (t2, b) = self.edge(z, x);
        let f = self.new_face(FaceKind::Triangle);
        for (h, n) in [(e, t1), (t1, t2), (t2, e)] {
            self.next[h as usize] = n;
            self.face[h as usize] = f;
        }
        (a, b)
    }

    /// Identifies the two sides of a 2-gon hole.
    pub fn glue(&mut self, e0: u32, e1: u32) {
        let a = self.twin[e0 as usize];
        let b = self.twin[e1 as usize];
        self.twin[a as usize] = b;
        self.twin[b as usize] = a;
        self.alive[e0 as usize] = false;
        self.alive[e1 as usize] = false;
    }

    /// Turns the remaining hole into a face and compacts dead half-edges.
    pub fn finish(mut self, boundary: &VecDeque<u32>, root: u32, radius: Option<u32>) -> HalfEdgeMap {
        if !boundary.is_empty() {
            let f = self.new_face(FaceKind::Outer);
            let k = boundary.len();
            for j in 0..k {
                let e = boundary[j] as usize;
                self.next[e] = boundary[(j + 1) % k];
                self.face[e] = f;
            }
        }
        let mut map = vec![HOLE; self.origin.len()];
        let mut count = 0u32;
        for (e, &alive) in self.alive.iter().enumerate() {
            if alive {
                map[e] = count;
                count += 1;
            }
        }
        let keep = |v: &Vec<u32>, remap: bool| -> Vec<u32> {
            v.iter()
                .zip(&self.alive)
                .filter(|(_, &a)| a)
                .map(|(&x, _)| if remap { map[x as usize] } else { x })
                .collect()
        };
        HalfEdgeMap {
            origin: keep(&self.origin, false),
            twin: keep(&self.twin, true),
            next: keep(&self.next, true),
            face: keep(&self.face, false),
            face_kind: self.face_kind,
            n_vertices: self.n_vertices as usize,
            root: map[root as usize],
            boundary: boundary.iter().map(|&e| map[e as usize]).collect(),
            explored_radius: radius,
        }
    }
}

impl HalfEdgeMap {
    pub fn n_half_edges(&self) -> usize {
        self.origin.len()
    }

    pub fn n_edges(&self) -> usize {
        self.origin.len() / 2
    }

    pub fn n_faces(&self) -> usize {
        self.face_kind.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.face_kind.iter().filter(|k| **k == FaceKind::Triangle).count()
    }

    pub fn head(&self, e: u32) -> u32 {
        self.origin[self.twin[e as usize] as usize]
    }

    /// Structural check: involutive twins, consistent `next` cycles,
    /// triangular inner faces and the Euler relation on the sphere.
    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Invalid(m));
        let n = self.n_half_edges();
        let mut degree = vec![0usize; self.n_faces()];
        for e in 0..n {
            let t = self.twin[e] as usize;
            if t >= n || t == e || self.twin[t] as usize != e {
                return bad(format!("twin broken at half-edge {e}"));
            }
            let nx = self.next[e] as usize;
            if nx >= n || self.face[nx] != self.face[e] {
                return bad(format!("next broken at half-edge {e}"));
            }
            if self.origin[nx] != self.head(e as u32) {
                return bad(format!("next does not chain at half-edge {e}"));
            }
            degree[self.face[e] as usize] += 1;
        }
        for (f, kind) in self.face_kind.iter().enumerate() {
            if *kind == FaceKind::Triangle && degree[f] != 3 {
                return bad(format!("face {f} has degree {}", degree[f]));
            }
        }
        let euler = self.n_vertices as i64 - self.n_edges() as i64 + self.n_faces() as i64;
        if euler != 2 {
            return bad(format!("Euler characteristic {euler}"));
        }
        Ok(())
    }

    /// Compressed vertex adjacency (one entry per half-edge).
    pub fn adjacency(&self) -> (Vec<usize>, Vec<u32>) {
        let mut start = vec![0usize; self.n_vertices + 1];
        for &o in &self.origin {
            start[o as usize + 1] += 1;
        }
        for v in 0..self.n_vertices {
            start[v + 1] += start[v];
        }
        let mut fill = start.clone();
        let mut nbr = vec![0u32; self.origin.len()];
        for e in 0..self.origin.len() {
            let o = self.origin[e] as usize;
            nbr[fill[o]] = self.head(e as u32);
            fill[o] += 1;
        }
        (start, nbr)
    }
}
