use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::map::{FaceKind, HalfEdgeMap};
use crate::error::{Error, Result};

pub const UNREACHED: u32 = u32::MAX;

/// Graph distances from one vertex.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DistanceField {
    pub source: u32,
    pub dist: Vec<u32>,
}

impl DistanceField {
    /// Distances from the root vertex over the whole map.
    pub fn from_root(map: &HalfEdgeMap) -> Self {
        let src = map.origin[map.root as usize];
        Self::bfs(map, src, None)
    }

    /// BFS from `source`; with `faces`, only edges bordering a selected face are used.
    pub fn bfs(map: &HalfEdgeMap, source: u32, faces: Option<&[bool]>) -> Self {
        VertexGraph::new(map).bfs(map, source, faces)
    }

    pub fn max_finite(&self) -> u32 {
        self.dist.iter().copied().filter(|&d| d != UNREACHED).max().unwrap_or(0)
    }
}

/// Half-edges bordering a selected face.
pub fn usable_edges(map: &HalfEdgeMap, sel: &[bool]) -> Vec<bool> {
    (0..map.n_half_edges())
        .map(|e| sel[map.face[e] as usize] || sel[map.face[map.twin[e] as usize] as usize])
        .collect()
}

/// Vertex adjacency with the half-edge behind each slot.
#[derive(Debug, Clone)]
pub struct VertexGraph {
    start: Vec<usize>,
    nbr: Vec<u32>,
    edge: Vec<u32>,
}

impl VertexGraph {
    pub fn new(map: &HalfEdgeMap) -> Self {
        let (start, nbr) = map.adjacency();
        let mut edge = vec![0u32; map.n_half_edges()];
        let mut fill = start.clone();
        for e in 0..map.n_half_edges() {
            let o = map.origin[e] as usize;
            edge[fill[o]] = e as u32;
            fill[o] += 1;
        }
        VertexGraph { start, nbr, edge }
    }

    pub fn bfs(&self, map: &HalfEdgeMap, source: u32, faces: Option<&[bool]>) -> DistanceField {
        let usable = faces.map(|sel| usable_edges(map, sel));
        self.bfs_masked(map, source, usable.as_deref())
    }

    /// BFS over half-edges flagged in `usable`.
    pub fn bfs_masked(&self, map: &HalfEdgeMap, source: u32, usable: Option<&[bool]>) -> DistanceField {
        let mut dist = vec![UNREACHED; map.n_vertices];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        while let Some(v) = queue.pop_front() {
            let d = dist[v as usize];
            for s in self.start[v as usize]..self.start[v as usize + 1] {
                if let Some(u) = usable {
                    if !u[self.edge[s] as usize] {
                        continue;
                    }
                }
                let w = self.nbr[s] as usize;
                if dist[w] == UNREACHED {
                    dist[w] = d + 1;
                    queue.push_back(w as u32);
                }
            }
        }
        DistanceField { source, dist }
    }

    /// BFS that stops once `count` vertices flagged in `targets` are settled.
    pub fn bfs_until(
        &self,
        map: &HalfEdgeMap,
        source: u32,
        usable: Option<&[bool]>,
        targets: &[bool],
        count: usize,
    ) -> DistanceField {
        let mut dist = vec![UNREACHED; map.n_vertices];
        let mut queue = VecDeque::new();
        dist[source as usize] = 0;
        queue.push_back(source);
        let mut found = usize::from(targets[source as usize]);
        while let Some(v) = queue.pop_front() {
            if found >= count {
                break;
            }
            let d = dist[v as usize];
            for s in self.start[v as usize]..self.start[v as usize + 1] {
                if let Some(u) = usable {
                    if !u[self.edge[s] as usize] {
                        continue;
                    }
                }
                let w = self.nbr[s] as usize;
                if dist[w] == UNREACHED {
                    dist[w] = d + 1;
                    found += usize::from(targets[w]);
                    queue.push_back(w as u32);
                }
            }
        }
        DistanceField { source, dist }
    }
}

/// The faces with a vertex at distance at most `r - 1`, completed by the
/// bounded components of their complement.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Hull {
    pub r: u32,
    pub faces: Vec<bool>,
    pub vertices: Vec<bool>,
    pub perimeter: u64,
    pub n_vertices: u64,
}

pub fn hull_of_radius(map: &HalfEdgeMap, dist: &DistanceField, r: u32) -> Result<Hull> {
    if r == 0 {
        return Err(Error::domain("hull radius must be at least 1"));
    }
    if let Some(rad) = map.explored_radius {
        if r > rad {
            return Err(Error::domain(format!("radius {r} exceeds explored radius {rad}")));
        }
    }
    let nf = map.n_faces();
    let mut sel = vec![false; nf];
    for e in 0..map.n_half_edges() {
        let f = map.face[e] as usize;
        match map.face_kind[f] {
            FaceKind::Root => sel[f] = true,
            FaceKind::Triangle if dist.dist[map.origin[e] as usize] < r => sel[f] = true,
            _ => {}
        }
    }
    // faces reachable from the outer face without crossing the selection stay out
    let mut face_edges = vec![Vec::new(); nf];
    for e in 0..map.n_half_edges() {
        face_edges[map.face[e] as usize].push(e as u32);
    }
    let mut outside = vec![false; nf];
    let mut queue: VecDeque<usize> = (0..nf)
        .filter(|&f| map.face_kind[f] == FaceKind::Outer && !sel[f])
        .collect();
    let has_outer = !queue.is_empty();
    for &f in &queue {
        outside[f] = true;
    }
    while let Some(f) = queue.pop_front() {
        for &e in &face_edges[f] {
            let g = map.face[map.twin[e as usize] as usize] as usize;
            if !sel[g] && !outside[g] {
                outside[g] = true;
                queue.push_back(g);
            }
        }
    }
    if has_outer {
        for f in 0..nf {
            if !sel[f] && !outside[f] {
                sel[f] = true;
            }
        }
    }
    let mut vertices = vec![false; map.n_vertices];
    let mut perimeter = 0u64;
    for e in 0..map.n_half_edges() {
        let f = map.face[e] as usize;
        if !sel[f] {
            continue;
        }
        vertices[map.origin[e] as usize] = true;
        let g = map.face[map.twin[e] as usize] as usize;
        if map.face_kind[f] == FaceKind::Triangle && !sel[g] {
            perimeter += 1;
        }
    }
    let n_vertices = vertices.iter().filter(|&&v| v).count() as u64;
    Ok(Hull {
        r,
        faces: sel,
        vertices,
        perimeter,
        n_vertices,
    })
}

fn distances_agree(map: &HalfEdgeMap, pts: &Hull, within: &Hull) -> bool {
    let usable = usable_edges(map, &within.faces);
    // when every edge is usable both distances coincide by definition
    if usable.iter().all(|&u| u) {
        return true;
    }
    let graph = VertexGraph::new(map);
    let members: Vec<u32> = (0..map.n_vertices as u32).filter(|&v| pts.vertices[v as usize]).collect();
    for &x in &members {
        let full = graph.bfs_until(map, x, None, &pts.vertices, members.len());
        let inner = graph.bfs_until(map, x, Some(&usable), &pts.vertices, members.len());
        if members.iter().any(|&y| full.dist[y as usize] != inner.dist[y as usize]) {
            return false;
        }
    }
    true
}

/// Whether distances between hull vertices at radius `r` are realized inside
/// the hull at radius `2r`.
pub fn check_geodesic_containment(map: &HalfEdgeMap, r: u32) -> Result<bool> {
    match map.explored_radius {
        Some(rad) if 2 * r <= rad => {}
        Some(rad) => {
            return Err(Error::domain(format!(
                "containment at radius {r} needs exploration to {}, have {rad}",
                2 * r
            )))
        }
        None => return Err(Error::domain("map has no explored radius")),
    }
    let dist = DistanceField::from_root(map);
    let small = hull_of_radius(map, &dist, r)?;
    let big = hull_of_radius(map, &dist, 2 * r)?;
    Ok(distances_agree(map, &small, &big))
}

/// Same comparison with distances restricted to the radius-`r` hull itself.
pub fn check_containment_within_same_hull(map: &HalfEdgeMap, r: u32) -> Result<bool> {
    let dist = DistanceField::from_root(map);
    let small = hull_of_radius(map, &dist, r)?;
    Ok(distances_agree(map, &small, &small))
}
