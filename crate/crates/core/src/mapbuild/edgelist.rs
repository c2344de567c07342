use std::fmt::Write as _;

use super::map::HalfEdgeMap;
use crate::error::{Error, Result};

/// Plain edge list: one `v1 v2` line per edge plus the root half-edge.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeList {
    pub n_vertices: usize,
    pub root: (u32, u32),
    pub edges: Vec<(u32, u32)>,
}

impl EdgeList {
    pub fn from_map(map: &HalfEdgeMap) -> Self {
        let edges = (0..map.n_half_edges() as u32)
            .filter(|&e| e < map.twin[e as usize])
            .map(|e| (map.origin[e as usize], map.head(e)))
            .collect();
        EdgeList {
            n_vertices: map.n_vertices,
            root: (map.origin[map.root as usize], map.head(map.root)),
            edges,
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::with_capacity(self.edges.len() * 12 + 64);
        writeln!(s, "vertices {}", self.n_vertices).unwrap();
        writeln!(s, "root {} {}", self.root.0, self.root.1).unwrap();
        for (a, b) in &self.edges {
            writeln!(s, "{a} {b}").unwrap();
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let bad = |l: &str| Error::Invalid(format!("bad edge-list line '{l}'"));
        let mut lines = text.lines().filter(|l| !l.trim().is_empty());
        let head = lines.next().ok_or_else(|| bad(""))?;
        let n_vertices = head
            .strip_prefix("vertices ")
            .and_then(|v| v.trim().parse().ok())
            .ok_or_else(|| bad(head))?;
        let pair = |l: &str| -> Result<(u32, u32)> {
            let mut it = l.split_whitespace().map(str::parse::<u32>);
            match (it.next(), it.next(), it.next()) {
                (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
                _ => Err(bad(l)),
            }
        };
        let root_line = lines.next().ok_or_else(|| bad(""))?;
        let root = pair(root_line.strip_prefix("root ").ok_or_else(|| bad(root_line))?)?;
        let edges = lines.map(pair).collect::<Result<Vec<_>>>()?;
        if edges.iter().any(|&(a, b)| a as usize >= n_vertices || b as usize >= n_vertices) {
            return Err(Error::Invalid("edge endpoint out of range".into()));
        }
        Ok(EdgeList {
            n_vertices,
            root,
            edges,
        })
    }
}
