//! Explicit half-edge maps built from the same random stream as the peeling
//! counts, with distance and hull oracles.

mod edgelist;
mod hull;
mod map;
mod sink;

pub use edgelist::*;
pub use hull::*;
pub use map::{FaceKind, HalfEdgeMap};
pub use sink::MapSink;

use rand::Rng;

use crate::combinatorics::LambdaParams;
use crate::error::{Error, Result};
use crate::peeling::{fill, Explorer, HullTrace, PeelLaw};
use crate::rng::stream;

/// Boltzmann triangulation of the `p`-gon as an explicit map; the outer face
/// is the polygon's exterior.
pub fn fill_boltzmann<R: Rng + ?Sized>(p: usize, law: &mut PeelLaw, rng: &mut R) -> Result<(HalfEdgeMap, u64)> {
    if p == 0 {
        return Err(Error::domain("perimeter must be at least 1"));
    }
    let (mut sink, hole) = MapSink::polygon(p);
    let inner = fill(law, &mut sink, hole, rng)?;
    Ok((sink.finish(None), inner))
}

/// Explores the ball of radius `radius` on stream `(seed, replica)`, exactly
/// as `peeling::peel_to_radius` does, and keeps the map.
pub fn build_pshit_ball(
    params: LambdaParams,
    radius: u32,
    seed: u64,
    replica: u64,
) -> Result<(HalfEdgeMap, HullTrace)> {
    if radius == 0 {
        return Err(Error::domain("target radius must be at least 1"));
    }
    let mut law = PeelLaw::new(params);
    let mut rng = stream(seed, replica);
    let mut sink = MapSink::rooted_loop();
    let rows = Explorer::new().run(&mut law, &mut sink, radius, &mut rng)?;
    let map = sink.finish(Some(radius));
    Ok((
        map,
        HullTrace {
            params,
            seed,
            replica,
            rows,
        },
    ))
}

/// Compares BFS hulls with the trace rows at every radius.
pub fn hull_matches_trace(map: &HalfEdgeMap, trace: &HullTrace) -> Result<Option<String>> {
    let dist = DistanceField::from_root(map);
    for row in &trace.rows {
        let h = hull_of_radius(map, &dist, row.r)?;
        if h.perimeter != row.boundary_edges || h.n_vertices != row.vertices {
            return Ok(Some(format!(
                "r = {}: bfs ({}, {}) vs trace ({}, {})",
                row.r, h.perimeter, h.n_vertices, row.boundary_edges, row.vertices
            )));
        }
    }
    Ok(None)
}
