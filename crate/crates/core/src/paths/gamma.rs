//! Locations whose insertion destroys a Delaunay edge.
//!
//! For an interior edge this is the intersection of the two incident open
//! circumdisks. A hull edge has one incident triangle; the other side is the
//! ghost triangle at infinity, whose "disk" is the open outer half-plane plus
//! the open edge itself.

use std::cmp::Ordering;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use super::SaPath;
use crate::error::{Error, Result};
use crate::geom::predicates::{incircle_sos, orient, strictly_between};
use crate::geom::{Circumdisk, Point, Triangulation};

/// The region of one edge as the list of incident circumdisks.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EdgeRegion {
    pub edge: (usize, usize),
    pub disks: Vec<Circumdisk>,
    pub hull: bool,
}

fn incident(tri: &Triangulation, u: usize, v: usize) -> Result<(Option<usize>, Option<usize>)> {
    let (a, b) = tri.edge_triangles(u, v);
    if a.is_none() && b.is_none() {
        return Err(Error::invalid(format!("({u}, {v}) is not a Delaunay edge")));
    }
    Ok((a, b))
}

pub fn edge_region(tri: &Triangulation, u: usize, v: usize) -> Result<EdgeRegion> {
    let (a, b) = incident(tri, u, v)?;
    let disks = [a, b]
        .into_iter()
        .flatten()
        .map(|t| tri.circumdisks()[t])
        .collect();
    Ok(EdgeRegion {
        edge: (u, v),
        disks,
        hull: a.is_none() || b.is_none(),
    })
}

/// Strict inside test for the circumdisk of `t`, perturbed as if `x` carried
/// the next free vertex index.
fn in_disk(tri: &Triangulation, t: usize, x: Point) -> bool {
    let q = tri.triangles()[t].map(|v| (tri.point(v as usize), v));
    let xi = tri.vertex_count() as u32;
    incircle_sos([q[0], q[1], q[2], (x, xi)]) == Ordering::Greater
}

/// Beyond the hull edge `u -> v` (interior on the left), or strictly on it.
fn beyond(tri: &Triangulation, u: usize, v: usize, x: Point) -> bool {
    let (pu, pv) = (tri.point(u), tri.point(v));
    let o = orient(pu, pv, x);
    o < 0.0 || (o == 0.0 && strictly_between(pu, pv, x))
}

/// True iff inserting `x` removes the Delaunay edge `(u, v)`.
pub fn gamma_edge_membership(tri: &Triangulation, u: usize, v: usize, x: Point) -> Result<bool> {
    match incident(tri, u, v)? {
        (Some(a), Some(b)) => Ok(in_disk(tri, a, x) && in_disk(tri, b, x)),
        (Some(a), None) => Ok(in_disk(tri, a, x) && beyond(tri, u, v, x)),
        (None, Some(b)) => Ok(in_disk(tri, b, x) && beyond(tri, v, u, x)),
        (None, None) => unreachable!(),
    }
}

/// Definitional test: re-triangulate with `x` and look for the edge.
pub fn gamma_edge_oracle(tri: &Triangulation, u: usize, v: usize, x: Point) -> Result<bool> {
    incident(tri, u, v)?;
    let after = tri.insert_point(x)?;
    Ok(!after.graph().is_adjacent(u, v))
}

/// True iff inserting `x` removes some edge of the path.
pub fn gamma_path_membership(tri: &Triangulation, path: &SaPath, x: Point) -> Result<bool> {
    for (u, v) in path.edges() {
        if gamma_edge_membership(tri, u, v, x)? {
            return Ok(true);
        }
    }
    Ok(false)
}

/// Area of the intersection of two disks.
pub fn lens_area(c1: Point, r1: f64, c2: Point, r2: f64) -> f64 {
    let d = c1.dist(c2);
    if d >= r1 + r2 {
        return 0.0;
    }
    if d <= (r1 - r2).abs() {
        let r = r1.min(r2);
        return std::f64::consts::PI * r * r;
    }
    let a1 = ((d * d + r1 * r1 - r2 * r2) / (2.0 * d * r1))
        .clamp(-1.0, 1.0)
        .acos();
    let a2 = ((d * d + r2 * r2 - r1 * r1) / (2.0 * d * r2))
        .clamp(-1.0, 1.0)
        .acos();
    let k = (-d + r1 + r2) * (d + r1 - r2) * (d - r1 + r2) * (d + r1 + r2);
    r1 * r1 * a1 + r2 * r2 * a2 - 0.5 * k.max(0.0).sqrt()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GammaArea {
    pub area: f64,
    pub se: f64,
    pub samples: usize,
    /// Hull edges of the path, left out of the area.
    pub hull_edges: usize,
}

/// Monte Carlo area of the union of the regions of the path's interior edges.
pub fn gamma_path_area(
    tri: &Triangulation,
    path: &SaPath,
    m: usize,
    seed: u64,
) -> Result<GammaArea> {
    if m < 100 {
        return Err(Error::invalid(format!(
            "need at least 100 samples, got {m}"
        )));
    }
    let mut interior = Vec::new();
    let mut hull_edges = 0;
    for (u, v) in path.edges() {
        match incident(tri, u, v)? {
            (Some(a), Some(b)) => interior.push((a, b)),
            _ => hull_edges += 1,
        }
    }
    if interior.is_empty() {
        return Ok(GammaArea {
            area: 0.0,
            se: 0.0,
            samples: m,
            hull_edges,
        });
    }
    let (mut x0, mut x1, mut y0, mut y1) = (
        f64::INFINITY,
        f64::NEG_INFINITY,
        f64::INFINITY,
        f64::NEG_INFINITY,
    );
    for &(a, b) in &interior {
        // The intersection lies inside either disk; the smaller one bounds it.
        let da = tri.circumdisks()[a];
        let db = tri.circumdisks()[b];
        let d = if da.r2 <= db.r2 { da } else { db };
        let r = d.r2.sqrt();
        x0 = x0.min(d.center.x - r);
        x1 = x1.max(d.center.x + r);
        y0 = y0.min(d.center.y - r);
        y1 = y1.max(d.center.y + r);
    }
    let box_area = (x1 - x0) * (y1 - y0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut hits = 0usize;
    for _ in 0..m {
        let x = Point::new(rng.random_range(x0..x1), rng.random_range(y0..y1));
        if interior
            .iter()
            .any(|&(a, b)| in_disk(tri, a, x) && in_disk(tri, b, x))
        {
            hits += 1;
        }
    }
    let p = hits as f64 / m as f64;
    Ok(GammaArea {
        area: box_area * p,
        se: box_area * (p * (1.0 - p) / m as f64).sqrt(),
        samples: m,
        hull_edges,
    })
}
