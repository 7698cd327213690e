//! Passage time before and after removing or inserting one point.

use serde::Serialize;

use super::TimedGraph;
use crate::error::{Error, Result};
use crate::geom::Point;
use crate::paths::gamma_path_membership;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct SurgeryOutcome {
    pub before: f64,
    pub after: f64,
    /// Removal: the vertex lies on the geodesic. Insertion: the point lies in
    /// the perturbation region of the geodesic.
    pub touches_geodesic: bool,
    /// Insertion only: the new point became one of the two endpoints.
    pub endpoint_moved: bool,
}

impl SurgeryOutcome {
    /// The implication `!touches_geodesic => after <= before`, vacuous when an
    /// endpoint moved.
    pub fn holds(&self) -> bool {
        self.touches_geodesic || self.endpoint_moved || self.after <= self.before
    }
}

fn endpoints(tg: &TimedGraph, n: f64) -> (usize, usize) {
    let tri = tg.triangulation();
    (tri.locate(Point::ORIGIN), tri.locate(Point::new(n, 0.0)))
}

/// Removes vertex `v` and recomputes `T_n`; surviving edges keep their times.
pub fn surgery_remove(tg: &TimedGraph, n: f64, v: usize) -> Result<SurgeryOutcome> {
    let (s, e) = endpoints(tg, n);
    if v == s || v == e {
        return Err(Error::invalid(format!(
            "vertex {v} is an endpoint of the geodesic"
        )));
    }
    if v >= tg.triangulation().vertex_count() {
        return Err(Error::invalid(format!("vertex {v} out of range")));
    }
    let geo = tg.geodesic(s, e);
    let after_tri = tg.triangulation().remove_point(v)?;
    let after = tg.retimed(after_tri);
    let (s2, e2) = endpoints(&after, n);
    Ok(SurgeryOutcome {
        before: geo.time,
        after: after.geodesic(s2, e2).time,
        touches_geodesic: geo.contains(v),
        endpoint_moved: false,
    })
}

/// Inserts `x` and recomputes `T_n`; surviving edges keep their times.
pub fn surgery_insert(tg: &TimedGraph, n: f64, x: Point) -> Result<SurgeryOutcome> {
    let (s, e) = endpoints(tg, n);
    let geo = tg.geodesic(s, e);
    let tri = tg.triangulation();
    let in_gamma = gamma_path_membership(tri, &geo.path, x)?;
    let after_tri = tri.insert_point(x)?;
    let xi = after_tri.vertex_count() - 1;
    let after = tg.retimed(after_tri);
    let (s2, e2) = endpoints(&after, n);
    Ok(SurgeryOutcome {
        before: geo.time,
        after: after.geodesic(s2, e2).time,
        touches_geodesic: in_gamma,
        endpoint_moved: s2 == xi || e2 == xi,
    })
}
