//! Walking through the Voronoi cells crossed by a segment.

use serde::Serialize;

use super::{passage_time, TimedGraph};
use crate::error::{Error, Result};
use crate::geom::{Point, Triangulation};
use crate::paths::SaPath;

/// Vertices whose Voronoi cells the segment `[a, b]` crosses, in order.
///
/// From the cell of `w` at parameter `t`, the segment leaves through the
/// bisector with the neighbour `u` whose crossing parameter
/// `(|u|^2 - |w|^2 - 2 a.(u - w)) / (2 d.(u - w))` is smallest among those
/// with `d.(u - w) > 0`; ties go to the smaller index.
pub fn segment_walk(tri: &Triangulation, a: Point, b: Point) -> Result<SaPath> {
    let win = tri.point_set().window();
    if !win.contains(a) || !win.contains(b) {
        return Err(Error::OutOfWindow(format!(
            "segment {a:?} -> {b:?} leaves the window"
        )));
    }
    let d = (b.x - a.x, b.y - a.y);
    let mut w = tri.locate(a);
    let mut path = vec![w];
    let mut t = 0.0f64;
    loop {
        if path.len() > tri.vertex_count() {
            return Err(Error::Internal("segment walk revisited a cell".into()));
        }
        let pw = tri.point(w);
        let mut next: Option<(f64, usize)> = None;
        for &u in tri.graph().neighbors(w) {
            let pu = tri.point(u);
            let (ex, ey) = (pu.x - pw.x, pu.y - pw.y);
            let slope = d.0 * ex + d.1 * ey;
            if slope <= 0.0 {
                continue;
            }
            let num = (pu.x * pu.x + pu.y * pu.y)
                - (pw.x * pw.x + pw.y * pw.y)
                - 2.0 * (a.x * ex + a.y * ey);
            let tu = (num / (2.0 * slope)).max(t);
            if next.is_none_or(|(bt, bu)| tu < bt || (tu == bt && u < bu)) {
                next = Some((tu, u));
            }
        }
        match next {
            Some((tu, u)) if tu < 1.0 => {
                t = tu;
                w = u;
                path.push(u);
            }
            _ => break,
        }
    }
    Ok(SaPath { vertices: path })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ZnResult {
    /// Passage time along the segment walk.
    pub z: f64,
    /// Geodesic passage time between the same endpoints.
    pub t: f64,
    pub walk: SaPath,
}

/// Passage time along the segment walk from the origin to `(n, 0)`, next to
/// the geodesic time `T_n`.
pub fn z_n(tg: &TimedGraph, n: f64) -> Result<ZnResult> {
    let end = Point::new(n, 0.0);
    let walk = segment_walk(tg.triangulation(), Point::ORIGIN, end)?;
    let mut z = 0.0;
    for (u, v) in walk.edges() {
        z += tg
            .time(u, v)
            .ok_or_else(|| Error::Internal(format!("walk step {u} -> {v} is not an edge")))?;
    }
    let (t, _) = passage_time(tg, Point::ORIGIN, end);
    Ok(ZnResult { z, t, walk })
}
