//! Shrinking-ball walk between two vertices.

use super::SaPath;
use crate::error::{Error, Result};
use crate::geom::Triangulation;

/// Walks from `v` to `u`. At `w` the next vertex is the first point hit by
/// the ball with diameter `[w, w + a (u - w)]` as `a` grows from 0; that point
/// is a Delaunay neighbour of `w` and lies strictly closer to `u`.
pub fn ball_walk(tri: &Triangulation, v: usize, u: usize) -> Result<SaPath> {
    let n = tri.vertex_count();
    if u >= n || v >= n {
        return Err(Error::invalid("vertex out of range"));
    }
    if u == v {
        return Err(Error::invalid("endpoints must differ"));
    }
    let target = tri.point(u);
    let mut path = vec![v];
    let mut w = v;
    while w != u {
        if path.len() > n {
            return Err(Error::Internal(format!(
                "ball walk from {v} to {u} did not terminate"
            )));
        }
        let pw = tri.point(w);
        let (dx, dy) = (target.x - pw.x, target.y - pw.y);
        let mut best: Option<(f64, usize)> = None;
        for &p in tri.graph().neighbors(w) {
            if p == u {
                best = Some((0.0, p));
                break;
            }
            let pp = tri.point(p);
            let (ex, ey) = (pp.x - pw.x, pp.y - pw.y);
            let dot = ex * dx + ey * dy;
            if dot <= 0.0 {
                continue;
            }
            let a = (ex * ex + ey * ey) / dot;
            if best.is_none_or(|(ba, bp)| a < ba || (a == ba && p < bp)) {
                best = Some((a, p));
            }
        }
        let Some((_, next)) = best else {
            return Err(Error::Internal(format!("ball walk stuck at {w}")));
        };
        path.push(next);
        w = next;
    }
    Ok(SaPath { vertices: path })
}
