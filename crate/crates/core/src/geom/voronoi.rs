//! Voronoi edges as the duals of Delaunay edges.

use super::{Point, Rect, Triangulation};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VoronoiEdge {
    pub a: Point,
    pub b: Point,
    /// The two sites whose cells share this edge.
    pub sites: (usize, usize),
}

/// Clips segment `[a, b]` to a closed rectangle (Liang-Barsky).
pub fn clip_segment(a: Point, b: Point, r: &Rect) -> Option<(Point, Point)> {
    let (dx, dy) = (b.x - a.x, b.y - a.y);
    let mut t0 = 0.0f64;
    let mut t1 = 1.0f64;
    for (p, q) in [
        (-dx, a.x - r.x0),
        (dx, r.x1 - a.x),
        (-dy, a.y - r.y0),
        (dy, r.y1 - a.y),
    ] {
        if p == 0.0 {
            if q < 0.0 {
                return None;
            }
        } else {
            let t = q / p;
            if p < 0.0 {
                t0 = t0.max(t);
            } else {
                t1 = t1.min(t);
            }
        }
    }
    if t0 > t1 {
        return None;
    }
    let at = |t: f64| Point::new(a.x + t * dx, a.y + t * dy);
    Some((at(t0), at(t1)))
}

/// Voronoi edges clipped to `clip`, one per Delaunay edge whose dual meets it,
/// ordered by site pair.
pub fn voronoi_edges(tri: &Triangulation, clip: &Rect) -> Vec<VoronoiEdge> {
    let span = (clip.x1 - clip.x0) + (clip.y1 - clip.y0);
    let mut out = Vec::new();
    for (u, v) in tri.graph().edges() {
        let (t1, t2) = tri.edge_triangles(u, v);
        let seg = match (t1, t2) {
            (Some(a), Some(b)) => Some((tri.circumdisks()[a].center, tri.circumdisks()[b].center)),
            (Some(t), None) | (None, Some(t)) => {
                // Ray from the circumcentre across the hull edge, away from the interior.
                let (pu, pv) = (tri.point(u), tri.point(v));
                let (from, to) = if t1.is_some() { (pu, pv) } else { (pv, pu) };
                let n = Point::new(to.y - from.y, from.x - to.x);
                let len = (n.x * n.x + n.y * n.y).sqrt();
                let c = tri.circumdisks()[t].center;
                let far = span + c.dist(Point::new(clip.x0, clip.y0));
                Some((c, Point::new(c.x + n.x / len * far, c.y + n.y / len * far)))
            }
            (None, None) => {
                // Degenerate configuration: the full bisector line.
                let (pu, pv) = (tri.point(u), tri.point(v));
                let m = Point::new((pu.x + pv.x) / 2.0, (pu.y + pv.y) / 2.0);
                let d = Point::new(pu.y - pv.y, pv.x - pu.x);
                let len = (d.x * d.x + d.y * d.y).sqrt();
                let far = span + m.dist(Point::new(clip.x0, clip.y0));
                Some((
                    Point::new(m.x - d.x / len * far, m.y - d.y / len * far),
                    Point::new(m.x + d.x / len * far, m.y + d.y / len * far),
                ))
            }
        };
        if let Some((a, b)) = seg.and_then(|(a, b)| clip_segment(a, b, clip)) {
            out.push(VoronoiEdge {
                a,
                b,
                sites: (u, v),
            });
        }
    }
    out
}
