//! Number of Delaunay triangles met by a segment, and the stabbing number of
//! `[0, n]^2` over boundary-to-boundary segments.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::predicates::orient;
use crate::geom::{Point, Triangulation, NO_TRIANGLE};

fn sgn(x: f64) -> i8 {
    if x > 0.0 {
        1
    } else if x < 0.0 {
        -1
    } else {
        0
    }
}

fn on_segment(a: Point, b: Point, p: Point) -> bool {
    p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
}

/// Closed segments `[a, b]` and `[c, d]` share a point.
fn segments_meet(a: Point, b: Point, c: Point, d: Point) -> bool {
    let o1 = sgn(orient(a, b, c));
    let o2 = sgn(orient(a, b, d));
    let o3 = sgn(orient(c, d, a));
    let o4 = sgn(orient(c, d, b));
    if o1 * o2 < 0 && o3 * o4 < 0 {
        return true;
    }
    (o1 == 0 && on_segment(a, b, c))
        || (o2 == 0 && on_segment(a, b, d))
        || (o3 == 0 && on_segment(c, d, a))
        || (o4 == 0 && on_segment(c, d, b))
}

fn in_closed_triangle(q: &[Point; 3], p: Point) -> bool {
    (0..3).all(|i| orient(q[i], q[(i + 1) % 3], p) >= 0.0)
}

/// Exact test: the closed ccw triangle meets the closed segment.
fn triangle_meets_segment(q: &[Point; 3], a: Point, b: Point) -> bool {
    in_closed_triangle(q, a)
        || in_closed_triangle(q, b)
        || (0..3).any(|i| segments_meet(a, b, q[i], q[(i + 1) % 3]))
}

/// Triangles whose closed region meets `[a, b]`, by a breadth-first walk from
/// the triangle containing `a`. The segment must lie in the triangulated region.
pub fn cells_on_segment(tri: &Triangulation, a: Point, b: Point) -> Result<usize> {
    let (Some(t0), Some(_)) = (tri.locate_triangle(a), tri.locate_triangle(b)) else {
        return Err(Error::OutOfWindow(format!(
            "segment {a:?} -> {b:?} leaves the triangulated region"
        )));
    };
    let mut seen = vec![false; tri.triangles().len()];
    seen[t0] = true;
    let mut q = VecDeque::from([t0]);
    let mut count = 0;
    while let Some(t) = q.pop_front() {
        count += 1;
        for &n in &tri.neighbors()[t] {
            if n == NO_TRIANGLE || seen[n as usize] {
                continue;
            }
            let n = n as usize;
            seen[n] = true;
            if triangle_meets_segment(&tri.triangle_points(n), a, b) {
                q.push_back(n);
            }
        }
    }
    Ok(count)
}

/// Reference count over all triangles.
pub fn cells_on_segment_brute(tri: &Triangulation, a: Point, b: Point) -> usize {
    (0..tri.triangles().len())
        .filter(|&t| triangle_meets_segment(&tri.triangle_points(t), a, b))
        .count()
}

/// Van der Corput radical inverse in base 2.
fn van_der_corput(mut k: u64) -> f64 {
    let mut x = 0.0;
    let mut f = 0.5;
    while k > 0 {
        if k & 1 == 1 {
            x += f;
        }
        k >>= 1;
        f *= 0.5;
    }
    x
}

/// Sample points on the boundary of `[0, n]^2`: `samples` per unit boundary
/// segment, at the midpoint first and then at nested van der Corput offsets.
pub fn boundary_samples(n: usize, samples: usize) -> Vec<Point> {
    let nf = n as f64;
    let mut out = Vec::with_capacity(4 * n * samples);
    for side in 0..4 {
        for k in 0..n {
            for j in 0..samples {
                let s = k as f64 + van_der_corput(j as u64 + 1);
                out.push(match side {
                    0 => Point::new(s, 0.0),
                    1 => Point::new(nf, s),
                    2 => Point::new(nf - s, nf),
                    _ => Point::new(0.0, nf - s),
                });
            }
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Stab {
    /// Largest count found; a lower bound on the stabbing number.
    pub value: usize,
    pub pairs: u64,
    pub witness: (Point, Point),
}

/// Maximum of [`cells_on_segment`] over pairs of boundary samples.
pub fn stabbing_number(tri: &Triangulation, n: usize, samples: usize, budget: u64) -> Result<Stab> {
    if n == 0 || samples == 0 {
        return Err(Error::invalid("n and samples must be positive"));
    }
    let pts = boundary_samples(n, samples);
    let m = pts.len() as u64;
    let pairs = m * (m - 1) / 2;
    if pairs > budget {
        return Err(Error::BudgetExceeded {
            budget,
            hint: format!("{pairs} segment pairs; lower the samples per side"),
        });
    }
    let best = (0..pts.len())
        .into_par_iter()
        .map(|i| -> Result<(usize, usize, usize)> {
            let mut best = (0usize, i, i);
            for j in i + 1..pts.len() {
                let c = cells_on_segment(tri, pts[i], pts[j])?;
                if c > best.0 {
                    best = (c, i, j);
                }
            }
            Ok(best)
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold((0, 0, 0), |acc, b| if b.0 > acc.0 { b } else { acc });
    Ok(Stab {
        value: best.0,
        pairs,
        witness: (pts[best.1], pts[best.2]),
    })
}
