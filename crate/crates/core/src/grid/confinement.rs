//! Check that Delaunay cells meeting a cluster's boxes stay inside the
//! cluster's `r/2` neighbourhood.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::{BadClusterSet, Site, Which};
use crate::geom::Triangulation;

type P = (f64, f64);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Violation {
    pub cluster: usize,
    pub triangle: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConfinementReport {
    pub which: Which,
    pub clusters_checked: usize,
    /// Clusters within two sites of the field border: skipped, since their
    /// surroundings are not fully observed.
    pub clusters_skipped: usize,
    pub cells_checked: usize,
    pub violations: Vec<Violation>,
}

impl ConfinementReport {
    pub fn ok(&self) -> bool {
        self.violations.is_empty()
    }
}

fn project(t: &[P; 3], n: P) -> (f64, f64) {
    let d = t.map(|p| p.0 * n.0 + p.1 * n.1);
    (d[0].min(d[1]).min(d[2]), d[0].max(d[1]).max(d[2]))
}

fn axes(t: &[P; 3]) -> [P; 5] {
    let e = |i: usize| {
        let (a, b) = (t[i], t[(i + 1) % 3]);
        (a.1 - b.1, b.0 - a.0)
    };
    [(1.0, 0.0), (0.0, 1.0), e(0), e(1), e(2)]
}

/// Separating-axis test of a closed triangle against a rectangle; `open`
/// makes the rectangle open so mere contact does not count.
fn meets_rect(t: &[P; 3], x0: f64, x1: f64, y0: f64, y1: f64, open: bool) -> bool {
    let corners = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)];
    axes(t).iter().all(|&n| {
        let (tl, th) = project(t, n);
        let d = corners.map(|c| c.0 * n.0 + c.1 * n.1);
        let rl = d.iter().copied().fold(f64::INFINITY, f64::min);
        let rh = d.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        if open {
            th > rl && tl < rh
        } else {
            th >= rl && tl <= rh
        }
    })
}

/// The closed interval of `x` where the triangle meets the line `y = c`.
fn hline_interval(t: &[P; 3], c: f64) -> Option<(f64, f64)> {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for i in 0..3 {
        let (a, b) = (t[i], t[(i + 1) % 3]);
        if a.1 == c {
            lo = lo.min(a.0);
            hi = hi.max(a.0);
        }
        if (a.1 < c && b.1 > c) || (a.1 > c && b.1 < c) {
            let x = a.0 + (c - a.1) / (b.1 - a.1) * (b.0 - a.0);
            lo = lo.min(x);
            hi = hi.max(x);
        }
    }
    (lo <= hi).then_some((lo, hi))
}

fn contains_point(t: &[P; 3], p: P) -> bool {
    let o = |a: P, b: P| (b.0 - a.0) * (p.1 - a.1) - (b.1 - a.1) * (p.0 - a.0);
    let s = [o(t[0], t[1]), o(t[1], t[2]), o(t[2], t[0])];
    s.iter().all(|&v| v >= 0.0) || s.iter().all(|&v| v <= 0.0)
}

/// True iff the closed triangle (in lattice units, centres at integers) lies in
/// the union of open squares `(z - 1, z + 1)^2` over `z` in `c`.
fn inside_neighbourhood(t: &[P; 3], c: &BTreeSet<Site>) -> bool {
    let has = |a: i64, b: i64| c.contains(&(a, b));
    let lx = t.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
    let hx = t.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
    let ly = t.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
    let hy = t.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let (ax0, ax1) = (lx.floor() as i64 - 1, hx.ceil() as i64);
    let (by0, by1) = (ly.floor() as i64 - 1, hy.ceil() as i64);
    for a in ax0..=ax1 {
        for b in by0..=by1 {
            let (fa, fb) = (a as f64, b as f64);
            // Open cell (a, a+1) x (b, b+1).
            if !(has(a, b) || has(a + 1, b) || has(a, b + 1) || has(a + 1, b + 1))
                && meets_rect(t, fa, fa + 1.0, fb, fb + 1.0, true)
            {
                return false;
            }
            // Open horizontal edge y = b, x in (a, a+1).
            if !(has(a, b) || has(a + 1, b)) {
                if let Some((l, h)) = hline_interval(t, fb) {
                    if l < fa + 1.0 && h > fa {
                        return false;
                    }
                }
            }
            // Open vertical edge x = a, y in (b, b+1).
            if !(has(a, b) || has(a, b + 1)) {
                let swapped = t.map(|p| (p.1, p.0));
                if let Some((l, h)) = hline_interval(&swapped, fa) {
                    if l < fb + 1.0 && h > fb {
                        return false;
                    }
                }
            }
            if !has(a, b) && contains_point(t, (fa, fb)) {
                return false;
            }
        }
    }
    true
}

/// For every cluster away from the field border and every Delaunay triangle
/// meeting one of its boxes, checks that the triangle lies in the cluster's
/// neighbourhood.
pub fn check_cell_confinement(
    tri: &Triangulation,
    clusters: &BadClusterSet,
    which: Which,
) -> ConfinementReport {
    let grid = clusters.grid();
    let rect = clusters.rect();
    let mut owner: HashMap<Site, usize> = HashMap::new();
    let mut skipped = 0;
    let mut checked = 0;
    let mut sets: Vec<BTreeSet<Site>> = Vec::with_capacity(clusters.len());
    for (k, c) in clusters.clusters().iter().enumerate() {
        let interior = c.iter().all(|&z| rect.depth(z) >= 2);
        if interior {
            checked += 1;
            for &z in c {
                owner.insert(z, k);
            }
        } else {
            skipped += 1;
        }
        sets.push(c.iter().copied().collect());
    }

    let mut violations = Vec::new();
    let mut cells = 0;
    if owner.is_empty() {
        return ConfinementReport {
            which,
            clusters_checked: checked,
            clusters_skipped: skipped,
            cells_checked: 0,
            violations,
        };
    }
    for (ti, _) in tri.triangles().iter().enumerate() {
        let t: [P; 3] = tri.triangle_points(ti).map(|p| grid.to_unit(p));
        // Boxes are [z - 1/2, z + 1/2] in these units.
        let lx = t.iter().map(|p| p.0).fold(f64::INFINITY, f64::min);
        let hx = t.iter().map(|p| p.0).fold(f64::NEG_INFINITY, f64::max);
        let ly = t.iter().map(|p| p.1).fold(f64::INFINITY, f64::min);
        let hy = t.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
        let mut met: Vec<usize> = Vec::new();
        for a in (lx - 0.5).floor() as i64..=(hx + 0.5).ceil() as i64 {
            for b in (ly - 0.5).floor() as i64..=(hy + 0.5).ceil() as i64 {
                let Some(&k) = owner.get(&(a, b)) else {
                    continue;
                };
                if met.contains(&k) {
                    continue;
                }
                let (fa, fb) = (a as f64, b as f64);
                if meets_rect(&t, fa - 0.5, fa + 0.5, fb - 0.5, fb + 0.5, false) {
                    met.push(k);
                }
            }
        }
        for k in met {
            cells += 1;
            if !inside_neighbourhood(&t, &sets[k]) {
                violations.push(Violation {
                    cluster: k,
                    triangle: ti,
                });
            }
        }
    }
    ConfinementReport {
        which,
        clusters_checked: checked,
        clusters_skipped: skipped,
        cells_checked: cells,
        violations,
    }
}
