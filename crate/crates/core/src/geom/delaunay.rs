//! Incremental Bowyer-Watson triangulation with ghost triangles.
//!
//! Every hull edge carries a ghost triangle `(u, v, INF)` whose third vertex is
//! the point at infinity, so the hull is a closed manifold and insertion outside
//! the hull is the same cavity dig as insertion inside it.

use std::cmp::Ordering;
use std::collections::HashMap;

use serde::Serialize;

use super::graph::{delaunay_graph_small, DelaunayGraph};
use super::point_set::{sample_poisson, IntensityModel, Point, PointSet, Rect, Window};
use super::predicates::{circumcircle, incircle_sos, orient, strictly_between};
use crate::error::{Error, Result};

pub(crate) const INF: u32 = u32::MAX;
pub const NO_TRIANGLE: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Circumdisk {
    pub center: Point,
    pub r2: f64,
}

/// Working mesh including ghost triangles. Ghosts keep `INF` in slot 2.
#[derive(Clone, Debug)]
struct Mesh {
    tris: Vec<[u32; 3]>,
    /// `nbr[t][i]` is the triangle across the edge opposite `tris[t][i]`.
    nbr: Vec<[u32; 3]>,
    last: usize,
    in_cavity: Vec<u32>,
    rejected: Vec<u32>,
    epoch: u32,
}

fn is_ghost(t: &[u32; 3]) -> bool {
    t[2] == INF
}

impl Mesh {
    fn seed(a: u32, b: u32, c: u32) -> Mesh {
        // Slot 0 is the real triangle, then ghosts across (a,b), (b,c), (c,a).
        let tris = vec![[a, b, c], [b, a, INF], [c, b, INF], [a, c, INF]];
        let nbr = vec![[2, 3, 1], [3, 2, 0], [1, 3, 0], [2, 1, 0]];
        Mesh {
            tris,
            nbr,
            last: 0,
            in_cavity: vec![0; 4],
            rejected: vec![0; 4],
            epoch: 0,
        }
    }

    fn conflict(&self, pts: &[Point], t: usize, p: u32) -> bool {
        let tri = self.tris[t];
        let pp = pts[p as usize];
        if is_ghost(&tri) {
            let (u, v) = (pts[tri[0] as usize], pts[tri[1] as usize]);
            let o = orient(u, v, pp);
            o > 0.0 || (o == 0.0 && strictly_between(u, v, pp))
        } else {
            let q = |k: usize| (pts[tri[k] as usize], tri[k]);
            incircle_sos([q(0), q(1), q(2), (pp, p)]) == Ordering::Greater
        }
    }

    /// Visibility walk to a triangle in conflict with `p`.
    fn locate(&self, pts: &[Point], p: u32) -> Result<usize> {
        let pp = pts[p as usize];
        let mut t = self.last;
        if is_ghost(&self.tris[t]) {
            t = self.nbr[t][2] as usize;
        }
        let limit = 4 * self.tris.len() + 16;
        let mut step = 0usize;
        'walk: while step < limit {
            step += 1;
            let tri = self.tris[t];
            for k in 0..3 {
                let i = (k + step) % 3;
                let a = pts[tri[(i + 1) % 3] as usize];
                let b = pts[tri[(i + 2) % 3] as usize];
                if orient(a, b, pp) < 0.0 {
                    let n = self.nbr[t][i] as usize;
                    if is_ghost(&self.tris[n]) {
                        return Ok(n);
                    }
                    t = n;
                    continue 'walk;
                }
            }
            for &v in &tri {
                if pts[v as usize].key() == pp.key() {
                    return Err(Error::DuplicatePoint { x: pp.x, y: pp.y });
                }
            }
            return Ok(t);
        }
        // Unreachable for a valid Delaunay mesh; kept as a safety net.
        for (t, tri) in self.tris.iter().enumerate() {
            if tri
                .iter()
                .any(|&v| v != INF && pts[v as usize].key() == pp.key())
            {
                return Err(Error::DuplicatePoint { x: pp.x, y: pp.y });
            }
            if self.conflict(pts, t, p) {
                return Ok(t);
            }
        }
        Err(Error::Internal("point location failed".into()))
    }

    fn insert(&mut self, pts: &[Point], p: u32) -> Result<()> {
        let start = self.locate(pts, p)?;
        self.epoch += 1;
        let epoch = self.epoch;
        let mut cavity = vec![start];
        self.in_cavity[start] = epoch;
        let mut boundary: Vec<(u32, u32, u32)> = Vec::new();
        let mut head = 0;
        while head < cavity.len() {
            let t = cavity[head];
            head += 1;
            for i in 0..3 {
                let n = self.nbr[t][i] as usize;
                if self.in_cavity[n] != epoch && self.rejected[n] != epoch {
                    if self.conflict(pts, n, p) {
                        self.in_cavity[n] = epoch;
                        cavity.push(n);
                        continue;
                    }
                    self.rejected[n] = epoch;
                }
                if self.in_cavity[n] != epoch {
                    let tri = self.tris[t];
                    boundary.push((tri[(i + 1) % 3], tri[(i + 2) % 3], n as u32));
                }
            }
        }

        let mut slots = cavity;
        while slots.len() < boundary.len() {
            self.tris.push([0; 3]);
            self.nbr.push([0; 3]);
            self.in_cavity.push(0);
            self.rejected.push(0);
            slots.push(self.tris.len() - 1);
        }
        debug_assert_eq!(slots.len(), boundary.len());

        let by_u: HashMap<u32, usize> = boundary
            .iter()
            .enumerate()
            .map(|(k, &(u, _, _))| (u, slots[k]))
            .collect();
        let by_v: HashMap<u32, usize> = boundary
            .iter()
            .enumerate()
            .map(|(k, &(_, v, _))| (v, slots[k]))
            .collect();

        for (k, &(u, v, outer)) in boundary.iter().enumerate() {
            let s = slots[k];
            // Unrotated triangle (u, v, p).
            let mut tri = [u, v, p];
            let mut nb = [by_u[&v] as u32, by_v[&u] as u32, outer];
            if u == INF {
                tri = [v, p, u];
                nb = [nb[1], nb[2], nb[0]];
            } else if v == INF {
                tri = [p, u, v];
                nb = [nb[2], nb[0], nb[1]];
            }
            self.tris[s] = tri;
            self.nbr[s] = nb;
            let o = outer as usize;
            let j = (0..3)
                .find(|&j| self.tris[o][j] != u && self.tris[o][j] != v)
                .ok_or_else(|| Error::Internal("broken cavity boundary".into()))?;
            self.nbr[o][j] = s as u32;
        }
        self.last = slots[0];
        Ok(())
    }
}

fn hilbert_d(order: u32, mut x: u32, mut y: u32) -> u64 {
    let n = 1u32 << order;
    let mut d = 0u64;
    let mut s = n / 2;
    while s > 0 {
        let rx = u32::from(x & s > 0);
        let ry = u32::from(y & s > 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = n - 1 - x;
                y = n - 1 - y;
            }
            std::mem::swap(&mut x, &mut y);
        }
        s /= 2;
    }
    d
}

fn hilbert_order(pts: &[Point]) -> Vec<u32> {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
    for p in pts {
        x0 = x0.min(p.x);
        x1 = x1.max(p.x);
        y0 = y0.min(p.y);
        y1 = y1.max(p.y);
    }
    let span = (x1 - x0).max(y1 - y0).max(f64::MIN_POSITIVE);
    let scale = 65535.0 / span;
    let mut keyed: Vec<(u64, u32)> = pts
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let hx = ((p.x - x0) * scale) as u32;
            let hy = ((p.y - y0) * scale) as u32;
            (hilbert_d(16, hx.min(65535), hy.min(65535)), i as u32)
        })
        .collect();
    keyed.sort_unstable();
    keyed.into_iter().map(|(_, i)| i).collect()
}

/// Delaunay triangulation of a point set.
///
/// Sets of fewer than three points, or of collinear points, are carried as a
/// degenerate triangulation with no triangles whose graph is the path through
/// the points in line order.
#[derive(Clone, Debug)]
pub struct Triangulation {
    ps: PointSet,
    mesh: Option<Mesh>,
    triangles: Vec<[u32; 3]>,
    neighbors: Vec<[u32; 3]>,
    circumdisks: Vec<Circumdisk>,
    hull: Vec<(u32, u32)>,
    edge_tri: HashMap<(u32, u32), u32>,
    graph: DelaunayGraph,
}

/// Builds the Delaunay triangulation; at least three non-collinear points are required.
pub fn build_delaunay(ps: &PointSet) -> Result<Triangulation> {
    if ps.len() < 3 {
        return Err(Error::DegenerateInput(format!(
            "need at least 3 points, got {}",
            ps.len()
        )));
    }
    let t = Triangulation::build_any(ps.clone())?;
    if t.triangles.is_empty() {
        return Err(Error::DegenerateInput("all points are collinear".into()));
    }
    Ok(t)
}

/// Samples a Poisson configuration and triangulates it.
pub fn sample_delaunay(
    window: Window,
    intensity: IntensityModel,
    seed: u64,
) -> Result<Triangulation> {
    build_delaunay(&sample_poisson(window, intensity, seed)?)
}

impl Triangulation {
    /// Triangulates any nonempty set, falling back to the degenerate form.
    pub fn build_any(ps: PointSet) -> Result<Triangulation> {
        if ps.is_empty() {
            return Err(Error::EmptyConfiguration("no points to triangulate".into()));
        }
        let pts = ps.points();
        let order = hilbert_order(pts);
        let seed = if pts.len() >= 3 {
            let (a, b) = (order[0], order[1]);
            order[2..]
                .iter()
                .position(|&c| orient(pts[a as usize], pts[b as usize], pts[c as usize]) != 0.0)
                .map(|k| (a, b, order[k + 2]))
        } else {
            None
        };
        let Some((a, b, c)) = seed else {
            return Ok(Triangulation::degenerate(ps));
        };
        let mut mesh = if orient(pts[a as usize], pts[b as usize], pts[c as usize]) > 0.0 {
            Mesh::seed(a, b, c)
        } else {
            Mesh::seed(b, a, c)
        };
        for &p in &order {
            if p != a && p != b && p != c {
                mesh.insert(pts, p)?;
            }
        }
        Ok(Triangulation::from_mesh(ps, mesh))
    }

    fn degenerate(ps: PointSet) -> Triangulation {
        let graph = if ps.len() < 3 {
            delaunay_graph_small(&ps).expect("nonempty")
        } else {
            let mut idx: Vec<usize> = (0..ps.len()).collect();
            let pts = ps.points();
            idx.sort_by(|&i, &j| {
                pts[i]
                    .x
                    .total_cmp(&pts[j].x)
                    .then(pts[i].y.total_cmp(&pts[j].y))
            });
            DelaunayGraph::from_edges(ps.len(), idx.windows(2).map(|w| (w[0], w[1])))
        };
        Triangulation {
            ps,
            mesh: None,
            triangles: Vec::new(),
            neighbors: Vec::new(),
            circumdisks: Vec::new(),
            hull: Vec::new(),
            edge_tri: HashMap::new(),
            graph,
        }
    }

    fn from_mesh(ps: PointSet, mut mesh: Mesh) -> Triangulation {
        let pts = ps.points();
        let mut new_id = vec![NO_TRIANGLE; mesh.tris.len()];
        let mut triangles = Vec::new();
        let mut hull_next: HashMap<u32, u32> = HashMap::new();
        for (t, tri) in mesh.tris.iter().enumerate() {
            if is_ghost(tri) {
                hull_next.insert(tri[1], tri[0]);
            } else {
                new_id[t] = triangles.len() as u32;
                triangles.push(*tri);
            }
        }
        let neighbors: Vec<[u32; 3]> = mesh
            .tris
            .iter()
            .enumerate()
            .filter(|(_, tri)| !is_ghost(tri))
            .map(|(t, _)| mesh.nbr[t].map(|n| new_id[n as usize]))
            .collect();
        let circumdisks = triangles
            .iter()
            .map(|t| {
                let (center, r2) =
                    circumcircle(pts[t[0] as usize], pts[t[1] as usize], pts[t[2] as usize]);
                Circumdisk { center, r2 }
            })
            .collect();
        let start = *hull_next.keys().min().expect("hull is nonempty");
        let mut hull = Vec::with_capacity(hull_next.len());
        let mut u = start;
        loop {
            let v = hull_next[&u];
            hull.push((u, v));
            u = v;
            if u == start {
                break;
            }
        }
        let mut edge_tri = HashMap::with_capacity(3 * triangles.len());
        for (t, tri) in triangles.iter().enumerate() {
            for i in 0..3 {
                edge_tri.insert((tri[i], tri[(i + 1) % 3]), t as u32);
            }
        }
        let graph = DelaunayGraph::from_edges(
            pts.len(),
            triangles.iter().flat_map(|t| {
                [
                    (t[0] as usize, t[1] as usize),
                    (t[1] as usize, t[2] as usize),
                    (t[2] as usize, t[0] as usize),
                ]
            }),
        );
        mesh.last = mesh.last.min(mesh.tris.len() - 1);
        Triangulation {
            ps,
            mesh: Some(mesh),
            triangles,
            neighbors,
            circumdisks,
            hull,
            edge_tri,
            graph,
        }
    }

    pub fn point_set(&self) -> &PointSet {
        &self.ps
    }

    pub fn points(&self) -> &[Point] {
        self.ps.points()
    }

    pub fn point(&self, v: usize) -> Point {
        self.ps.point(v)
    }

    pub fn vertex_count(&self) -> usize {
        self.ps.len()
    }

    /// Triangles as ccw vertex triples.
    pub fn triangles(&self) -> &[[u32; 3]] {
        &self.triangles
    }

    /// `neighbors()[t][i]` is the triangle across the edge opposite vertex `i`,
    /// or [`NO_TRIANGLE`] on the hull.
    pub fn neighbors(&self) -> &[[u32; 3]] {
        &self.neighbors
    }

    pub fn circumdisks(&self) -> &[Circumdisk] {
        &self.circumdisks
    }

    /// Hull edges in counter-clockwise order (interior on the left).
    pub fn hull(&self) -> &[(u32, u32)] {
        &self.hull
    }

    pub fn graph(&self) -> &DelaunayGraph {
        &self.graph
    }

    pub fn is_degenerate(&self) -> bool {
        self.triangles.is_empty()
    }

    pub fn edge_count(&self) -> usize {
        self.graph.edge_count()
    }

    pub fn triangle_points(&self, t: usize) -> [Point; 3] {
        self.triangles[t].map(|v| self.ps.point(v as usize))
    }

    /// Triangles incident to the undirected edge `(u, v)`: the one with `u -> v`
    /// in ccw order and the one with `v -> u`.
    pub fn edge_triangles(&self, u: usize, v: usize) -> (Option<usize>, Option<usize>) {
        let (u, v) = (u as u32, v as u32);
        (
            self.edge_tri.get(&(u, v)).map(|&t| t as usize),
            self.edge_tri.get(&(v, u)).map(|&t| t as usize),
        )
    }

    pub fn is_hull_edge(&self, u: usize, v: usize) -> bool {
        let (a, b) = self.edge_triangles(u, v);
        a.is_some() != b.is_some()
    }

    /// Triangles sorted into a coordinate-based canonical form, independent of
    /// vertex numbering and storage order.
    pub fn canonical_triangles(&self) -> Vec<[(f64, f64); 3]> {
        let key = |p: Point| (p.x, p.y);
        let cmp = |a: &(f64, f64), b: &(f64, f64)| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1));
        let mut out: Vec<[(f64, f64); 3]> = self
            .triangles
            .iter()
            .map(|t| {
                let p = t.map(|v| key(self.ps.point(v as usize)));
                let m = (0..3).min_by(|&i, &j| cmp(&p[i], &p[j])).unwrap();
                [p[m], p[(m + 1) % 3], p[(m + 2) % 3]]
            })
            .collect();
        out.sort_by(|a, b| {
            (0..3)
                .map(|i| cmp(&a[i], &b[i]))
                .find(|o| o.is_ne())
                .unwrap_or(Ordering::Equal)
        });
        out
    }

    /// Canonical edge list as sorted coordinate pairs, usable for degenerate sets.
    pub fn canonical_edges(&self) -> Vec<[(f64, f64); 2]> {
        let cmp = |a: &(f64, f64), b: &(f64, f64)| a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1));
        let mut out: Vec<[(f64, f64); 2]> = self
            .graph
            .edges()
            .map(|(u, v)| {
                let (a, b) = (self.ps.point(u), self.ps.point(v));
                let (a, b) = ((a.x, a.y), (b.x, b.y));
                if cmp(&a, &b).is_le() {
                    [a, b]
                } else {
                    [b, a]
                }
            })
            .collect();
        out.sort_by(|a, b| cmp(&a[0], &b[0]).then(cmp(&a[1], &b[1])));
        out
    }

    /// Returns the triangulation of the point set with `x` appended.
    pub fn insert_point(&self, x: Point) -> Result<Triangulation> {
        let ps = self.ps.with_point(x)?;
        match &self.mesh {
            Some(mesh) => {
                let mut mesh = mesh.clone();
                mesh.insert(ps.points(), (ps.len() - 1) as u32)?;
                Ok(Triangulation::from_mesh(ps, mesh))
            }
            None => Triangulation::build_any(ps),
        }
    }

    /// Returns the triangulation of the point set without vertex `v`, rebuilt
    /// from scratch. Indices above `v` shift down by one.
    pub fn remove_point(&self, v: usize) -> Result<Triangulation> {
        let ps = self.ps.without_point(v)?;
        Triangulation::build_any(ps)
    }

    /// Nearest vertex to `x` by greedy descent on the Delaunay graph, lowest
    /// index on exact distance ties.
    pub fn locate(&self, x: Point) -> usize {
        self.locate_from(0, x)
    }

    pub fn locate_from(&self, start: usize, x: Point) -> usize {
        let pts = self.ps.points();
        let mut v = start;
        let mut d = pts[v].dist2(x);
        loop {
            let mut moved = false;
            for &u in self.graph.neighbors(v) {
                let du = pts[u].dist2(x);
                if du < d {
                    v = u;
                    d = du;
                    moved = true;
                }
            }
            if moved {
                continue;
            }
            // Collect every vertex at the same distance reachable through ties.
            let mut best = v;
            let mut stack = vec![v];
            let mut seen = vec![v];
            let mut closer = None;
            while let Some(w) = stack.pop() {
                for &u in self.graph.neighbors(w) {
                    let du = pts[u].dist2(x);
                    if du < d {
                        closer = Some((u, du));
                        break;
                    }
                    if du == d && !seen.contains(&u) {
                        seen.push(u);
                        stack.push(u);
                        best = best.min(u);
                    }
                }
                if closer.is_some() {
                    break;
                }
            }
            match closer {
                Some((u, du)) => {
                    v = u;
                    d = du;
                }
                None => return best,
            }
        }
    }

    /// A triangle whose closed region contains `p`, if `p` is inside the hull.
    pub fn locate_triangle(&self, p: Point) -> Option<usize> {
        if self.triangles.is_empty() {
            return None;
        }
        let mut t = 0usize;
        let limit = 4 * self.triangles.len() + 16;
        'walk: for step in 0..limit {
            let q = self.triangle_points(t);
            for k in 0..3 {
                let i = (k + step) % 3;
                if orient(q[(i + 1) % 3], q[(i + 2) % 3], p) < 0.0 {
                    let n = self.neighbors[t][i];
                    if n == NO_TRIANGLE {
                        return None;
                    }
                    t = n as usize;
                    continue 'walk;
                }
            }
            return Some(t);
        }
        (0..self.triangles.len()).find(|&t| {
            let q = self.triangle_points(t);
            (0..3).all(|i| orient(q[i], q[(i + 1) % 3], p) >= 0.0)
        })
    }

    /// JSON dump: `{"vertices": [[x, y], ...], "triangles": [[a, b, c], ...]}`.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "vertices": self.ps.points().iter().map(|p| [p.x, p.y]).collect::<Vec<_>>(),
            "triangles": self.triangles,
        })
    }
}

/// Average degree over the vertices lying in `region`.
pub fn mean_degree(tri: &Triangulation, region: &Rect) -> Result<f64> {
    if region.is_empty() {
        return Err(Error::invalid("empty analysis region"));
    }
    let mut sum = 0usize;
    let mut count = 0usize;
    for (v, p) in tri.points().iter().enumerate() {
        if region.contains(*p) {
            sum += tri.graph().degree(v);
            count += 1;
        }
    }
    if count == 0 {
        return Err(Error::invalid("no vertices in the analysis region"));
    }
    Ok(sum as f64 / count as f64)
}
