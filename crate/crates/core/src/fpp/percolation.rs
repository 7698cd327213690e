//! Bernoulli bond percolation on the Delaunay graph.

use std::collections::VecDeque;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geom::voronoi::clip_segment;
use crate::geom::{
    sample_delaunay, DelaunayGraph, IntensityModel, Point, Rect, Triangulation, Window,
};
use crate::grid::{site_field, BoxGrid, Site, SiteRect};
use crate::paths::for_each_sa_prefix;
use crate::seeds::{edge_key, mix, unit_f64};
use crate::stats::{ols, wilson};

const BOND_SALT: u64 = 0x626f_6e64;

/// Open/closed state of every edge; `open[v][k]` belongs to the edge to
/// `graph.neighbors(v)[k]`.
#[derive(Clone, Debug, PartialEq)]
pub struct BondField {
    pub p: f64,
    /// Set when the field is keyed by edge coordinates and can be rebuilt on
    /// another triangulation.
    pub seed: Option<u64>,
    open: Vec<Vec<bool>>,
}

impl BondField {
    /// Each edge open with probability `p`, keyed by its endpoint coordinates.
    pub fn sample(tri: &Triangulation, p: f64, seed: u64) -> Result<BondField> {
        if !(0.0..=1.0).contains(&p) {
            return Err(Error::invalid(format!("p = {p} is not a probability")));
        }
        let g = tri.graph();
        let key = mix(seed, BOND_SALT);
        let open = (0..g.len())
            .map(|v| {
                g.neighbors(v)
                    .iter()
                    .map(|&u| unit_f64(edge_key(key, tri.point(v), tri.point(u))) < p)
                    .collect()
            })
            .collect();
        Ok(BondField {
            p,
            seed: Some(seed),
            open,
        })
    }

    /// Field given by a predicate on undirected edges `(u, v)` with `u < v`.
    pub fn from_fn(graph: &DelaunayGraph, p: f64, f: impl Fn(usize, usize) -> bool) -> BondField {
        let open = (0..graph.len())
            .map(|v| {
                graph
                    .neighbors(v)
                    .iter()
                    .map(|&u| f(v.min(u), v.max(u)))
                    .collect()
            })
            .collect();
        BondField {
            p,
            seed: None,
            open,
        }
    }

    pub fn is_open_at(&self, v: usize, k: usize) -> bool {
        self.open[v][k]
    }

    pub fn is_open(&self, graph: &DelaunayGraph, u: usize, v: usize) -> Option<bool> {
        let k = graph.neighbors(u).binary_search(&v).ok()?;
        Some(self.open[u][k])
    }
}

/// Breadth-first search over open edges from `v0`, stopping once `cap`
/// vertices are found. Returns the sorted vertex set.
fn cluster(
    bf: &BondField,
    graph: &DelaunayGraph,
    v0: usize,
    cap: usize,
    want_open: bool,
) -> Vec<usize> {
    let mut seen = vec![false; graph.len()];
    seen[v0] = true;
    let mut out = vec![v0];
    let mut q = VecDeque::from([v0]);
    'bfs: while let Some(v) = q.pop_front() {
        for (k, &u) in graph.neighbors(v).iter().enumerate() {
            if bf.open[v][k] == want_open && !seen[u] {
                seen[u] = true;
                out.push(u);
                if out.len() >= cap {
                    break 'bfs;
                }
                q.push_back(u);
            }
        }
    }
    out.sort_unstable();
    out
}

/// `C_0`: vertices joined to `v0` by open paths.
pub fn open_cluster(bf: &BondField, graph: &DelaunayGraph, v0: usize) -> Vec<usize> {
    cluster(bf, graph, v0, usize::MAX, true)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClusterTailConfig {
    pub window: Window,
    pub intensity: IntensityModel,
    pub p: f64,
    pub sizes: Vec<usize>,
    pub replicas: usize,
    pub seed: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct TailRow {
    pub n: usize,
    pub hits: usize,
    pub replicas: usize,
    /// Estimate of `P(|C_0| >= n)`.
    pub prob: f64,
    pub se: f64,
    /// 95% Wilson interval.
    pub lo: f64,
    pub hi: f64,
}

impl TailRow {
    fn new(n: usize, hits: usize, replicas: usize) -> TailRow {
        let prob = hits as f64 / replicas as f64;
        let (lo, hi) = wilson(hits, replicas, 1.96);
        TailRow {
            n,
            hits,
            replicas,
            prob,
            se: (prob * (1.0 - prob) / replicas as f64).sqrt(),
            lo,
            hi,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ClusterTail {
    pub rows: Vec<TailRow>,
    /// Minus the least-squares slope of `log P` on `n` over positive rows; a
    /// diagnostic only.
    pub rate: Option<f64>,
}

/// Empirical tail of the open-cluster size at the vertex nearest the origin.
pub fn cluster_tail(cfg: &ClusterTailConfig) -> Result<ClusterTail> {
    if !(0.0..=1.0).contains(&cfg.p) {
        return Err(Error::invalid(format!(
            "p = {} is not a probability",
            cfg.p
        )));
    }
    if cfg.sizes.is_empty() || cfg.replicas == 0 {
        return Err(Error::invalid("sizes and replicas must be nonempty"));
    }
    let cap = *cfg.sizes.iter().max().unwrap();
    let sizes: Vec<usize> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let seed = mix(cfg.seed, r as u64);
            let tri = sample_delaunay(cfg.window, cfg.intensity, seed)?;
            let bf = BondField::sample(&tri, cfg.p, seed)?;
            let v0 = tri.locate(Point::ORIGIN);
            Ok(cluster(&bf, tri.graph(), v0, cap, true).len())
        })
        .collect::<Result<_>>()?;
    let rows: Vec<TailRow> = cfg
        .sizes
        .iter()
        .map(|&n| TailRow::new(n, sizes.iter().filter(|&&s| s >= n).count(), cfg.replicas))
        .collect();
    let pos: Vec<&TailRow> = rows.iter().filter(|r| r.hits > 0).collect();
    let rate = (pos.len() >= 2).then(|| {
        let x: Vec<f64> = pos.iter().map(|r| r.n as f64).collect();
        let y: Vec<f64> = pos.iter().map(|r| r.prob.ln()).collect();
        -ols(&x, &y).0
    });
    Ok(ClusterTail { rows, rate })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct GoodBox {
    pub y: bool,
    /// Every box within sup-distance 2 (side `L/2`) is nice.
    pub nice_ring: bool,
    /// No closed path joins the inner box to the boundary of the middle box.
    pub no_closed_crossing: bool,
    /// `y` recomputed from the points in the outer `5L/2` box only.
    pub local_y: bool,
}

fn square(c: Point, half: f64) -> Rect {
    Rect {
        x0: c.x - half,
        x1: c.x + half,
        y0: c.y - half,
        y1: c.y + half,
    }
}

fn closed_crossing(
    tri: &Triangulation,
    bf: &BondField,
    inner: &Rect,
    c: Point,
    half_mid: f64,
) -> bool {
    let g = tri.graph();
    let outside = |p: Point| (p.x - c.x).abs() >= half_mid || (p.y - c.y).abs() >= half_mid;
    let mut seen = vec![false; g.len()];
    let mut q = VecDeque::new();
    for (u, v) in g.edges() {
        if bf.is_open(g, u, v) == Some(false)
            && clip_segment(tri.point(u), tri.point(v), inner).is_some()
        {
            for w in [u, v] {
                if !seen[w] {
                    seen[w] = true;
                    q.push_back(w);
                }
            }
        }
    }
    while let Some(v) = q.pop_front() {
        if outside(tri.point(v)) {
            return true;
        }
        for (k, &u) in g.neighbors(v).iter().enumerate() {
            if !bf.open[v][k] && !seen[u] {
                seen[u] = true;
                q.push_back(u);
            }
        }
    }
    false
}

fn good_box_parts(tri: &Triangulation, bf: &BondField, l: f64, z: Site) -> Result<(bool, bool)> {
    let grid = BoxGrid::new(l / 2.0, 1)?;
    let rect = SiteRect::new(z.0 - 2, z.0 + 2, z.1 - 2, z.1 + 2)?;
    let field = site_field(tri.point_set(), l / 2.0, 1, rect)?;
    let nice_ring = rect.sites().all(|s| field.is_nice(s));
    let c = grid.center(z);
    let inner = square(c, l / 4.0);
    let crossing = closed_crossing(tri, bf, &inner, c, 3.0 * l / 4.0);
    Ok((nice_ring, !crossing))
}

/// The good-box indicator `Y_z(L)` for the box of side `L/2` centred at
/// `z L/2`, with the locality check on the surrounding `5L/2` box.
pub fn good_box_y(tri: &Triangulation, bf: &BondField, l: f64, z: Site) -> Result<GoodBox> {
    let Some(seed) = bf.seed else {
        return Err(Error::invalid("locality check needs a keyed bond field"));
    };
    if !(l > 0.0) {
        return Err(Error::invalid("L must be positive"));
    }
    let (nice_ring, no_closed_crossing) = good_box_parts(tri, bf, l, z)?;
    let c = BoxGrid::new(l / 2.0, 1)?.center(z);
    let local_ps = tri.point_set().restricted(&square(c, 5.0 * l / 4.0));
    let local_y = match Triangulation::build_any(local_ps) {
        Ok(local) if !local.is_degenerate() => {
            let lbf = BondField::sample(&local, bf.p, seed)?;
            let (a, b) = good_box_parts(&local, &lbf, l, z)?;
            a && b
        }
        _ => false,
    };
    Ok(GoodBox {
        y: nice_ring && no_closed_crossing,
        nice_ring,
        no_closed_crossing,
        local_y,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PathDensityConfig {
    pub window: Window,
    pub intensity: IntensityModel,
    pub p: f64,
    pub m_list: Vec<usize>,
    pub a_list: Vec<f64>,
    pub replicas: usize,
    pub seed: u64,
    pub budget: u64,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DensityRow {
    pub a: f64,
    pub m: usize,
    pub hits: usize,
    pub replicas: usize,
    pub prob: f64,
    pub se: f64,
}

/// True iff some self-avoiding path of `m` edges from `v0` has at most
/// `a m` open edges. Longer paths have such a prefix, so this also decides
/// paths of length at least `m`.
pub fn sparse_path_exists(
    bf: &BondField,
    graph: &DelaunayGraph,
    v0: usize,
    m: usize,
    a: f64,
    budget: u64,
) -> Result<bool> {
    let limit = a * m as f64;
    let mut found = false;
    for_each_sa_prefix(graph, v0, m, &[], budget, |p| {
        if found {
            return false;
        }
        let open = p
            .windows(2)
            .filter(|w| bf.is_open(graph, w[0], w[1]) == Some(true))
            .count();
        if open as f64 > limit {
            return false;
        }
        if p.len() == m + 1 {
            found = true;
            return false;
        }
        true
    })?;
    Ok(found)
}

pub fn path_density_probe(cfg: &PathDensityConfig) -> Result<Vec<DensityRow>> {
    if cfg.m_list.is_empty() || cfg.a_list.is_empty() || cfg.replicas == 0 {
        return Err(Error::invalid(
            "m grid, a grid and replicas must be nonempty",
        ));
    }
    let per: Vec<Vec<bool>> = (0..cfg.replicas)
        .into_par_iter()
        .map(|r| {
            let seed = mix(cfg.seed, r as u64);
            let tri = sample_delaunay(cfg.window, cfg.intensity, seed)?;
            let bf = BondField::sample(&tri, cfg.p, seed)?;
            let v0 = tri.locate(Point::ORIGIN);
            let mut out = Vec::new();
            for &a in &cfg.a_list {
                for &m in &cfg.m_list {
                    out.push(sparse_path_exists(&bf, tri.graph(), v0, m, a, cfg.budget)?);
                }
            }
            Ok(out)
        })
        .collect::<Result<_>>()?;
    let mut rows = Vec::new();
    let mut k = 0;
    for &a in &cfg.a_list {
        for &m in &cfg.m_list {
            let hits = per.iter().filter(|v| v[k]).count();
            let prob = hits as f64 / cfg.replicas as f64;
            rows.push(DensityRow {
                a,
                m,
                hits,
                replicas: cfg.replicas,
                prob,
                se: (prob * (1.0 - prob) / cfg.replicas as f64).sqrt(),
            });
            k += 1;
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{build_delaunay, PointSet};
    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};

    fn tri(seed: u64, half: f64, lambda: f64) -> Triangulation {
        sample_delaunay(
            Window::centered(half, 0.0).unwrap(),
            IntensityModel::homogeneous(lambda),
            seed,
        )
        .unwrap()
    }

    #[test]
    fn extreme_p() {
        let t = tri(1, 5.0, 1.0);
        let g = t.graph();
        let closed = BondField::sample(&t, 0.0, 1).unwrap();
        assert_eq!(open_cluster(&closed, g, 3), vec![3]);
        let open = BondField::sample(&t, 1.0, 1).unwrap();
        assert_eq!(open_cluster(&open, g, 3), (0..g.len()).collect::<Vec<_>>());
    }

    #[test]
    fn tail_extremes() {
        let base = ClusterTailConfig {
            window: Window::centered(6.0, 0.0).unwrap(),
            intensity: IntensityModel::homogeneous(1.0),
            p: 0.0,
            sizes: vec![1, 2, 10],
            replicas: 20,
            seed: 2,
        };
        let t = cluster_tail(&base).unwrap();
        assert_eq!(t.rows[0].prob, 1.0);
        assert_eq!(t.rows[1].prob, 0.0);
        let t = cluster_tail(&ClusterTailConfig { p: 1.0, ..base }).unwrap();
        assert!(t.rows.iter().all(|r| r.prob == 1.0));
    }

    #[test]
    fn density_trivial_cases() {
        let cfg = PathDensityConfig {
            window: Window::centered(6.0, 0.0).unwrap(),
            intensity: IntensityModel::homogeneous(1.0),
            p: 1.0,
            m_list: vec![3, 5],
            a_list: vec![1.0, 0.1],
            replicas: 10,
            seed: 3,
            budget: 1 << 24,
        };
        let rows = path_density_probe(&cfg).unwrap();
        for r in rows {
            let want = if r.a >= 1.0 { 1.0 } else { 0.0 };
            assert_eq!(r.prob, want, "{r:?}");
        }
    }

    #[test]
    fn good_box_all_open_with_dense_points() {
        // A jittered lattice fine enough that every sub-box is occupied.
        let l: f64 = 2.0;
        let h = l / 2.0 / 18.0;
        let w = Window::centered(3.0, 0.0).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(4);
        let n = (6.0 / h).round() as i64;
        let mut pts = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let x = -3.0 + (i as f64 + 0.5) * h + rng.random_range(-0.1 * h..0.1 * h);
                let y = -3.0 + (j as f64 + 0.5) * h + rng.random_range(-0.1 * h..0.1 * h);
                pts.push(Point::new(x, y));
            }
        }
        let t = build_delaunay(&PointSet::new(pts, w, 0).unwrap()).unwrap();
        let open = BondField::sample(&t, 1.0, 9).unwrap();
        let gb = good_box_y(&t, &open, l, (0, 0)).unwrap();
        assert!(gb.y && gb.local_y, "{gb:?}");
        let closed = BondField::sample(&t, 0.0, 9).unwrap();
        let gb = good_box_y(&t, &closed, l, (0, 0)).unwrap();
        assert!(gb.nice_ring && !gb.y && !gb.local_y, "{gb:?}");
    }

    #[test]
    fn good_box_empty_neighbourhood() {
        let w = Window::centered(20.0, 0.0).unwrap();
        let pts = vec![
            Point::new(15.0, 15.0),
            Point::new(16.0, 15.0),
            Point::new(15.0, 17.0),
        ];
        let t = build_delaunay(&PointSet::new(pts, w, 0).unwrap()).unwrap();
        let bf = BondField::sample(&t, 1.0, 0).unwrap();
        let gb = good_box_y(&t, &bf, 6.0, (0, 0)).unwrap();
        assert!(!gb.y && !gb.local_y);
    }

    fn reach(g: &DelaunayGraph, bf: &BondField, v0: usize) -> Vec<usize> {
        // Fixed-point iteration over all edges.
        let mut inn = vec![false; g.len()];
        inn[v0] = true;
        loop {
            let mut changed = false;
            for (u, v) in g.edges() {
                if bf.is_open(g, u, v).unwrap() && inn[u] != inn[v] {
                    inn[u] = true;
                    inn[v] = true;
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        (0..g.len()).filter(|&v| inn[v]).collect()
    }

    proptest! {
        #[test]
        fn cluster_matches_reachability(seed in any::<u64>(), p in 0.0..1.0f64) {
            let w = Window::centered(1.5, 0.0).unwrap();
            let ps = crate::geom::sample_poisson(w, IntensityModel::homogeneous(1.0), seed).unwrap();
            prop_assume!((3..=10).contains(&ps.len()));
            let Ok(t) = build_delaunay(&ps) else { return Ok(()) };
            let bf = BondField::sample(&t, p, seed).unwrap();
            for v0 in 0..t.vertex_count() {
                prop_assert_eq!(open_cluster(&bf, t.graph(), v0), reach(t.graph(), &bf, v0));
            }
        }
    }
}
