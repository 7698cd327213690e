//! Self-avoiding paths on the Delaunay graph.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geom::{DelaunayGraph, Triangulation};
use crate::grid::{segment_sites, BoxGrid, Site};

/// Vertex sequence with pairwise distinct entries, consecutive ones adjacent.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct SaPath {
    pub vertices: Vec<usize>,
}

impl SaPath {
    pub fn new(graph: &DelaunayGraph, vertices: Vec<usize>) -> Result<SaPath> {
        if vertices.is_empty() {
            return Err(Error::invalid("a path needs at least one vertex"));
        }
        let mut seen = BTreeSet::new();
        for &v in &vertices {
            if v >= graph.len() {
                return Err(Error::invalid(format!("vertex {v} out of range")));
            }
            if !seen.insert(v) {
                return Err(Error::invalid(format!("vertex {v} repeats")));
            }
        }
        for w in vertices.windows(2) {
            if !graph.is_adjacent(w[0], w[1]) {
                return Err(Error::invalid(format!(
                    "{} and {} are not adjacent",
                    w[0], w[1]
                )));
            }
        }
        Ok(SaPath { vertices })
    }

    /// Number of edges.
    pub fn len(&self) -> usize {
        self.vertices.len().saturating_sub(1)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.vertices.windows(2).map(|w| (w[0], w[1]))
    }
}

fn budget_error(budget: u64) -> Error {
    Error::BudgetExceeded {
        budget,
        hint: "path enumeration too large; lower the length".into(),
    }
}

/// Depth-first walk over all self-avoiding paths of at most `r` edges from
/// `start`, avoiding `forbidden`. `visit` sees every prefix; returning false
/// prunes its extensions. `budget` bounds the number of visited prefixes.
pub fn for_each_sa_prefix(
    graph: &DelaunayGraph,
    start: usize,
    r: usize,
    forbidden: &[usize],
    budget: u64,
    mut visit: impl FnMut(&[usize]) -> bool,
) -> Result<u64> {
    if start >= graph.len() {
        return Err(Error::invalid(format!("start {start} out of range")));
    }
    let mut blocked = vec![false; graph.len()];
    for &v in forbidden {
        if v < graph.len() {
            blocked[v] = true;
        }
    }
    if blocked[start] {
        return Ok(0);
    }
    let mut path = vec![start];
    blocked[start] = true;
    let mut stack: Vec<usize> = vec![0];
    let mut visited = 1u64;
    if !visit(&path) {
        return Ok(visited);
    }
    while let Some(k) = stack.last_mut() {
        let v = *path.last().unwrap();
        let nb = graph.neighbors(v);
        if path.len() > r || *k >= nb.len() {
            stack.pop();
            let w = path.pop().unwrap();
            if path.is_empty() {
                break;
            }
            blocked[w] = false;
            continue;
        }
        let u = nb[*k];
        *k += 1;
        if blocked[u] {
            continue;
        }
        visited += 1;
        if visited > budget {
            return Err(budget_error(budget));
        }
        path.push(u);
        if visit(&path) {
            blocked[u] = true;
            stack.push(0);
        } else {
            path.pop();
        }
    }
    Ok(visited)
}

/// Calls `visit` on every self-avoiding path of exactly `r` edges from `start`.
pub fn for_each_sa_path(
    graph: &DelaunayGraph,
    start: usize,
    r: usize,
    budget: u64,
    mut visit: impl FnMut(&[usize]),
) -> Result<u64> {
    let mut n = 0;
    for_each_sa_prefix(graph, start, r, &[], budget, |p| {
        if p.len() == r + 1 {
            n += 1;
            visit(p);
            false
        } else {
            true
        }
    })?;
    Ok(n)
}

/// Number of self-avoiding `r`-edge paths from `start` avoiding `forbidden`.
pub fn count_sa_paths(
    graph: &DelaunayGraph,
    start: usize,
    r: usize,
    forbidden: &[usize],
    budget: u64,
) -> Result<u64> {
    let mut n = 0u64;
    for_each_sa_prefix(graph, start, r, forbidden, budget, |p| {
        if p.len() == r + 1 {
            n += 1;
            false
        } else {
            true
        }
    })?;
    Ok(n)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct DegreeBound {
    pub count: u64,
    pub bound: f64,
    pub ok: bool,
}

/// Compares `N_r` with the maximum over `(r-1)`-edge paths of the product of
/// their vertex degrees.
pub fn degree_product_bound_check(
    graph: &DelaunayGraph,
    start: usize,
    r: usize,
    budget: u64,
) -> Result<DegreeBound> {
    let count = count_sa_paths(graph, start, r, &[], budget)?;
    let bound = if r == 0 {
        1.0
    } else {
        let mut best = 0.0f64;
        for_each_sa_path(graph, start, r - 1, budget, |p| {
            let prod: f64 = p.iter().map(|&v| graph.degree(v) as f64).product();
            best = best.max(prod);
        })?;
        best
    };
    Ok(DegreeBound {
        count,
        bound,
        ok: count as f64 <= bound,
    })
}

/// `kappa(r) = log N_r` from `start`; `-inf` when no path exists.
pub fn kappa(graph: &DelaunayGraph, start: usize, r: usize, budget: u64) -> Result<f64> {
    Ok((count_sa_paths(graph, start, r, &[], budget)? as f64).ln())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct CoveringExtremes {
    /// Fewest boxes met by a path of exactly `r` edges (`None` if there is none).
    pub min: Option<usize>,
    /// Most boxes met by a path of at most `r` edges.
    pub max: usize,
}

/// Extremes of the box-animal size over self-avoiding paths from `start`,
/// with boxes of side `l` and shift 1.
///
/// Animals grow along a path, so the minimum over lengths `>= r` is attained
/// at length `r` and the maximum over lengths `<= r` is over all prefixes.
pub fn covering_extremes(
    tri: &Triangulation,
    start: usize,
    r: usize,
    l: f64,
    budget: u64,
) -> Result<CoveringExtremes> {
    let grid = BoxGrid::new(l, 1)?;
    let graph = tri.graph();
    let mut counts: HashMap<Site, u32> = HashMap::new();
    counts.insert(grid.site_of(tri.point(start)), 1);
    // Sites added by the segment ending at each depth.
    let mut added: Vec<Vec<Site>> = Vec::new();
    let mut min: Option<usize> = None;
    let mut max = 1usize;
    let mut seg = BTreeSet::new();
    for_each_sa_prefix(graph, start, r, &[], budget, |p| {
        let depth = p.len() - 1;
        while added.len() > depth.saturating_sub(1) {
            for z in added.pop().unwrap() {
                let c = counts.get_mut(&z).unwrap();
                *c -= 1;
                if *c == 0 {
                    counts.remove(&z);
                }
            }
        }
        if depth > 0 {
            seg.clear();
            segment_sites(
                &grid,
                tri.point(p[depth - 1]),
                tri.point(p[depth]),
                &mut seg,
            );
            let list: Vec<Site> = seg.iter().copied().collect();
            for &z in &list {
                *counts.entry(z).or_insert(0) += 1;
            }
            added.push(list);
        }
        let size = counts.len();
        max = max.max(size);
        if depth == r {
            min = Some(min.map_or(size, |m| m.min(size)));
        }
        true
    })?;
    Ok(CoveringExtremes { min, max })
}
