//! Passage times and geodesics.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use super::TimedGraph;
use crate::geom::{DelaunayGraph, Point};
use crate::paths::SaPath;

/// A time-minimising path with the fewest vertices; remaining ties go to the
/// smallest predecessor.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Geodesic {
    pub path: SaPath,
    pub time: f64,
}

impl Geodesic {
    pub fn vertex_count(&self) -> usize {
        self.path.vertices.len()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.path.vertices.contains(&v)
    }
}

#[derive(Clone, Copy, PartialEq)]
struct Key {
    time: f64,
    hops: usize,
    v: usize,
}

impl Eq for Key {}

impl Ord for Key {
    fn cmp(&self, o: &Self) -> Ordering {
        // Reversed for a min-heap.
        o.time
            .total_cmp(&self.time)
            .then(o.hops.cmp(&self.hops))
            .then(o.v.cmp(&self.v))
    }
}

impl PartialOrd for Key {
    fn partial_cmp(&self, o: &Self) -> Option<Ordering> {
        Some(self.cmp(o))
    }
}

/// Dijkstra on `(time, hops)` in lexicographic order from `s` to `t`.
/// `times[v][k]` is the time of the edge to `graph.neighbors(v)[k]`.
pub fn shortest_path(
    graph: &DelaunayGraph,
    times: &[Vec<f64>],
    s: usize,
    t: usize,
) -> Option<Geodesic> {
    let n = graph.len();
    let mut best: Vec<(f64, usize)> = vec![(f64::INFINITY, usize::MAX); n];
    let mut pred = vec![usize::MAX; n];
    let mut done = vec![false; n];
    let mut heap = BinaryHeap::new();
    best[s] = (0.0, 0);
    heap.push(Key {
        time: 0.0,
        hops: 0,
        v: s,
    });
    while let Some(Key { time, hops, v }) = heap.pop() {
        if done[v] || (time, hops) != best[v] {
            continue;
        }
        done[v] = true;
        if v == t {
            break;
        }
        for (k, &u) in graph.neighbors(v).iter().enumerate() {
            if done[u] {
                continue;
            }
            let cand = (time + times[v][k], hops + 1);
            let cur = best[u];
            let better = match cand.0.total_cmp(&cur.0).then(cand.1.cmp(&cur.1)) {
                Ordering::Less => true,
                Ordering::Equal => v < pred[u],
                Ordering::Greater => false,
            };
            if better {
                let improved = cand != cur;
                best[u] = cand;
                pred[u] = v;
                if improved {
                    heap.push(Key {
                        time: cand.0,
                        hops: cand.1,
                        v: u,
                    });
                }
            }
        }
    }
    if !done[t] {
        return None;
    }
    let mut path = vec![t];
    let mut w = t;
    while w != s {
        w = pred[w];
        path.push(w);
    }
    path.reverse();
    Some(Geodesic {
        path: SaPath { vertices: path },
        time: best[t].0,
    })
}

impl TimedGraph {
    /// Geodesic between vertices `s` and `t`.
    pub fn geodesic(&self, s: usize, t: usize) -> Geodesic {
        shortest_path(self.graph(), self.times(), s, t).expect("Delaunay graphs are connected")
    }
}

/// `T(x, y)` between the vertices nearest to `x` and `y`.
pub fn passage_time(tg: &TimedGraph, x: Point, y: Point) -> (f64, Geodesic) {
    let tri = tg.triangulation();
    let g = tg.geodesic(tri.locate(x), tri.locate(y));
    (g.time, g)
}
