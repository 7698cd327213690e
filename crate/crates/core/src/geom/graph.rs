use serde::{Deserialize, Serialize};

use super::point_set::PointSet;
use crate::error::{Error, Result};

/// Undirected simple graph over vertex indices with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DelaunayGraph {
    adj: Vec<Vec<usize>>,
}

impl DelaunayGraph {
    /// Builds a graph from an undirected edge list; duplicate edges collapse.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Self {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            assert!(
                u != v && u < n && v < n,
                "bad edge ({u}, {v}) for {n} vertices"
            );
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        DelaunayGraph { adj }
    }

    pub fn len(&self) -> usize {
        self.adj.len()
    }

    pub fn is_empty(&self) -> bool {
        self.adj.is_empty()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.adj.iter().map(Vec::len).collect()
    }

    pub fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Edges as `(u, v)` with `u < v`, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, l)| l.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Induced subgraph on `keep` (sorted, deduplicated); returns the graph and
    /// the original index of each new vertex.
    pub fn induced(&self, keep: &[usize]) -> (DelaunayGraph, Vec<usize>) {
        let mut new_id = vec![usize::MAX; self.adj.len()];
        for (i, &v) in keep.iter().enumerate() {
            new_id[v] = i;
        }
        let mut edges = Vec::new();
        for &u in keep {
            for &v in &self.adj[u] {
                if v > u && new_id[v] != usize::MAX {
                    edges.push((new_id[u], new_id[v]));
                }
            }
        }
        (DelaunayGraph::from_edges(keep.len(), edges), keep.to_vec())
    }
}

/// Voronoi adjacency for configurations of one or two points.
pub fn delaunay_graph_small(ps: &PointSet) -> Result<DelaunayGraph> {
    match ps.len() {
        0 => Err(Error::EmptyConfiguration(
            "no points to build a graph on".into(),
        )),
        1 => Ok(DelaunayGraph::from_edges(1, [])),
        2 => Ok(DelaunayGraph::from_edges(2, [(0, 1)])),
        n => Err(Error::invalid(format!(
            "small-graph construction takes 1 or 2 points, got {n}"
        ))),
    }
}
