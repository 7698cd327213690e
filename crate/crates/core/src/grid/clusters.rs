use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use super::{BoxGrid, Site, SiteField, SiteRect};
use crate::geom::Rect;

/// Which label defines the clusters: non-nice (ugly) or non-good (bad) boxes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Which {
    Ugly,
    Bad,
}

/// Maximal L-infinity connected sets of marked sites, ordered by minimal site.
#[derive(Clone, Debug, PartialEq)]
pub struct BadClusterSet {
    grid: BoxGrid,
    rect: SiteRect,
    clusters: Vec<Vec<Site>>,
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra.max(rb)] = ra.min(rb);
        }
    }
}

/// Clusters of bad sites.
pub fn bad_clusters(field: &SiteField) -> BadClusterSet {
    clusters_of(field, Which::Bad)
}

pub fn clusters_of(field: &SiteField, which: Which) -> BadClusterSet {
    let rect = *field.rect();
    let marked = |z: Site| match which {
        Which::Bad => !field.is_good(z),
        Which::Ugly => !field.is_nice(z),
    };
    let mut uf = UnionFind::new(rect.len());
    for z in rect.sites().filter(|&z| marked(z)) {
        // Half of the eight neighbours suffices.
        for d in [(1, 0), (-1, 1), (0, 1), (1, 1)] {
            let w = (z.0 + d.0, z.1 + d.1);
            if rect.contains(w) && marked(w) {
                uf.union(rect.index(z), rect.index(w));
            }
        }
    }
    let mut by_root: HashMap<usize, usize> = HashMap::new();
    let mut clusters: Vec<Vec<Site>> = Vec::new();
    let mut sorted: Vec<Site> = rect.sites().filter(|&z| marked(z)).collect();
    sorted.sort();
    for z in sorted {
        let root = uf.find(rect.index(z));
        let k = *by_root.entry(root).or_insert_with(|| {
            clusters.push(Vec::new());
            clusters.len() - 1
        });
        clusters[k].push(z);
    }
    BadClusterSet {
        grid: *field.grid(),
        rect,
        clusters,
    }
}

impl BadClusterSet {
    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn rect(&self) -> &SiteRect {
        &self.rect
    }

    /// Each cluster's sites in lexicographic order.
    pub fn clusters(&self) -> &[Vec<Site>] {
        &self.clusters
    }

    pub fn len(&self) -> usize {
        self.clusters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clusters.is_empty()
    }

    /// The boxes making up the cluster's region (closures of half-open boxes).
    pub fn region_boxes(&self, k: usize) -> Vec<Rect> {
        self.clusters[k]
            .iter()
            .map(|&z| self.grid.box_rect(z))
            .collect()
    }

    /// The open squares of half-width `r` around each box centre whose union
    /// is the cluster's `r/2` neighbourhood.
    pub fn neighbourhood_squares(&self, k: usize) -> Vec<Rect> {
        let r = self.grid.r();
        self.clusters[k]
            .iter()
            .map(|&z| {
                let c = self.grid.center(z);
                Rect {
                    x0: c.x - r,
                    x1: c.x + r,
                    y0: c.y - r,
                    y1: c.y + r,
                }
            })
            .collect()
    }

    /// JSON list of site lists.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!(self
            .clusters
            .iter()
            .map(|c| c.iter().map(|z| [z.0, z.1]).collect::<Vec<_>>())
            .collect::<Vec<_>>())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use std::collections::VecDeque;

    fn field(bad: &[Site], rect: SiteRect) -> SiteField {
        SiteField::from_bad_sites(BoxGrid::new(1.0, 1).unwrap(), rect, bad)
    }

    #[test]
    fn no_bad_sites() {
        let f = field(&[], SiteRect::new(0, 4, 0, 4).unwrap());
        assert!(bad_clusters(&f).is_empty());
    }

    #[test]
    fn diagonal_is_adjacent() {
        let f = field(&[(0, 0), (1, 1)], SiteRect::new(-2, 2, -2, 2).unwrap());
        let c = bad_clusters(&f);
        assert_eq!(c.clusters(), &[vec![(0, 0), (1, 1)]]);
    }

    fn bfs_components(bad: &[Site]) -> Vec<Vec<Site>> {
        let set: std::collections::BTreeSet<Site> = bad.iter().copied().collect();
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        for &s in &set {
            if seen.contains(&s) {
                continue;
            }
            let mut comp = vec![];
            let mut q = VecDeque::from([s]);
            seen.insert(s);
            while let Some(z) = q.pop_front() {
                comp.push(z);
                for dx in -1..=1 {
                    for dy in -1..=1 {
                        let w = (z.0 + dx, z.1 + dy);
                        if set.contains(&w) && seen.insert(w) {
                            q.push_back(w);
                        }
                    }
                }
            }
            comp.sort();
            out.push(comp);
        }
        out.sort();
        out
    }

    proptest! {
        #[test]
        fn matches_bfs(bits in proptest::collection::vec(proptest::bool::weighted(0.35), 400)) {
            let rect = SiteRect::new(0, 19, 0, 19).unwrap();
            let bad: Vec<Site> = rect.sites().zip(bits).filter(|(_, b)| *b).map(|(z, _)| z).collect();
            let c = bad_clusters(&field(&bad, rect));
            let mut got = c.clusters().to_vec();
            got.sort();
            prop_assert_eq!(got, bfs_components(&bad));
            // Ordered by minimal site.
            let mins: Vec<Site> = c.clusters().iter().map(|c| c[0]).collect();
            let mut sorted = mins.clone();
            sorted.sort();
            prop_assert_eq!(mins, sorted);
        }
    }
}
