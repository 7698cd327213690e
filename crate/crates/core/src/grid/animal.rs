use std::collections::{BTreeSet, HashSet};

use rand::Rng;

use super::{BoxGrid, Site};
use crate::error::{Error, Result};
use crate::geom::Point;

/// Finite L-infinity connected set of sites containing its root.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridAnimal {
    root: Site,
    sites: Vec<Site>,
}

impl GridAnimal {
    pub fn new(root: Site, sites: impl IntoIterator<Item = Site>) -> Result<Self> {
        let set: BTreeSet<Site> = sites.into_iter().collect();
        if !set.contains(&root) {
            return Err(Error::invalid("animal does not contain its root"));
        }
        let a = GridAnimal {
            root,
            sites: set.into_iter().collect(),
        };
        if !a.is_connected() {
            return Err(Error::invalid("animal is not connected"));
        }
        Ok(a)
    }

    pub fn root(&self) -> Site {
        self.root
    }

    pub fn sites(&self) -> &[Site] {
        &self.sites
    }

    pub fn len(&self) -> usize {
        self.sites.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sites.is_empty()
    }

    pub fn contains(&self, z: Site) -> bool {
        self.sites.binary_search(&z).is_ok()
    }

    fn neighbours(&self, z: Site) -> impl Iterator<Item = Site> + '_ {
        (-1..=1)
            .flat_map(move |dx| (-1..=1).map(move |dy| (z.0 + dx, z.1 + dy)))
            .filter(move |&w| w != z && self.contains(w))
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = HashSet::from([self.root]);
        let mut stack = vec![self.root];
        while let Some(z) = stack.pop() {
            for w in self.neighbours(z) {
                if seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == self.sites.len()
    }
}

/// A planar shape mapped onto the box lattice.
#[derive(Clone, Debug, PartialEq)]
pub enum Shape {
    Points(Vec<Point>),
    /// Consecutive points joined by segments.
    Polyline(Vec<Point>),
    Segments(Vec<(Point, Point)>),
}

/// Sites whose half-open box meets the closed segment `[a, b]`.
pub(crate) fn segment_sites(grid: &BoxGrid, a: Point, b: Point, out: &mut BTreeSet<Site>) {
    // In shifted unit coordinates the boxes are [k, k + 1)^2.
    let u = |p: Point| {
        let (x, y) = grid.to_unit(p);
        (x + 0.5, y + 0.5)
    };
    let (ax, ay) = u(a);
    let (bx, by) = u(b);
    let (dx, dy) = (bx - ax, by - ay);
    let mut events: Vec<(f64, Option<f64>, Option<f64>)> =
        vec![(0.0, None, None), (1.0, None, None)];
    for (lo, hi, start, d, is_x) in [
        (ax.min(bx), ax.max(bx), ax, dx, true),
        (ay.min(by), ay.max(by), ay, dy, false),
    ] {
        if d == 0.0 {
            continue;
        }
        let mut k = lo.ceil();
        while k <= hi {
            let t = (k - start) / d;
            if is_x {
                events.push((t, Some(k), None));
            } else {
                events.push((t, None, Some(k)));
            }
            k += 1.0;
        }
    }
    events.sort_by(|p, q| p.0.total_cmp(&q.0));
    let at = |t: f64| (ax + t * dx, ay + t * dy);
    let site = |x: f64, y: f64| (x.floor() as i64, y.floor() as i64);
    for (k, &(t, fx, fy)) in events.iter().enumerate() {
        let t = t.clamp(0.0, 1.0);
        let (mut x, mut y) = at(t);
        if t == 0.0 {
            (x, y) = (ax, ay);
        } else if t == 1.0 {
            (x, y) = (bx, by);
        }
        x = fx.unwrap_or(x);
        y = fy.unwrap_or(y);
        out.insert(site(x, y));
        if let Some(&(t2, _, _)) = events.get(k + 1) {
            let (mx, my) = at((t + t2.clamp(0.0, 1.0)) / 2.0);
            out.insert(site(mx, my));
        }
    }
}

/// The animal of all sites whose shifted box meets the shape; the root is
/// the site of the shape's first point.
pub fn animal_of(shape: &Shape, r: f64, i: usize) -> Result<GridAnimal> {
    let grid = BoxGrid::new(r, i)?;
    let mut sites = BTreeSet::new();
    let first = match shape {
        Shape::Points(p) => {
            for &q in p {
                sites.insert(grid.site_of(q));
            }
            p.first().copied()
        }
        Shape::Polyline(p) => {
            if p.len() == 1 {
                sites.insert(grid.site_of(p[0]));
            }
            for w in p.windows(2) {
                segment_sites(&grid, w[0], w[1], &mut sites);
            }
            p.first().copied()
        }
        Shape::Segments(s) => {
            for &(a, b) in s {
                segment_sites(&grid, a, b, &mut sites);
            }
            s.first().map(|s| s.0)
        }
    };
    let first = first.ok_or_else(|| Error::invalid("empty shape"))?;
    GridAnimal::new(grid.site_of(first), sites)
}

/// Sequence `x_0 = 0, .., x_h` with `A` inside the union of the cubes of
/// half-side `2l` around `root + l x_k`, consecutive `x_k` L-infinity adjacent
/// or equal, and `h + 1 <= 1 + (2m - 2) / l`.
///
/// Walks a depth-first spanning tree of the animal (an Euler tour of
/// `2m - 1` positions) and keeps every `l`-th position, rounded to the coarse
/// lattice.
pub fn cover_animal(a: &GridAnimal, l: usize) -> Result<Vec<Site>> {
    if l < 1 {
        return Err(Error::invalid("covering scale l must be at least 1"));
    }
    let root = a.root();
    let mut tour = vec![root];
    let mut seen = HashSet::from([root]);
    let mut stack: Vec<(Site, Vec<Site>)> = vec![(root, a.neighbours(root).collect())];
    while let Some((_, pending)) = stack.last_mut() {
        match pending.iter().position(|w| !seen.contains(w)) {
            Some(k) => {
                let w = pending.remove(k);
                seen.insert(w);
                tour.push(w);
                let next: Vec<Site> = a.neighbours(w).collect();
                stack.push((w, next));
            }
            None => {
                stack.pop();
                if let Some((parent, _)) = stack.last() {
                    tour.push(*parent);
                }
            }
        }
    }
    debug_assert_eq!(tour.len(), 2 * a.len() - 1);
    let l = l as i64;
    let coarse = |s: i64| (2 * s + l).div_euclid(2 * l);
    Ok(tour
        .iter()
        .step_by(l as usize)
        .map(|&z| (coarse(z.0 - root.0), coarse(z.1 - root.1)))
        .collect())
}

/// Checks the covering and adjacency properties of a [`cover_animal`] output.
pub fn verify_cover(a: &GridAnimal, xs: &[Site], l: usize) -> bool {
    let l = l as i64;
    let root = a.root();
    let bound_ok = (xs.len() as f64) <= 1.0 + (2.0 * a.len() as f64 - 2.0) / l as f64;
    let chain_ok = xs.first() == Some(&(0, 0))
        && xs
            .windows(2)
            .all(|w| (w[0].0 - w[1].0).abs() <= 1 && (w[0].1 - w[1].1).abs() <= 1);
    let covered = a.sites().iter().all(|&z| {
        xs.iter().any(|&x| {
            (z.0 - root.0 - l * x.0).abs() <= 2 * l && (z.1 - root.1 - l * x.1).abs() <= 2 * l
        })
    });
    bound_ok && chain_ok && covered
}

/// Random animal of exactly `m` sites rooted at the origin, grown by adding a
/// uniformly chosen unoccupied neighbour of a uniformly chosen member.
pub fn random_animal<R: Rng>(m: usize, rng: &mut R) -> GridAnimal {
    let mut sites = vec![(0i64, 0i64)];
    let mut set = HashSet::from([(0i64, 0i64)]);
    while sites.len() < m.max(1) {
        let z = sites[rng.random_range(0..sites.len())];
        let w = (
            z.0 + rng.random_range(-1..=1),
            z.1 + rng.random_range(-1..=1),
        );
        if set.insert(w) {
            sites.push(w);
        }
    }
    GridAnimal::new((0, 0), sites).expect("grown animals are connected")
}
