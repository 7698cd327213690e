//! Connected vertex sets containing a root, and the greedy weight `F_n`.

use std::cmp::Ordering;
use std::collections::HashSet;

use serde::Serialize;

use super::WeightFn;
use crate::error::{Error, Result};
use crate::geom::DelaunayGraph;

/// Connected set of `n` vertices containing `root`; vertices sorted ascending.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct Polyomino {
    pub root: usize,
    pub vertices: Vec<usize>,
}

impl Polyomino {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    /// `sum f(d(v))`, summed in vertex order.
    pub fn weight(&self, graph: &DelaunayGraph, f: &WeightFn) -> f64 {
        set_weight(&self.vertices, graph, f)
    }
}

fn set_weight(vs: &[usize], graph: &DelaunayGraph, f: &WeightFn) -> f64 {
    vs.iter().map(|&v| f.eval(graph.degree(v) as f64)).sum()
}

/// Calls `visit` on every connected `n`-set containing `root`, each exactly
/// once (Redelmeier's untried-set recursion). Stops with an error after
/// `budget` emissions.
pub fn for_each_polyomino(
    graph: &DelaunayGraph,
    root: usize,
    n: usize,
    budget: u64,
    mut visit: impl FnMut(&[usize]),
) -> Result<u64> {
    if n == 0 {
        return Err(Error::invalid("polyomino size must be at least 1"));
    }
    if root >= graph.len() {
        return Err(Error::invalid(format!("root {root} out of range")));
    }
    struct State<'a, F: FnMut(&[usize])> {
        graph: &'a DelaunayGraph,
        n: usize,
        budget: u64,
        emitted: u64,
        current: Vec<usize>,
        seen: Vec<bool>,
        visit: F,
    }
    fn rec<F: FnMut(&[usize])>(s: &mut State<'_, F>, mut untried: Vec<usize>) -> Result<()> {
        while let Some(v) = untried.pop() {
            s.current.push(v);
            if s.current.len() == s.n {
                s.emitted += 1;
                if s.emitted > s.budget {
                    return Err(Error::BudgetExceeded {
                        budget: s.budget,
                        hint: "too many polyominoes; use the beam search".into(),
                    });
                }
                (s.visit)(&s.current);
            } else {
                let mut added = Vec::new();
                for &u in s.graph.neighbors(v) {
                    if !s.seen[u] {
                        s.seen[u] = true;
                        added.push(u);
                    }
                }
                let mut next = untried.clone();
                next.extend(added.iter().rev());
                rec(s, next)?;
                for u in added {
                    s.seen[u] = false;
                }
            }
            s.current.pop();
        }
        Ok(())
    }
    let mut s = State {
        graph,
        n,
        budget,
        emitted: 0,
        current: Vec::with_capacity(n),
        seen: vec![false; graph.len()],
        visit: &mut visit,
    };
    s.seen[root] = true;
    rec(&mut s, vec![root])?;
    Ok(s.emitted)
}

/// All connected `n`-sets containing `root`, each sorted, in emission order.
pub fn enum_polyominoes(graph: &DelaunayGraph, root: usize, n: usize) -> Result<Vec<Polyomino>> {
    let mut out = Vec::new();
    for_each_polyomino(graph, root, n, u64::MAX, |vs| {
        let mut v = vs.to_vec();
        v.sort_unstable();
        out.push(Polyomino { root, vertices: v });
    })?;
    Ok(out)
}

/// Better of two scored sets: higher weight, then lexicographically smaller.
fn better(a: (f64, &[usize]), b: (f64, &[usize])) -> bool {
    match a.0.partial_cmp(&b.0) {
        Some(Ordering::Greater) => true,
        Some(Ordering::Less) => false,
        _ => a.1 < b.1,
    }
}

/// Exact `F_n` with its lexicographically smallest maximizing witness.
pub fn f_n_exact(
    graph: &DelaunayGraph,
    root: usize,
    f: &WeightFn,
    n: usize,
    budget: u64,
) -> Result<(f64, Polyomino)> {
    let mut best: Option<(f64, Vec<usize>)> = None;
    let mut buf = Vec::with_capacity(n);
    for_each_polyomino(graph, root, n, budget, |vs| {
        buf.clear();
        buf.extend_from_slice(vs);
        buf.sort_unstable();
        let w = set_weight(&buf, graph, f);
        let replace = match &best {
            None => true,
            Some((bw, bv)) => better((w, &buf), (*bw, bv)),
        };
        if replace {
            best = Some((w, buf.clone()));
        }
    })?;
    let (w, vertices) =
        best.ok_or_else(|| Error::invalid(format!("root component has fewer than {n} vertices")))?;
    Ok((w, Polyomino { root, vertices }))
}

/// Beam search lower bound on `F_n`, keeping `width` sets per size.
///
/// With `width` at least the number of polyominoes of every size up to `n`
/// the search is exhaustive and returns the exact value and witness.
pub fn f_n_beam(
    graph: &DelaunayGraph,
    root: usize,
    f: &WeightFn,
    n: usize,
    width: usize,
) -> Result<(f64, Polyomino)> {
    let all = f_n_beam_all(graph, root, f, n, width)?;
    all.into_iter()
        .last()
        .flatten()
        .ok_or_else(|| Error::invalid(format!("root component has fewer than {n} vertices")))
}

/// Beam results for every size `1..=n` from a single run.
pub fn f_n_beam_all(
    graph: &DelaunayGraph,
    root: usize,
    f: &WeightFn,
    n: usize,
    width: usize,
) -> Result<Vec<Option<(f64, Polyomino)>>> {
    if width < 1 {
        return Err(Error::invalid("beam width must be at least 1"));
    }
    if n == 0 {
        return Err(Error::invalid("polyomino size must be at least 1"));
    }
    if root >= graph.len() {
        return Err(Error::invalid(format!("root {root} out of range")));
    }
    let mut beam: Vec<(f64, Vec<usize>)> = vec![(set_weight(&[root], graph, f), vec![root])];
    let mut out = Vec::with_capacity(n);
    out.push(Some((
        beam[0].0,
        Polyomino {
            root,
            vertices: vec![root],
        },
    )));
    for _ in 1..n {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut cand: Vec<(f64, Vec<usize>)> = Vec::new();
        for (_, set) in &beam {
            for &v in set {
                for &u in graph.neighbors(v) {
                    if set.binary_search(&u).is_ok() {
                        continue;
                    }
                    let mut next = set.clone();
                    let pos = next.binary_search(&u).unwrap_err();
                    next.insert(pos, u);
                    if seen.insert(next.clone()) {
                        cand.push((set_weight(&next, graph, f), next));
                    }
                }
            }
        }
        cand.sort_by(|a, b| {
            b.0.partial_cmp(&a.0)
                .unwrap_or(Ordering::Equal)
                .then_with(|| a.1.cmp(&b.1))
        });
        cand.truncate(width);
        beam = cand;
        out.push(beam.first().map(|(w, v)| {
            (
                *w,
                Polyomino {
                    root,
                    vertices: v.clone(),
                },
            )
        }));
    }
    Ok(out)
}
