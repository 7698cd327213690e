//! Per-replica bodies of the twelve experiments.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::calibrate::{calibrate_r, CalibrationConfig};
use super::config::{ExperimentConfig, ExperimentName};
use super::runner::{Method, Metric, ReplicaResult, SummaryRow};
use crate::error::{Error, Result};
use crate::fpp::{
    assign_times, good_box_y, open_cluster, sparse_path_exists, variance_cell, variance_decompose,
    variance_log_slope, z_n, BondField, EdgeTimeDist,
};
use crate::geom::{sample_delaunay, IntensityModel, Point, Triangulation};
use crate::greedy::{f_n_beam_all, f_n_exact, WeightFn};
use crate::grid::{
    check_cell_confinement, clusters_of, cover_animal, random_animal, reimer_exact, reimer_probe,
    site_field, verify_cover, BoxGrid, Site, SiteRect, Which,
};
use crate::paths::{gamma_path_area, kappa, SaPath};
use crate::seeds::{fnv1a, mix};
use crate::stab::stabbing_number;

/// A validated config with everything computed once per run.
pub(crate) struct Prepared {
    pub cfg: ExperimentConfig,
    pub r: Option<f64>,
    reimer_exact: Option<(f64, f64)>,
}

fn exp1() -> EdgeTimeDist {
    EdgeTimeDist::Exponential { rate: 1.0 }
}

fn key_n(n: impl std::fmt::Display) -> String {
    format!("n={n}")
}

impl Prepared {
    fn p(&self) -> &super::config::Params {
        &self.cfg.params
    }

    fn n_list(&self, default: &[usize]) -> Vec<usize> {
        self.p().n_list.clone().unwrap_or_else(|| default.to_vec())
    }

    fn budget(&self, default: u64) -> u64 {
        self.p().budget.unwrap_or(default)
    }

    fn prob(&self, default: f64) -> f64 {
        self.p().p.unwrap_or(default)
    }

    fn mode(&self) -> Which {
        self.p().mode.unwrap_or(Which::Ugly)
    }

    fn reimer_setup(&self) -> ((usize, usize), f64, WeightFn, Vec<Site>) {
        let g = self.p().grid.unwrap_or([5, 5]);
        let sites = self
            .p()
            .sites
            .clone()
            .unwrap_or_else(|| vec![[0, 0], [2, 2], [4, 4], [0, 4]])
            .into_iter()
            .map(|s| (s[0], s[1]))
            .collect();
        let f = self.p().weight.unwrap_or(WeightFn::Linear {
            slope: 1.0,
            intercept: 1.0,
        });
        ((g[0], g[1]), self.prob(0.3), f, sites)
    }

    fn sample(&self, seed: u64) -> Result<Triangulation> {
        sample_delaunay(self.cfg.window, self.cfg.intensity, seed)
    }
}

/// Lowest density of the intensity model, used to calibrate `r`.
fn min_density(m: &IntensityModel) -> f64 {
    match *m {
        IntensityModel::Homogeneous { lambda } => lambda,
        IntensityModel::Modulated { lambda, c_mu, .. } => lambda / c_mu,
    }
}

pub(crate) fn prepare(cfg: &ExperimentConfig) -> Result<Prepared> {
    let mut prep = Prepared {
        cfg: cfg.clone(),
        r: None,
        reimer_exact: None,
    };
    match cfg.experiment {
        ExperimentName::Confinement => {
            prep.r = Some(match cfg.r {
                Some(r) => r,
                None => {
                    let target = prep.p().target.unwrap_or(0.3);
                    let c = CalibrationConfig {
                        seed: mix(cfg.seed, fnv1a("calibrate-r")),
                        ..CalibrationConfig::new(min_density(&cfg.intensity), target, prep.mode())
                    };
                    calibrate_r(&c)?.r
                }
            });
        }
        ExperimentName::Reimer => {
            let (dims, p, f, sites) = prep.reimer_setup();
            if dims.0 * dims.1 <= 20 {
                prep.reimer_exact = Some(
                    reimer_exact(dims, p, &f, &sites)
                        .map_err(|e| Error::config("params", e.to_string()))?,
                );
            }
        }
        ExperimentName::FppVariance => {
            if prep.p().inner.unwrap_or(50) < 2 {
                return Err(Error::config(
                    "params.inner",
                    "needs at least 2 time fields per configuration",
                ));
            }
            if cfg.replicas < 2 {
                return Err(Error::config("replicas", "needs at least 2 configurations"));
            }
        }
        ExperimentName::GammaArea if prep.p().samples.unwrap_or(4000) < 100 => {
            return Err(Error::config(
                "params.samples",
                "needs at least 100 samples",
            ));
        }
        _ => {}
    }
    Ok(prep)
}

pub(crate) fn replica(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    match p.cfg.experiment {
        ExperimentName::FnScaling => fn_scaling(p, seed),
        ExperimentName::Kappa => kappa_growth(p, seed),
        ExperimentName::GammaArea => gamma_area(p, seed),
        ExperimentName::FppVariance => fpp_variance(p, seed),
        ExperimentName::SegmentWalk => segment_walk(p, seed),
        ExperimentName::ClusterTail => cluster_tail(p, seed),
        ExperimentName::GoodBox => good_box(p, seed),
        ExperimentName::PathDensity => path_density(p, seed),
        ExperimentName::Stabbing => stabbing(p, seed),
        ExperimentName::Confinement => confinement(p, seed),
        ExperimentName::Reimer => reimer(p, seed),
        ExperimentName::CoverAnimal => cover(p, seed),
    }
}

fn origin_vertex(tri: &Triangulation) -> usize {
    tri.locate(Point::ORIGIN)
}

fn fn_scaling(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let v0 = origin_vertex(&tri);
    let f = p.p().weight.unwrap_or(WeightFn::Identity);
    let ns = p.n_list(&[2, 4, 6, 8]);
    let exact_max = p.p().exact_max_n.unwrap_or(8);
    let budget = p.budget(100_000_000);
    let beam_max = ns.iter().copied().filter(|&n| n > exact_max).max();
    let beam = match beam_max {
        Some(n) => f_n_beam_all(tri.graph(), v0, &f, n, p.p().beam_width.unwrap_or(512))?,
        None => Vec::new(),
    };
    let mut out = Vec::new();
    for &n in &ns {
        if n == 0 {
            return Err(Error::config("params.n_list", "sizes must be positive"));
        }
        let (w, method) = if n <= exact_max {
            (f_n_exact(tri.graph(), v0, &f, n, budget)?.0, Method::Exact)
        } else {
            let w = beam[n - 1].as_ref().map(|b| b.0).ok_or_else(|| {
                Error::invalid(format!("root component has fewer than {n} vertices"))
            })?;
            (w, Method::Beam)
        };
        out.push(Metric::new("F_n/n", key_n(n), method, w / n as f64));
    }
    Ok(out)
}

fn kappa_growth(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let v0 = origin_vertex(&tri);
    let rs = p
        .p()
        .r_list
        .clone()
        .unwrap_or_else(|| vec![1, 2, 3, 4, 5, 6]);
    let budget = p.budget(100_000_000);
    rs.iter()
        .map(|&r| {
            if r == 0 {
                return Err(Error::config("params.r_list", "lengths must be positive"));
            }
            Ok(Metric::new(
                "kappa/r",
                format!("r={r}"),
                Method::Exact,
                kappa(tri.graph(), v0, r, budget)? / r as f64,
            ))
        })
        .collect()
}

fn gamma_area(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let samples = p.p().samples.unwrap_or(4000);
    let mut out = Vec::new();
    for &n in &p.n_list(&[4, 8, 16]) {
        // The first n edges of the walk along the x axis.
        let far = Point::new(3.0 * n as f64 + 3.0, 0.0);
        let walk = crate::fpp::segment_walk(&tri, Point::ORIGIN, far)?;
        if walk.len() < n || n == 0 {
            return Err(Error::invalid(format!(
                "segment walk has {} edges, fewer than n = {n}",
                walk.len()
            )));
        }
        let path = SaPath::new(tri.graph(), walk.vertices[..=n].to_vec())?;
        let a = gamma_path_area(&tri, &path, samples, mix(seed, n as u64))?;
        out.push(Metric::new(
            "area/n",
            key_n(n),
            Method::Mc,
            a.area / n as f64,
        ));
    }
    Ok(out)
}

fn fpp_variance(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let dist = p.p().dist.unwrap_or_else(exp1);
    let inner = p.p().inner.unwrap_or(50);
    let mut out = Vec::new();
    for &n in &p.n_list(&[8, 16, 32, 64]) {
        let ts = variance_cell(
            p.cfg.intensity,
            dist,
            n as f64,
            None,
            inner,
            mix(seed, n as u64),
        )?;
        out.extend(
            ts.into_iter()
                .map(|t| Metric::new("T", key_n(n), Method::Exact, t)),
        );
    }
    Ok(out)
}

fn segment_walk(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let tg = assign_times(&tri, p.p().dist.unwrap_or_else(exp1), mix(seed, 1))?;
    let mut out = Vec::new();
    for &n in &p.n_list(&[8, 16, 32]) {
        let nf = n as f64;
        let z = z_n(&tg, nf)?;
        let k = key_n(n);
        out.push(Metric::new(
            "walk_edges/n",
            k.clone(),
            Method::Exact,
            z.walk.len() as f64 / nf,
        ));
        out.push(Metric::new("Z/n", k.clone(), Method::Exact, z.z / nf));
        out.push(Metric::new("T/n", k.clone(), Method::Exact, z.t / nf));
        out.push(Metric::flag("T<=Z", k, z.t <= z.z));
    }
    Ok(out)
}

fn cluster_tail(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let bf = BondField::sample(&tri, p.prob(0.1), mix(seed, 1))?;
    let size = open_cluster(&bf, tri.graph(), origin_vertex(&tri)).len();
    let mut out = vec![Metric::new("|C0|", "", Method::Exact, size as f64)];
    for &n in &p.n_list(&[1, 2, 4, 8, 16, 32]) {
        out.push(Metric::flag("|C0|>=n", key_n(n), size >= n));
    }
    Ok(out)
}

fn good_box(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let bf = BondField::sample(&tri, p.prob(0.9), mix(seed, 1))?;
    let mut out = Vec::new();
    for &l in p.p().l_list.as_deref().unwrap_or(&[6.0, 10.0, 14.0]) {
        let g = good_box_y(&tri, &bf, l, (0, 0))?;
        let k = format!("L={l}");
        out.push(Metric::flag("Y", k.clone(), g.y));
        out.push(Metric::flag("nice_ring", k.clone(), g.nice_ring));
        out.push(Metric::flag(
            "no_closed_crossing",
            k.clone(),
            g.no_closed_crossing,
        ));
        out.push(Metric::flag("local_agrees", k, g.local_y == g.y));
    }
    Ok(out)
}

fn path_density(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let bf = BondField::sample(&tri, p.prob(0.9), mix(seed, 1))?;
    let v0 = origin_vertex(&tri);
    let budget = p.budget(100_000_000);
    let ms = p.p().m_list.clone().unwrap_or_else(|| vec![4, 6, 8]);
    let mut out = Vec::new();
    for &a in p.p().a_list.as_deref().unwrap_or(&[0.25]) {
        for &m in &ms {
            let hit = sparse_path_exists(&bf, tri.graph(), v0, m, a, budget)?;
            out.push(Metric::flag("sparse_path", format!("a={a};m={m}"), hit));
        }
    }
    Ok(out)
}

fn stabbing(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let tri = p.sample(seed)?;
    let samples = p.p().samples.unwrap_or(1);
    let budget = p.budget(1_000_000_000);
    let mut out = Vec::new();
    for &n in &p.n_list(&[10, 20, 40]) {
        let s = stabbing_number(&tri, n, samples, budget)?;
        out.push(Metric::new(
            "stab/n",
            key_n(n),
            Method::McLowerBound,
            s.value as f64 / n as f64,
        ));
    }
    Ok(out)
}

fn confinement(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let r = p.r.expect("scale fixed in prepare");
    let tri = p.sample(seed)?;
    let grid = BoxGrid::new(r, 1)?;
    let rect = SiteRect::inside(&grid, &p.cfg.window.analysis()).map_err(|_| {
        Error::config(
            "window",
            format!("analysis region holds no box of side {r}"),
        )
    })?;
    let field = site_field(tri.point_set(), r, 1, rect)?;
    let which = p.mode();
    let clusters = clusters_of(&field, which);
    let rep = check_cell_confinement(&tri, &clusters, which);
    let marked = match which {
        Which::Ugly => field.ugly_fraction(),
        Which::Bad => field.bad_fraction(),
    };
    Ok(vec![
        Metric::new("violations", "", Method::Exact, rep.violations.len() as f64),
        Metric::new(
            "clusters_checked",
            "",
            Method::Exact,
            rep.clusters_checked as f64,
        ),
        Metric::new("cells_checked", "", Method::Exact, rep.cells_checked as f64),
        Metric::new("marked_fraction", "", Method::Exact, marked),
    ])
}

fn reimer(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let (dims, prob, f, sites) = p.reimer_setup();
    let e = reimer_probe(dims, prob, &f, &sites, p.p().inner.unwrap_or(2000), seed)?;
    Ok(vec![
        Metric::new("lhs", "", Method::Mc, e.lhs),
        Metric::new("rhs", "", Method::Mc, e.rhs),
        Metric::flag("holds", "", e.holds()),
    ])
}

fn cover(p: &Prepared, seed: u64) -> Result<Vec<Metric>> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ms = p.p().m_list.clone().unwrap_or_else(|| vec![10, 20, 40]);
    let mut out = Vec::new();
    for &m in &ms {
        let a = random_animal(m, &mut rng);
        for &l in p.p().l_list.as_deref().unwrap_or(&[1.0, 2.0, 3.0]) {
            if l.fract() != 0.0 {
                return Err(Error::config(
                    "params.l_list",
                    "covering scales must be integers",
                ));
            }
            let l = l as usize;
            let xs = cover_animal(&a, l)?;
            let k = format!("m={m};l={l}");
            out.push(Metric::new(
                "h+1",
                k.clone(),
                Method::Exact,
                xs.len() as f64,
            ));
            out.push(Metric::flag(
                "bound_ok",
                k.clone(),
                xs.len() as f64 <= 1.0 + (2.0 * m as f64 - 2.0) / l as f64,
            ));
            out.push(Metric::flag("cover_ok", k, verify_cover(&a, &xs, l)));
        }
    }
    Ok(out)
}

fn row(metric: &str, key: String, method: Method, mean: f64, se: f64, count: usize) -> SummaryRow {
    SummaryRow {
        metric: metric.to_string(),
        key,
        method,
        mean,
        se,
        count,
    }
}

/// Rows computed from the whole replica set rather than averaged per replica.
pub(crate) fn derived(p: &Prepared, reps: &[ReplicaResult]) -> Vec<SummaryRow> {
    let mut out = Vec::new();
    match p.cfg.experiment {
        ExperimentName::FppVariance => {
            let mut rows = Vec::new();
            for &n in &p.n_list(&[8, 16, 32, 64]) {
                let k = key_n(n);
                let cells: Vec<Vec<f64>> = reps
                    .iter()
                    .map(|r| {
                        r.metrics
                            .iter()
                            .filter(|m| m.key == k)
                            .map(|m| m.value)
                            .collect()
                    })
                    .collect();
                let v = variance_decompose(n as f64, &cells);
                let c = reps.len();
                out.push(row(
                    "var_total",
                    k.clone(),
                    Method::Mc,
                    v.var_total,
                    v.se_total,
                    c,
                ));
                out.push(row(
                    "var_within",
                    k.clone(),
                    Method::Mc,
                    v.var_within,
                    v.se_within,
                    c,
                ));
                out.push(row(
                    "var_between",
                    k.clone(),
                    Method::Mc,
                    v.var_between,
                    v.se_between,
                    c,
                ));
                let holds = if v.identity_holds() { 1.0 } else { 0.0 };
                out.push(row("identity_holds", k, Method::Exact, holds, 0.0, 1));
                rows.push(v);
            }
            let slope = variance_log_slope(&rows);
            out.push(row(
                "log_var_slope",
                String::new(),
                Method::Mc,
                slope,
                0.0,
                rows.len(),
            ));
        }
        ExperimentName::Reimer => {
            if let Some((lhs, rhs)) = p.reimer_exact {
                out.push(row("lhs", String::new(), Method::Exact, lhs, 0.0, 1));
                out.push(row("rhs", String::new(), Method::Exact, rhs, 0.0, 1));
            }
        }
        _ => {}
    }
    out
}
