use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use super::{BoxGrid, Site, GOOD_DIV, NICE_DIV};
use crate::error::{Error, Result};
use crate::geom::PointSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BoxMode {
    Nice,
    Good,
}

/// Inclusive rectangle of lattice sites.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SiteRect {
    pub x0: i64,
    pub x1: i64,
    pub y0: i64,
    pub y1: i64,
}

impl SiteRect {
    pub fn new(x0: i64, x1: i64, y0: i64, y1: i64) -> Result<Self> {
        if x0 > x1 || y0 > y1 {
            return Err(Error::invalid("empty site rectangle"));
        }
        Ok(SiteRect { x0, x1, y0, y1 })
    }

    pub fn width(&self) -> usize {
        (self.x1 - self.x0 + 1) as usize
    }

    pub fn height(&self) -> usize {
        (self.y1 - self.y0 + 1) as usize
    }

    pub fn len(&self) -> usize {
        self.width() * self.height()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn contains(&self, z: Site) -> bool {
        z.0 >= self.x0 && z.0 <= self.x1 && z.1 >= self.y0 && z.1 <= self.y1
    }

    /// Distance from `z` to the rectangle's border, 0 on the border itself.
    pub fn depth(&self, z: Site) -> i64 {
        (z.0 - self.x0)
            .min(self.x1 - z.0)
            .min(z.1 - self.y0)
            .min(self.y1 - z.1)
    }

    pub fn index(&self, z: Site) -> usize {
        (z.1 - self.y0) as usize * self.width() + (z.0 - self.x0) as usize
    }

    /// Sites in row-major order (y outer, x inner).
    pub fn sites(&self) -> impl Iterator<Item = Site> + '_ {
        (self.y0..=self.y1).flat_map(move |y| (self.x0..=self.x1).map(move |x| (x, y)))
    }

    /// Largest site rectangle whose boxes all lie in `window`.
    pub fn inside(grid: &BoxGrid, window: &crate::geom::Rect) -> Result<SiteRect> {
        let c = grid.center((0, 0));
        let h = grid.r() / 2.0;
        let axis = |a: f64, b: f64, off: f64| {
            let mut lo = ((a - off) / grid.r() + 0.5).ceil() as i64;
            let mut hi = ((b - off) / grid.r() - 0.5).floor() as i64;
            // Correct for rounding at the edges.
            while off + grid.r() * (lo as f64) - h < a {
                lo += 1;
            }
            while off + grid.r() * (hi as f64) + h > b {
                hi -= 1;
            }
            (lo, hi)
        };
        let (x0, x1) = axis(window.x0, window.x1, c.x);
        let (y0, y1) = axis(window.y0, window.y1, c.y);
        SiteRect::new(x0, x1, y0, y1)
    }
}

/// Nice/good labels of every box in a site rectangle.
#[derive(Clone, Debug, PartialEq)]
pub struct SiteField {
    grid: BoxGrid,
    rect: SiteRect,
    nice: Vec<bool>,
    good: Vec<bool>,
}

fn check_inside(ps: &PointSet, grid: &BoxGrid, z: Site) -> Result<()> {
    let b = grid.box_rect(z);
    if !ps.window().rect().contains_rect(&b) {
        return Err(Error::OutOfWindow(format!(
            "box {z:?} at scale {} exceeds the sampling window",
            grid.r()
        )));
    }
    Ok(())
}

/// Fine-cell occupancy bitsets for every box of `rect`.
fn occupancy(ps: &PointSet, grid: &BoxGrid, rect: &SiteRect) -> Vec<Vec<u64>> {
    let words = (GOOD_DIV * GOOD_DIV).div_ceil(64);
    let mut occ = vec![vec![0u64; words]; rect.len()];
    for &p in ps.points() {
        let (z, (fx, fy)) = grid.locate(p);
        if !rect.contains(z) {
            continue;
        }
        let kx = ((fx * GOOD_DIV as f64) as usize).min(GOOD_DIV - 1);
        let ky = ((fy * GOOD_DIV as f64) as usize).min(GOOD_DIV - 1);
        let bit = ky * GOOD_DIV + kx;
        occ[rect.index(z)][bit / 64] |= 1 << (bit % 64);
    }
    occ
}

fn labels(bits: &[u64]) -> (bool, bool) {
    let has = |kx: usize, ky: usize| {
        let b = ky * GOOD_DIV + kx;
        bits[b / 64] >> (b % 64) & 1 == 1
    };
    let good = (0..GOOD_DIV).all(|ky| (0..GOOD_DIV).all(|kx| has(kx, ky)));
    let nice = good
        || (0..NICE_DIV).all(|cy| {
            (0..NICE_DIV).all(|cx| (0..3).any(|a| (0..3).any(|b| has(3 * cx + a, 3 * cy + b))))
        });
    (nice, good)
}

/// True iff every sub-box of the regular 18x18 (nice) or 54x54 (good) partition
/// of box `z` contains a point.
pub fn classify_box(ps: &PointSet, grid: &BoxGrid, z: Site, mode: BoxMode) -> Result<bool> {
    check_inside(ps, grid, z)?;
    let rect = SiteRect::new(z.0, z.0, z.1, z.1)?;
    let occ = occupancy(ps, grid, &rect);
    let (nice, good) = labels(&occ[0]);
    Ok(match mode {
        BoxMode::Nice => nice,
        BoxMode::Good => good,
    })
}

/// Labels of all boxes in `rect` at scale `r` and shift `i`.
pub fn site_field(ps: &PointSet, r: f64, i: usize, rect: SiteRect) -> Result<SiteField> {
    let grid = BoxGrid::new(r, i)?;
    check_inside(ps, &grid, (rect.x0, rect.y0))?;
    check_inside(ps, &grid, (rect.x1, rect.y1))?;
    let occ = occupancy(ps, &grid, &rect);
    let (nice, good) = occ.iter().map(|b| labels(b)).unzip();
    Ok(SiteField {
        grid,
        rect,
        nice,
        good,
    })
}

impl SiteField {
    /// Field with explicitly given bad sites; every other site is good.
    pub fn from_bad_sites(grid: BoxGrid, rect: SiteRect, bad: &[Site]) -> SiteField {
        let mut good = vec![true; rect.len()];
        for &z in bad {
            if rect.contains(z) {
                good[rect.index(z)] = false;
            }
        }
        SiteField {
            grid,
            rect,
            nice: good.clone(),
            good,
        }
    }

    pub fn grid(&self) -> &BoxGrid {
        &self.grid
    }

    pub fn rect(&self) -> &SiteRect {
        &self.rect
    }

    pub fn is_nice(&self, z: Site) -> bool {
        self.nice[self.rect.index(z)]
    }

    pub fn is_good(&self, z: Site) -> bool {
        self.good[self.rect.index(z)]
    }

    /// `X_z`: 1 when the box is bad.
    pub fn x(&self, z: Site) -> u8 {
        u8::from(!self.is_good(z))
    }

    pub fn bad_fraction(&self) -> f64 {
        self.good.iter().filter(|g| !**g).count() as f64 / self.good.len() as f64
    }

    pub fn ugly_fraction(&self) -> f64 {
        self.nice.iter().filter(|g| !**g).count() as f64 / self.nice.len() as f64
    }

    /// CSV with header `z1,z2,i,r,nice,good`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("z1,z2,i,r,nice,good\n");
        for z in self.rect.sites() {
            let _ = writeln!(
                out,
                "{},{},{},{},{},{}",
                z.0,
                z.1,
                self.grid.shift_index(),
                self.grid.r(),
                u8::from(self.is_nice(z)),
                u8::from(self.is_good(z))
            );
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geom::{sample_poisson, IntensityModel, Point, Window};

    fn window() -> Window {
        Window::centered(50.0, 0.0).unwrap()
    }

    #[test]
    fn empty_box_is_neither() {
        let ps = PointSet::new(vec![], window(), 0).unwrap();
        let g = BoxGrid::new(5.4, 1).unwrap();
        assert!(!classify_box(&ps, &g, (0, 0), BoxMode::Nice).unwrap());
        assert!(!classify_box(&ps, &g, (0, 0), BoxMode::Good).unwrap());
    }

    #[test]
    fn centre_witness_is_nice() {
        let g = BoxGrid::new(18.0, 1).unwrap();
        let b = g.box_rect((0, 0));
        let mut pts = Vec::new();
        for a in 0..NICE_DIV {
            for c in 0..NICE_DIV {
                pts.push(Point::new(b.x0 + a as f64 + 0.5, b.y0 + c as f64 + 0.5));
            }
        }
        let ps = PointSet::new(pts, window(), 0).unwrap();
        assert!(classify_box(&ps, &g, (0, 0), BoxMode::Nice).unwrap());
        assert!(!classify_box(&ps, &g, (0, 0), BoxMode::Good).unwrap());
    }

    #[test]
    fn out_of_window_box_errors() {
        let ps = PointSet::new(vec![], window(), 0).unwrap();
        let g = BoxGrid::new(20.0, 1).unwrap();
        assert!(matches!(
            classify_box(&ps, &g, (3, 0), BoxMode::Nice),
            Err(Error::OutOfWindow(_))
        ));
    }

    #[test]
    fn good_implies_nice_and_matches_single_box() {
        // About 10 points per fine sub-box, so most boxes are good.
        let w = Window::centered(8.0, 0.0).unwrap();
        let ps = sample_poisson(w, IntensityModel::homogeneous(1200.0), 4).unwrap();
        let rect = SiteRect::new(-1, 1, -1, 1).unwrap();
        let f = site_field(&ps, 5.0, 1, rect).unwrap();
        let g = BoxGrid::new(5.0, 1).unwrap();
        let mut seen_good = false;
        for z in rect.sites() {
            assert!(!f.is_good(z) || f.is_nice(z));
            assert_eq!(
                f.is_good(z),
                classify_box(&ps, &g, z, BoxMode::Good).unwrap()
            );
            assert_eq!(
                f.is_nice(z),
                classify_box(&ps, &g, z, BoxMode::Nice).unwrap()
            );
            seen_good |= f.is_good(z);
        }
        assert!(seen_good);
    }

    #[test]
    fn low_intensity_all_bad() {
        let ps = sample_poisson(window(), IntensityModel::homogeneous(0.01), 1).unwrap();
        let rect = SiteRect::new(-2, 2, -2, 2).unwrap();
        let f = site_field(&ps, 10.0, 1, rect).unwrap();
        assert_eq!(f.bad_fraction(), 1.0);
    }

    #[test]
    fn csv_header() {
        let g = BoxGrid::new(1.0, 2).unwrap();
        let rect = SiteRect::new(0, 1, 0, 0).unwrap();
        let f = SiteField::from_bad_sites(g, rect, &[(1, 0)]);
        assert_eq!(
            f.to_csv(),
            "z1,z2,i,r,nice,good\n0,0,2,1,1,1\n1,0,2,1,0,0\n"
        );
    }

    #[test]
    fn inside_rect_fits_window() {
        let w = Window::new(0.0, 60.0, 0.0, 60.0, 0.0).unwrap().rect();
        for i in 1..=9 {
            let g = BoxGrid::new(10.0, i).unwrap();
            let r = SiteRect::inside(&g, &w).unwrap();
            for z in r.sites() {
                assert!(w.contains_rect(&g.box_rect(z)));
            }
            let beyond = (r.x1 + 1, r.y1);
            assert!(!w.contains_rect(&g.box_rect(beyond)));
        }
    }
}
