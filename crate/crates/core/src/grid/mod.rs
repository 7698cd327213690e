//! Renormalization boxes, site fields, bad clusters and lattice animals.

mod animal;
mod boxes;
mod clusters;
mod confinement;
mod reimer;

pub(crate) use animal::segment_sites;
pub use animal::{animal_of, cover_animal, random_animal, verify_cover, GridAnimal, Shape};
pub use boxes::{classify_box, site_field, BoxMode, SiteField, SiteRect};
pub use clusters::{bad_clusters, clusters_of, BadClusterSet, Which};
pub use confinement::{check_cell_confinement, ConfinementReport, Violation};
pub use reimer::{reimer_exact, reimer_probe, ReimerEstimate};

use crate::error::{Error, Result};
use crate::geom::{Point, Rect};

/// A site of the renormalization lattice.
pub type Site = (i64, i64);

/// `alpha_d = 2 (4 ceil(sqrt d) + 1)`.
pub fn alpha(d: u32) -> Result<u32> {
    if d < 1 {
        return Err(Error::invalid("dimension must be at least 1"));
    }
    let mut s = (d as f64).sqrt().ceil() as u32;
    // Guard against rounding in the square root.
    while s * s < d {
        s += 1;
    }
    while s > 1 && (s - 1) * (s - 1) >= d {
        s -= 1;
    }
    Ok(2 * (4 * s + 1))
}

/// Sub-box count per axis for a nice box in the plane.
pub const NICE_DIV: usize = 18;
/// Sub-box count per axis for a good box in the plane.
pub const GOOD_DIV: usize = 3 * NICE_DIV;

/// Shift vector `f_i`, `i` in `1..=9`: zero first, then the L-infinity
/// neighbours of the origin in lexicographic order.
pub fn shift(i: usize) -> Result<(i64, i64)> {
    const F: [(i64, i64); 9] = [
        (0, 0),
        (-1, -1),
        (-1, 0),
        (-1, 1),
        (0, -1),
        (0, 1),
        (1, -1),
        (1, 0),
        (1, 1),
    ];
    if !(1..=9).contains(&i) {
        return Err(Error::invalid(format!("shift index {i} outside 1..=9")));
    }
    Ok(F[i - 1])
}

/// The box family `B_z^{r,i} = r z + r f_i / 3 + [-r/2, r/2)^2`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BoxGrid {
    r: f64,
    i: usize,
    off: (f64, f64),
}

impl BoxGrid {
    pub fn new(r: f64, i: usize) -> Result<Self> {
        if !(r > 0.0 && r.is_finite()) {
            return Err(Error::invalid(format!(
                "box scale must be positive, got {r}"
            )));
        }
        let f = shift(i)?;
        Ok(BoxGrid {
            r,
            i,
            off: (r * f.0 as f64 / 3.0, r * f.1 as f64 / 3.0),
        })
    }

    pub fn r(&self) -> f64 {
        self.r
    }

    pub fn shift_index(&self) -> usize {
        self.i
    }

    pub fn center(&self, z: Site) -> Point {
        Point::new(
            self.r * z.0 as f64 + self.off.0,
            self.r * z.1 as f64 + self.off.1,
        )
    }

    /// Closure of the half-open box of site `z`.
    pub fn box_rect(&self, z: Site) -> Rect {
        let c = self.center(z);
        let h = self.r / 2.0;
        Rect {
            x0: c.x - h,
            x1: c.x + h,
            y0: c.y - h,
            y1: c.y + h,
        }
    }

    /// Lattice coordinates: site centres sit at integers.
    pub(crate) fn to_unit(self, p: Point) -> (f64, f64) {
        ((p.x - self.off.0) / self.r, (p.y - self.off.1) / self.r)
    }

    /// Site whose half-open box contains `p`, and the position of `p` inside
    /// that box as fractions in `[0, 1)`.
    pub fn locate(&self, p: Point) -> (Site, (f64, f64)) {
        let (ux, uy) = self.to_unit(p);
        let (sx, sy) = (ux + 0.5, uy + 0.5);
        let (zx, zy) = (sx.floor(), sy.floor());
        ((zx as i64, zy as i64), (sx - zx, sy - zy))
    }

    pub fn site_of(&self, p: Point) -> Site {
        self.locate(p).0
    }
}
