//! Sampling windows, intensity models and Poisson point configurations.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const ORIGIN: Point = Point { x: 0.0, y: 0.0 };

    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn dist2(self, o: Point) -> f64 {
        let dx = self.x - o.x;
        let dy = self.y - o.y;
        dx * dx + dy * dy
    }

    pub fn dist(self, o: Point) -> f64 {
        self.dist2(o).sqrt()
    }

    pub(crate) fn coord(self) -> robust::Coord<f64> {
        robust::Coord {
            x: self.x,
            y: self.y,
        }
    }

    /// Bit pattern with `-0.0` folded onto `0.0`, used for hashing and dedup.
    pub(crate) fn key(self) -> (u64, u64) {
        ((self.x + 0.0).to_bits(), (self.y + 0.0).to_bits())
    }
}

impl From<(f64, f64)> for Point {
    fn from((x, y): (f64, f64)) -> Self {
        Point { x, y }
    }
}

/// Rectangular simulation window with a boundary buffer.
///
/// Points are sampled over the whole window; statistics are restricted to the
/// analysis region, i.e. the window shrunk by `buffer` on every side.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Window {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
    #[serde(default)]
    pub buffer: f64,
}

impl Window {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64, buffer: f64) -> Result<Self> {
        let w = Window {
            x0,
            x1,
            y0,
            y1,
            buffer,
        };
        w.validate()?;
        Ok(w)
    }

    /// Square window `[-half, half]^2`.
    pub fn centered(half: f64, buffer: f64) -> Result<Self> {
        Window::new(-half, half, -half, half, buffer)
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.x0, self.x1, self.y0, self.y1, self.buffer]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::invalid("window coordinates must be finite"));
        }
        if !(self.x0 < self.x1 && self.y0 < self.y1) {
            return Err(Error::invalid(format!(
                "degenerate window [{}, {}] x [{}, {}]",
                self.x0, self.x1, self.y0, self.y1
            )));
        }
        if self.buffer < 0.0 {
            return Err(Error::invalid("window buffer must be nonnegative"));
        }
        if 2.0 * self.buffer >= (self.x1 - self.x0).min(self.y1 - self.y0) {
            return Err(Error::invalid("buffer leaves an empty analysis region"));
        }
        Ok(())
    }

    pub fn width(&self) -> f64 {
        self.x1 - self.x0
    }

    pub fn height(&self) -> f64 {
        self.y1 - self.y0
    }

    pub fn area(&self) -> f64 {
        self.width() * self.height()
    }

    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    /// Closed analysis region: the window shrunk by the buffer.
    pub fn analysis(&self) -> Rect {
        Rect {
            x0: self.x0 + self.buffer,
            x1: self.x1 - self.buffer,
            y0: self.y0 + self.buffer,
            y1: self.y1 - self.buffer,
        }
    }

    pub fn in_analysis(&self, p: Point) -> bool {
        self.analysis().contains(p)
    }

    pub fn rect(&self) -> Rect {
        Rect {
            x0: self.x0,
            x1: self.x1,
            y0: self.y0,
            y1: self.y1,
        }
    }
}

/// Closed axis-aligned rectangle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn contains(&self, p: Point) -> bool {
        p.x >= self.x0 && p.x <= self.x1 && p.y >= self.y0 && p.y <= self.y1
    }

    pub fn contains_rect(&self, o: &Rect) -> bool {
        o.x0 >= self.x0 && o.x1 <= self.x1 && o.y0 >= self.y0 && o.y1 <= self.y1
    }

    pub fn is_empty(&self) -> bool {
        !(self.x0 < self.x1 && self.y0 < self.y1)
    }
}

/// Intensity measure of the Poisson process.
///
/// The modulated family is `lambda * c_mu^(sin(2 pi x / period) * sin(2 pi y / period))`,
/// whose density stays within `[lambda / c_mu, lambda * c_mu]`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum IntensityModel {
    Homogeneous { lambda: f64 },
    Modulated { lambda: f64, c_mu: f64, period: f64 },
}

impl IntensityModel {
    pub fn homogeneous(lambda: f64) -> Self {
        IntensityModel::Homogeneous { lambda }
    }

    pub fn base_lambda(&self) -> f64 {
        match *self {
            IntensityModel::Homogeneous { lambda } | IntensityModel::Modulated { lambda, .. } => {
                lambda
            }
        }
    }

    /// Rate of the dominating homogeneous process used for thinning.
    pub fn dominating_rate(&self) -> f64 {
        match *self {
            IntensityModel::Homogeneous { lambda } => lambda,
            IntensityModel::Modulated { lambda, c_mu, .. } => lambda * c_mu,
        }
    }

    pub fn density(&self, p: Point) -> f64 {
        match *self {
            IntensityModel::Homogeneous { lambda } => lambda,
            IntensityModel::Modulated {
                lambda,
                c_mu,
                period,
            } => {
                let w = std::f64::consts::TAU / period;
                lambda * c_mu.powf((w * p.x).sin() * (w * p.y).sin())
            }
        }
    }

    pub fn validate(&self) -> Result<()> {
        let lambda = self.base_lambda();
        if !(lambda > 0.0 && lambda.is_finite()) {
            return Err(Error::invalid(format!(
                "intensity must be positive, got {lambda}"
            )));
        }
        if let IntensityModel::Modulated { c_mu, period, .. } = *self {
            if !(c_mu >= 1.0 && c_mu.is_finite()) {
                return Err(Error::invalid("modulation bound c_mu must be >= 1"));
            }
            if !(period > 0.0 && period.is_finite()) {
                return Err(Error::invalid("modulation period must be positive"));
            }
        }
        Ok(())
    }
}

/// A finite point configuration in a window, in sampling order.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
    window: Window,
    seed: u64,
    intensity: Option<IntensityModel>,
}

impl PointSet {
    /// Builds a point set from explicit coordinates, rejecting duplicates and
    /// points outside the window.
    pub fn new(points: Vec<Point>, window: Window, seed: u64) -> Result<Self> {
        window.validate()?;
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !p.x.is_finite() || !p.y.is_finite() {
                return Err(Error::invalid("non-finite coordinate"));
            }
            if !window.contains(*p) {
                return Err(Error::OutOfWindow(format!(
                    "point ({}, {}) outside window",
                    p.x, p.y
                )));
            }
            if !seen.insert(p.key()) {
                return Err(Error::DuplicatePoint { x: p.x, y: p.y });
            }
        }
        Ok(PointSet {
            points,
            window,
            seed,
            intensity: None,
        })
    }

    /// Point set whose window is the bounding box of the points, padded by 1.
    pub fn from_points(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            let w = Window::new(0.0, 1.0, 0.0, 1.0, 0.0)?;
            return PointSet::new(points, w, 0);
        }
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for p in &points {
            x0 = x0.min(p.x);
            x1 = x1.max(p.x);
            y0 = y0.min(p.y);
            y1 = y1.max(p.y);
        }
        let w = Window::new(x0 - 1.0, x1 + 1.0, y0 - 1.0, y1 + 1.0, 0.0)?;
        PointSet::new(points, w, 0)
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn window(&self) -> &Window {
        &self.window
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn intensity(&self) -> Option<IntensityModel> {
        self.intensity
    }

    pub fn point(&self, i: usize) -> Point {
        self.points[i]
    }

    /// Index of the nearest point to `x`, lowest index on exact ties (linear scan).
    pub fn locate(&self, x: Point) -> Result<usize> {
        if self.points.is_empty() {
            return Err(Error::EmptyConfiguration(
                "locate on empty point set".into(),
            ));
        }
        let mut best = 0;
        let mut best_d = self.points[0].dist2(x);
        for (i, p) in self.points.iter().enumerate().skip(1) {
            let d = p.dist2(x);
            if d < best_d {
                best = i;
                best_d = d;
            }
        }
        Ok(best)
    }

    /// Copy with `x` appended (it receives index `len()`).
    pub fn with_point(&self, x: Point) -> Result<PointSet> {
        if self.points.iter().any(|p| p.key() == x.key()) {
            return Err(Error::DuplicatePoint { x: x.x, y: x.y });
        }
        if !self.window.contains(x) {
            return Err(Error::OutOfWindow(format!(
                "point ({}, {}) outside window",
                x.x, x.y
            )));
        }
        let mut points = self.points.clone();
        points.push(x);
        Ok(PointSet {
            points,
            ..self.clone()
        })
    }

    /// Copy with point `v` removed; later indices shift down by one.
    pub fn without_point(&self, v: usize) -> Result<PointSet> {
        if v >= self.points.len() {
            return Err(Error::invalid(format!(
                "vertex {v} out of range (len {})",
                self.points.len()
            )));
        }
        let mut points = self.points.clone();
        points.remove(v);
        Ok(PointSet {
            points,
            ..self.clone()
        })
    }

    /// Restriction to the points inside a closed rectangle, keeping relative order.
    pub fn restricted(&self, rect: &Rect) -> PointSet {
        PointSet {
            points: self
                .points
                .iter()
                .copied()
                .filter(|p| rect.contains(*p))
                .collect(),
            ..self.clone()
        }
    }

    /// Plain-text dump: a `# window ...` header followed by one `x y` line per point.
    pub fn to_text(&self) -> String {
        let w = &self.window;
        let mut out = format!(
            "# window {} {} {} {} buffer {} seed {}\n",
            w.x0, w.x1, w.y0, w.y1, w.buffer, self.seed
        );
        for p in &self.points {
            let _ = writeln!(out, "{} {}", p.x, p.y);
        }
        out
    }

    pub fn from_text(text: &str) -> Result<PointSet> {
        let mut lines = text.lines();
        let header = lines
            .next()
            .ok_or_else(|| Error::config("header", "empty point file"))?;
        let toks: Vec<&str> = header.split_whitespace().collect();
        if toks.len() != 10 || toks[0] != "#" || toks[1] != "window" || toks[6] != "buffer" {
            return Err(Error::config(
                "header",
                "expected `# window x0 x1 y0 y1 buffer b seed s`",
            ));
        }
        if toks[8] != "seed" {
            return Err(Error::config("header", "missing seed"));
        }
        let num = |s: &str, field: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| Error::config(field, format!("not a number: {s}")))
        };
        let window = Window::new(
            num(toks[2], "x0")?,
            num(toks[3], "x1")?,
            num(toks[4], "y0")?,
            num(toks[5], "y1")?,
            num(toks[7], "buffer")?,
        )?;
        let seed = toks[9]
            .parse::<u64>()
            .map_err(|_| Error::config("seed", format!("not an integer: {}", toks[9])))?;
        let mut points = Vec::new();
        for (lineno, line) in lines.enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut it = line.split_whitespace();
            let (Some(x), Some(y), None) = (it.next(), it.next(), it.next()) else {
                return Err(Error::config(
                    format!("line {}", lineno + 2),
                    "expected two coordinates",
                ));
            };
            points.push(Point::new(num(x, "x")?, num(y, "y")?));
        }
        PointSet::new(points, window, seed)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_text())?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<PointSet> {
        PointSet::from_text(&std::fs::read_to_string(path)?)
    }
}

/// Samples a Poisson configuration on the whole window.
///
/// Homogeneous intensities draw a Poisson count and uniform locations;
/// modulated intensities thin the dominating process at rate `c_mu * lambda`.
pub fn sample_poisson(window: Window, intensity: IntensityModel, seed: u64) -> Result<PointSet> {
    window.validate()?;
    intensity.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rate = intensity.dominating_rate();
    let mean = rate * window.area();
    let count = if mean > 0.0 {
        Poisson::new(mean)
            .map_err(|e| Error::invalid(format!("poisson mean {mean}: {e}")))?
            .sample(&mut rng) as usize
    } else {
        0
    };
    let mut points = Vec::with_capacity(count);
    let mut seen = HashSet::with_capacity(count);
    for _ in 0..count {
        let p = Point::new(
            window.x0 + rng.random::<f64>() * window.width(),
            window.y0 + rng.random::<f64>() * window.height(),
        );
        if let IntensityModel::Modulated { .. } = intensity {
            let keep = intensity.density(p) / rate;
            if rng.random::<f64>() >= keep {
                continue;
            }
        }
        // Coincident draws have probability zero; skip them to keep the set simple.
        if seen.insert(p.key()) {
            points.push(p);
        }
    }
    Ok(PointSet {
        points,
        window,
        seed,
        intensity: Some(intensity),
    })
}
