//! SVG pictures of triangulations and overlays: solid Delaunay edges, dashed
//! Voronoi edges, paths, boxes and disks.

use std::fmt::Write;

use crate::geom::voronoi::voronoi_edges;
use crate::geom::{Point, Rect, Triangulation};

#[derive(Clone, Debug, PartialEq)]
pub enum Overlay {
    Delaunay,
    /// Voronoi edges clipped to the view.
    Voronoi,
    Sites,
    Path(Vec<Point>),
    Boxes(Vec<Rect>),
    Disks(Vec<(Point, f64)>),
}

const SIZE: f64 = 800.0;

struct View {
    rect: Rect,
    scale: f64,
}

impl View {
    fn new(rect: Rect) -> View {
        let span = (rect.x1 - rect.x0).max(rect.y1 - rect.y0);
        View {
            rect,
            scale: SIZE / span,
        }
    }

    fn x(&self, x: f64) -> f64 {
        (x - self.rect.x0) * self.scale
    }

    /// SVG y grows downwards.
    fn y(&self, y: f64) -> f64 {
        (self.rect.y1 - y) * self.scale
    }

    fn line(&self, out: &mut String, a: Point, b: Point, class: &str) {
        let _ = writeln!(
            out,
            r#"<line class="{class}" x1="{:.3}" y1="{:.3}" x2="{:.3}" y2="{:.3}"/>"#,
            self.x(a.x),
            self.y(a.y),
            self.x(b.x),
            self.y(b.y)
        );
    }
}

/// Renders `overlays` in order over the window `view`. Overlays that need a
/// triangulation are skipped when `tri` is `None`.
pub fn render_svg(tri: Option<&Triangulation>, view: &Rect, overlays: &[Overlay]) -> String {
    let v = View::new(*view);
    let (w, h) = (v.x(view.x1), v.y(view.y0));
    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.3} {h:.3}">"#
    );
    out.push_str(concat!(
        "<style>",
        ".window{fill:none;stroke:#000;stroke-width:1}",
        ".axis{stroke:#888;stroke-width:0.5}",
        ".delaunay{stroke:#000;stroke-width:0.7}",
        ".voronoi{stroke:#1f5fbf;stroke-width:0.7;stroke-dasharray:4 3}",
        ".path{fill:none;stroke:#c0392b;stroke-width:2}",
        ".box{fill:#e67e22;fill-opacity:0.25;stroke:#e67e22}",
        ".disk{fill:none;stroke:#27ae60}",
        ".site{fill:#000}",
        "</style>\n"
    ));
    let _ = writeln!(
        out,
        r#"<rect class="window" x="0" y="0" width="{w:.3}" height="{h:.3}"/>"#
    );
    if view.x0 <= 0.0 && view.x1 >= 0.0 {
        v.line(
            &mut out,
            Point::new(0.0, view.y0),
            Point::new(0.0, view.y1),
            "axis",
        );
    }
    if view.y0 <= 0.0 && view.y1 >= 0.0 {
        v.line(
            &mut out,
            Point::new(view.x0, 0.0),
            Point::new(view.x1, 0.0),
            "axis",
        );
    }
    for o in overlays {
        match (o, tri) {
            (Overlay::Delaunay, Some(t)) => {
                for (a, b) in t.graph().edges() {
                    v.line(&mut out, t.point(a), t.point(b), "delaunay");
                }
            }
            (Overlay::Voronoi, Some(t)) => {
                for e in voronoi_edges(t, view) {
                    v.line(&mut out, e.a, e.b, "voronoi");
                }
            }
            (Overlay::Sites, Some(t)) => {
                for p in t.points() {
                    let _ = writeln!(
                        out,
                        r#"<circle class="site" cx="{:.3}" cy="{:.3}" r="2"/>"#,
                        v.x(p.x),
                        v.y(p.y)
                    );
                }
            }
            (Overlay::Path(ps), _) => {
                let pts: Vec<String> = ps
                    .iter()
                    .map(|p| format!("{:.3},{:.3}", v.x(p.x), v.y(p.y)))
                    .collect();
                let _ = writeln!(
                    out,
                    r#"<polyline class="path" points="{}"/>"#,
                    pts.join(" ")
                );
            }
            (Overlay::Boxes(rs), _) => {
                for r in rs {
                    let _ = writeln!(
                        out,
                        r#"<rect class="box" x="{:.3}" y="{:.3}" width="{:.3}" height="{:.3}"/>"#,
                        v.x(r.x0),
                        v.y(r.y1),
                        (r.x1 - r.x0) * v.scale,
                        (r.y1 - r.y0) * v.scale
                    );
                }
            }
            (Overlay::Disks(ds), _) => {
                for (c, r) in ds {
                    let _ = writeln!(
                        out,
                        r#"<circle class="disk" cx="{:.3}" cy="{:.3}" r="{:.3}"/>"#,
                        v.x(c.x),
                        v.y(c.y),
                        r * v.scale
                    );
                }
            }
            (_, None) => {}
        }
    }
    out.push_str("</svg>\n");
    out
}
