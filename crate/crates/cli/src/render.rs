//! Deterministic SVG drawings of polygons and their overlays.

use std::fmt::Write as _;

use guardwalk::geometry::{Point, PolygonWithHoles};
use guardwalk::triangulation::{build_dual, Triangulation};

const SIZE: f64 = 800.0;
const PAD: f64 = 20.0;

/// What to draw on top of the polygon.
#[derive(Debug, Clone, Default)]
pub struct Overlays<'a> {
    pub triangulation: Option<&'a Triangulation>,
    pub dual: bool,
    pub guards: &'a [Point],
    /// Agent paths, one polyline each.
    pub paths: &'a [Vec<Point>],
}

struct Frame {
    min: Point,
    max_y: i64,
    scale: f64,
}

impl Frame {
    fn new(poly: &PolygonWithHoles) -> Self {
        let (lo, hi) = poly.bbox();
        let span = (hi.x - lo.x).max(hi.y - lo.y).max(1) as f64;
        Frame { min: lo, max_y: hi.y, scale: SIZE / span }
    }

    fn x(&self, x: f64) -> String {
        format!("{:.2}", (x - self.min.x as f64) * self.scale + PAD)
    }

    fn y(&self, y: f64) -> String {
        format!("{:.2}", (self.max_y as f64 - y) * self.scale + PAD)
    }

    fn pt(&self, p: Point) -> String {
        format!("{},{}", self.x(p.x as f64), self.y(p.y as f64))
    }
}

pub fn render_svg(poly: &PolygonWithHoles, overlays: &Overlays<'_>) -> String {
    let f = Frame::new(poly);
    let (lo, hi) = poly.bbox();
    let w = (hi.x - lo.x) as f64 * f.scale + 2.0 * PAD;
    let h = (hi.y - lo.y) as f64 * f.scale + 2.0 * PAD;
    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w:.0}" height="{h:.0}" viewBox="0 0 {w:.2} {h:.2}">"#
    );
    let mut d = String::new();
    for r in 0..poly.ring_count() {
        let pts: Vec<String> = poly.ring(r).iter().map(|&p| f.pt(p)).collect();
        let _ = write!(d, "M{}Z", pts.join("L"));
    }
    let _ = writeln!(
        s,
        r##"<path class="polygon" d="{d}" fill="#f4f1e8" fill-rule="evenodd" stroke="#333" stroke-width="1.5"/>"##
    );
    if let Some(t) = overlays.triangulation {
        for tri in &t.triangles {
            let pts: Vec<String> = tri.v.iter().map(|&i| f.pt(poly.vertex(i))).collect();
            let _ = writeln!(
                s,
                r##"<polygon class="triangle" points="{}" fill="none" stroke="#8a8a8a" stroke-width="0.6"/>"##,
                pts.join(" ")
            );
        }
        if overlays.dual {
            let centre = |k: usize| {
                let v = t.triangles[k].v.map(|i| poly.vertex(i));
                let cx = (v[0].x + v[1].x + v[2].x) as f64 / 3.0;
                let cy = (v[0].y + v[1].y + v[2].y) as f64 / 3.0;
                (f.x(cx), f.y(cy))
            };
            let dual = build_dual(t);
            for &(a, b) in &dual.edges {
                let ((x1, y1), (x2, y2)) = (centre(a), centre(b));
                let _ = writeln!(
                    s,
                    r##"<line class="dual-edge" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" stroke="#3b6fb6" stroke-width="1"/>"##
                );
            }
            for k in 0..t.triangles.len() {
                let (x, y) = centre(k);
                let _ = writeln!(s, r##"<circle class="dual-node" cx="{x}" cy="{y}" r="3" fill="#3b6fb6"/>"##);
            }
        }
    }
    for path in overlays.paths {
        let pts: Vec<String> = path.iter().map(|&p| f.pt(p)).collect();
        let _ = writeln!(
            s,
            r##"<polyline class="path" points="{}" fill="none" stroke="#2e8b57" stroke-width="1" stroke-opacity="0.7"/>"##,
            pts.join(" ")
        );
    }
    for &g in overlays.guards {
        let _ = writeln!(
            s,
            r##"<circle class="guard" cx="{}" cy="{}" r="5" fill="#c0392b" stroke="#fff" stroke-width="1"/>"##,
            f.x(g.x as f64),
            f.y(g.y as f64)
        );
    }
    s.push_str("</svg>\n");
    s
}
