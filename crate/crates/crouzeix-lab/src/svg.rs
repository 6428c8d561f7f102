//! Static SVG figures by direct path emission: a 600x600 viewBox with 5%
//! margins, uniform scaling, no plotting dependency.

use std::fmt::Write as _;

const SIZE: f64 = 600.0;
const MARGIN: f64 = 0.05 * SIZE;

/// Affine data-to-viewport map. Uniform scale (aspect preserved), centered,
/// y axis flipped to screen orientation.
struct Canvas {
    min_x: f64,
    min_y: f64,
    scale: f64,
    off_x: f64,
    off_y: f64,
}

impl Canvas {
    fn fit<'a>(points: impl Iterator<Item = &'a (f64, f64)>) -> Canvas {
        let (mut min_x, mut max_x) = (f64::INFINITY, f64::NEG_INFINITY);
        let (mut min_y, mut max_y) = (f64::INFINITY, f64::NEG_INFINITY);
        for &(x, y) in points {
            min_x = min_x.min(x);
            max_x = max_x.max(x);
            min_y = min_y.min(y);
            max_y = max_y.max(y);
        }
        if min_x > max_x {
            (min_x, max_x, min_y, max_y) = (0.0, 1.0, 0.0, 1.0);
        }
        let span = (max_x - min_x).max(max_y - min_y).max(1e-12);
        let inner = SIZE - 2.0 * MARGIN;
        let scale = inner / span;
        Canvas {
            min_x,
            min_y,
            scale,
            off_x: (inner - (max_x - min_x) * scale) / 2.0,
            off_y: (inner - (max_y - min_y) * scale) / 2.0,
        }
    }

    fn map(&self, (x, y): (f64, f64)) -> (f64, f64) {
        (
            MARGIN + self.off_x + (x - self.min_x) * self.scale,
            SIZE - MARGIN - self.off_y - (y - self.min_y) * self.scale,
        )
    }
}

/// Render named polylines plus point markers. One `<path>` per part, one
/// `<circle>` per marker; coordinates rounded to 1/100 px so reruns are
/// byte-identical.
pub fn figure(parts: &[(&str, Vec<(f64, f64)>)], markers: &[(f64, f64)]) -> String {
    let canvas =
        Canvas::fit(parts.iter().flat_map(|(_, pts)| pts.iter()).chain(markers.iter()));
    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 {SIZE:.0} {SIZE:.0}\">"
    );
    let _ = writeln!(out, "  <rect width=\"{SIZE:.0}\" height=\"{SIZE:.0}\" fill=\"#ffffff\"/>");
    for (name, pts) in parts {
        if pts.is_empty() {
            continue;
        }
        let mut d = String::new();
        for (pos, &p) in pts.iter().enumerate() {
            let (x, y) = canvas.map(p);
            let _ = write!(d, "{}{x:.2} {y:.2}", if pos == 0 { "M" } else { " L" });
        }
        let _ = writeln!(
            out,
            "  <path data-part=\"{name}\" d=\"{d}\" fill=\"none\" stroke=\"#27526f\" stroke-width=\"1.3\"/>"
        );
    }
    for &m in markers {
        let (x, y) = canvas.map(m);
        let _ = writeln!(out, "  <circle cx=\"{x:.2}\" cy=\"{y:.2}\" r=\"3\" fill=\"#a03232\"/>");
    }
    out.push_str("</svg>\n");
    out
}
