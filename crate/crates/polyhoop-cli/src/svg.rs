//! Deterministic SVG rendering: 1-variable functions as polylines over the
//! unit square, 2-dimensional polyhedra as shaded polygons, segments and
//! points. Coordinates are formatted with fixed precision so identical
//! inputs produce identical bytes.

use num::ToPrimitive;
use polyhoop_core::{PLFunction, Polyhedron, Rat};

const SIZE: f64 = 520.0;
const MARGIN: f64 = 20.0;
const BOX: f64 = 480.0;

const PALETTE: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn fx(x: f64) -> String {
    format!("{:.4}", MARGIN + BOX * x)
}

fn fy(y: f64) -> String {
    format!("{:.4}", MARGIN + BOX * (1.0 - y))
}

fn rf(r: &Rat) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        let n = r.numer().to_f64().unwrap_or(0.0);
        let d = r.denom().to_f64().unwrap_or(1.0);
        n / d
    })
}

fn header() -> String {
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{s}\" height=\"{s}\" viewBox=\"0 0 {s} {s}\">\n\
         <rect x=\"{m}\" y=\"{m}\" width=\"{b}\" height=\"{b}\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\"/>\n",
        s = SIZE,
        m = MARGIN,
        b = BOX
    )
}

/// Graphs of one or more 1-variable functions, with dots at interior
/// breakpoints.
pub fn emit_function_svg(fs: &[(String, &PLFunction)]) -> String {
    let mut out = header();
    for (i, (label, f)) in fs.iter().enumerate() {
        let color = PALETTE[i % PALETTE.len()];
        // gather (x, f(x)) at every cell endpoint
        let mut pts: Vec<(Rat, Rat)> = Vec::new();
        for cell in f.cells() {
            for v in cell.poly.vertices() {
                pts.push((v[0].clone(), cell.piece.eval(v)));
            }
        }
        pts.sort();
        pts.dedup();
        let path: Vec<String> =
            pts.iter().map(|(x, y)| format!("{},{}", fx(rf(x)), fy(rf(y)))).collect();
        out.push_str(&format!(
            "<polyline points=\"{}\" fill=\"none\" stroke=\"{}\" stroke-width=\"2\"/>\n",
            path.join(" "),
            color
        ));
        for (x, y) in &pts {
            let xf = rf(x);
            if xf > 0.0 && xf < 1.0 {
                out.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"3\" fill=\"{}\"/>\n",
                    fx(xf),
                    fy(rf(y)),
                    color
                ));
            }
        }
        out.push_str(&format!(
            "<text x=\"{}\" y=\"{}\" font-size=\"14\" fill=\"{}\">{}</text>\n",
            MARGIN + 8.0,
            MARGIN + 18.0 + 18.0 * i as f64,
            color,
            xml_escape(label)
        ));
    }
    out.push_str("</svg>\n");
    out
}

/// A polyhedron in ambient dimension 1 or 2 in the unit square. Dimension-1
/// polyhedra are drawn on the horizontal axis line.
pub fn emit_polyhedron_svg(p: &Polyhedron) -> String {
    let mut out = header();
    let color = PALETTE[0];
    for poly in p.polytopes() {
        let verts = poly.vertices();
        let coords: Vec<(f64, f64)> = verts
            .iter()
            .map(|v| {
                if p.dim() == 1 {
                    (rf(&v[0]), 0.0)
                } else {
                    (rf(&v[0]), rf(&v[1]))
                }
            })
            .collect();
        match poly.dim() {
            0 => {
                let (x, y) = coords[0];
                out.push_str(&format!(
                    "<circle cx=\"{}\" cy=\"{}\" r=\"4\" fill=\"{}\"/>\n",
                    fx(x),
                    fy(y),
                    color
                ));
            }
            1 => {
                let (a, b) = (coords[0], coords[coords.len() - 1]);
                out.push_str(&format!(
                    "<line x1=\"{}\" y1=\"{}\" x2=\"{}\" y2=\"{}\" stroke=\"{}\" stroke-width=\"3\"/>\n",
                    fx(a.0),
                    fy(a.1),
                    fx(b.0),
                    fy(b.1),
                    color
                ));
            }
            _ => {
                // ring order around the centroid for polygon rendering
                let cx = coords.iter().map(|c| c.0).sum::<f64>() / coords.len() as f64;
                let cy = coords.iter().map(|c| c.1).sum::<f64>() / coords.len() as f64;
                let mut ring = coords.clone();
                ring.sort_by(|a, b| {
                    let aa = (a.1 - cy).atan2(a.0 - cx);
                    let ab = (b.1 - cy).atan2(b.0 - cx);
                    aa.partial_cmp(&ab).unwrap()
                });
                let pts: Vec<String> =
                    ring.iter().map(|(x, y)| format!("{},{}", fx(*x), fy(*y))).collect();
                out.push_str(&format!(
                    "<polygon points=\"{}\" fill=\"{}\" fill-opacity=\"0.3\" stroke=\"{}\" stroke-width=\"2\"/>\n",
                    pts.join(" "),
                    color,
                    color
                ));
            }
        }
    }
    out.push_str("</svg>\n");
    out
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}
