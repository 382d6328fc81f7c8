//! Figure-style SVG: solid curve, dotted cylinders, points as dots, regions as
//! short strokes and the witness as a separate polyline.

use std::fmt::Write;

use crate::geom::Point;
use crate::io::{InstanceFile, RegionEntry};

const MARGIN: f64 = 1.0;
const UNIT: f64 = 20.0;

fn n(x: f64) -> String {
    let s = format!("{:.3}", x * UNIT);
    let s = s.trim_end_matches('0').trim_end_matches('.');
    if s == "-0" { "0".into() } else { s.to_string() }
}

fn xy(p: Point) -> (String, String) {
    (n(p.x), n(-p.y))
}

fn polyline(pts: &[Point], class: &str) -> String {
    let coords: Vec<String> = pts.iter().map(|&p| {
        let (x, y) = xy(p);
        format!("{x},{y}")
    }).collect();
    format!("<polyline class=\"{class}\" points=\"{}\"/>", coords.join(" "))
}

/// Renders `inst` and, if given, the witness curve. The same input always
/// gives the same bytes.
pub fn render_svg(inst: &InstanceFile, witness: Option<&[Point]>) -> String {
    let curve: Vec<Point> = inst.curve.iter().map(|c| Point::new(c[0], c[1])).collect();
    let points: Vec<Point> = inst.points.iter().flatten().map(|c| Point::new(c[0], c[1])).collect();
    let regions: Vec<(Point, Point)> = inst
        .regions
        .iter()
        .flatten()
        .map(|RegionEntry::Segment { a, b }| (Point::new(a[0], a[1]), Point::new(b[0], b[1])))
        .collect();
    let eps = inst.eps.unwrap_or(0.0);

    let mut all: Vec<Point> = curve.clone();
    all.extend(&points);
    all.extend(regions.iter().flat_map(|&(a, b)| [a, b]));
    all.extend(witness.unwrap_or(&[]));
    let pad = eps + MARGIN;
    let min_x = all.iter().map(|p| p.x).fold(f64::INFINITY, f64::min) - pad;
    let max_x = all.iter().map(|p| p.x).fold(f64::NEG_INFINITY, f64::max) + pad;
    let min_y = all.iter().map(|p| p.y).fold(f64::INFINITY, f64::min) - pad;
    let max_y = all.iter().map(|p| p.y).fold(f64::NEG_INFINITY, f64::max) + pad;

    let mut out = String::new();
    let _ = writeln!(
        out,
        "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"{} {} {} {}\">",
        n(min_x),
        n(-max_y),
        n(max_x - min_x),
        n(max_y - min_y)
    );
    out.push_str("<style>.curve{fill:none;stroke:#000;stroke-width:2}.cyl{fill:none;stroke:#666;stroke-dasharray:2 3}");
    out.push_str(".pt{fill:#000}.region{stroke:#1f5fbf;stroke-width:3}.witness{fill:none;stroke:#d33;stroke-width:2}</style>\n");

    if eps > 0.0 {
        out.push_str("<g id=\"cylinders\">\n");
        for w in curve.windows(2) {
            let d = w[1] - w[0];
            let len = d.x.hypot(d.y);
            if len == 0.0 {
                continue;
            }
            let off = Point::new(-d.y, d.x) * (eps / len);
            for side in [off, off * -1.0] {
                let ((x1, y1), (x2, y2)) = (xy(w[0] + side), xy(w[1] + side));
                let _ = writeln!(out, "<line class=\"cyl\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"/>");
            }
        }
        for &v in &curve {
            let (cx, cy) = xy(v);
            let _ = writeln!(out, "<circle class=\"cyl\" cx=\"{cx}\" cy=\"{cy}\" r=\"{}\"/>", n(eps));
        }
        out.push_str("</g>\n");
    }

    out.push_str("<g id=\"curve\">\n");
    out.push_str(&polyline(&curve, "curve"));
    out.push_str("\n</g>\n");

    if !regions.is_empty() {
        out.push_str("<g id=\"regions\">\n");
        for &(a, b) in &regions {
            let ((x1, y1), (x2, y2)) = (xy(a), xy(b));
            let _ = writeln!(out, "<line class=\"region\" x1=\"{x1}\" y1=\"{y1}\" x2=\"{x2}\" y2=\"{y2}\"/>");
        }
        out.push_str("</g>\n");
    }
    if !points.is_empty() {
        out.push_str("<g id=\"points\">\n");
        for &p in &points {
            let (cx, cy) = xy(p);
            let _ = writeln!(out, "<circle class=\"pt\" cx=\"{cx}\" cy=\"{cy}\" r=\"3\"/>");
        }
        out.push_str("</g>\n");
    }
    if let Some(w) = witness {
        out.push_str("<g id=\"witness\">\n");
        out.push_str(&polyline(w, "witness"));
        out.push_str("\n</g>\n");
    }
    out.push_str("</svg>\n");
    out
}
