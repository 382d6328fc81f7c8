use super::PointSet;
use crate::frechet::Curve;
use crate::geom::{point_segment_distance, Segment};
use crate::optimize::sorted_candidates;

/// Smallest eps at which two chords on a segment touch: the root of
/// `sqrt(e^2 - a) + sqrt(e^2 - b) = d` with `a`, `b` squared perpendicular
/// distances and `d > 0` the offset between the feet.
fn alignment_eps(a: f64, b: f64, d: f64) -> Option<f64> {
    if d <= 0.0 {
        return None;
    }
    let rb = (d * d + a - b) / (2.0 * d);
    let ra = (d * d + b - a) / (2.0 * d);
    if rb < 0.0 || ra < 0.0 {
        return None;
    }
    Some((b + rb * rb).sqrt())
}

/// Eps values where the combinatorics of the free space can change.
pub fn critical_eps_candidates(p: &Curve, s: &PointSet) -> Vec<f64> {
    let pts = s.points();
    let mut out = Vec::new();
    for &a in pts {
        for &v in p.vertices() {
            out.push(a.dist(v));
        }
        for seg in p.segments() {
            out.push(point_segment_distance(a, &seg));
        }
    }
    for &a in pts {
        for &b in pts {
            let edge = Segment::new(a, b);
            for &v in p.vertices() {
                out.push(point_segment_distance(v, &edge));
            }
        }
    }
    for seg in p.segments() {
        let len = seg.length();
        if len == 0.0 {
            continue;
        }
        let dir = (seg.b - seg.a) * (1.0 / len);
        let feet: Vec<(f64, f64)> = pts
            .iter()
            .map(|&q| {
                let rel = q - seg.a;
                let h = dir.cross(rel);
                (dir.dot(rel), h * h)
            })
            .collect();
        for &(xs, a) in &feet {
            for &(xt, b) in &feet {
                if let Some(e) = alignment_eps(a, b, xt - xs) {
                    out.push(e);
                }
            }
        }
    }
    sorted_candidates(out)
}
