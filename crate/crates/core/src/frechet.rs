//! Continuous (Alt–Godau) and discrete Fréchet distance between polygonal
//! curves.

use crate::error::{Error, Result};
use crate::geom::{free_space_cell, in_ball, ParamInterval, Point, Segment};
use crate::optimize::minimize_monotone;

/// An ordered polygonal curve with at least one vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    vertices: Vec<Point>,
}

impl Curve {
    pub fn new(vertices: Vec<Point>) -> Result<Self> {
        if vertices.is_empty() {
            return Err(Error::InvalidInput("a curve needs at least one vertex".into()));
        }
        if let Some(i) = vertices.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("vertex {i} is not finite")));
        }
        Ok(Curve { vertices })
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self> {
        Curve::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn vertex(&self, i: usize) -> Point {
        self.vertices[i]
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    /// Number of segments, `vertex count - 1`.
    pub fn num_segments(&self) -> usize {
        self.vertices.len() - 1
    }

    pub fn segment(&self, i: usize) -> Segment {
        Segment::new(self.vertices[i], self.vertices[i + 1])
    }

    pub fn segments(&self) -> impl Iterator<Item = Segment> + '_ {
        self.vertices.windows(2).map(|w| Segment::new(w[0], w[1]))
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        *self.vertices.last().unwrap()
    }

    /// Splits every segment into `m` equal pieces.
    pub fn refined(&self, m: usize) -> Curve {
        let m = m.max(1);
        let mut out = Vec::with_capacity(self.num_segments() * m + 1);
        out.push(self.start());
        for s in self.segments() {
            for k in 1..=m {
                out.push(s.at(k as f64 / m as f64));
            }
        }
        Curve { vertices: out }
    }

    pub fn max_edge_length(&self) -> f64 {
        self.segments().map(|s| s.length()).fold(0.0, f64::max)
    }
}

/// Monotone coupling of two vertex sequences (0-based indices).
#[derive(Debug, Clone, PartialEq)]
pub struct Coupling {
    pub steps: Vec<(usize, usize)>,
}

impl Coupling {
    pub fn is_valid(&self, n_p: usize, n_q: usize) -> bool {
        let Some(&first) = self.steps.first() else { return false };
        if first != (0, 0) || *self.steps.last().unwrap() != (n_p - 1, n_q - 1) {
            return false;
        }
        self.steps.windows(2).all(|w| {
            let (di, dj) = (w[1].0 as isize - w[0].0 as isize, w[1].1 as isize - w[0].1 as isize);
            (0..=1).contains(&di) && (0..=1).contains(&dj) && di + dj > 0
        })
    }
}

/// Decides `δ_F(P, Q) <= eps` by monotone reachability over the free-space
/// grid, keeping one row of bottom intervals.
pub fn continuous_frechet_decide(p: &Curve, q: &Curve, eps: f64) -> bool {
    if eps < 0.0 {
        return false;
    }
    // A single vertex against a curve: the ball is convex, so vertices suffice.
    if p.num_segments() == 0 {
        return q.vertices().iter().all(|&v| in_ball(v, p.start(), eps));
    }
    if q.num_segments() == 0 {
        return p.vertices().iter().all(|&v| in_ball(v, q.start(), eps));
    }
    if !in_ball(p.start(), q.start(), eps) || !in_ball(p.end(), q.end(), eps) {
        return false;
    }
    let n = p.num_segments();
    let m = q.num_segments();
    let p_segs: Vec<Segment> = p.segments().collect();

    // Reachable bottom intervals of the current row; the first row is fed by
    // the bottom edge of the diagram, reachable as long as it stays free from 0.
    let mut bottom: Vec<Option<ParamInterval>> = vec![None; n];
    let q0 = Segment::new(q.start(), q.start());
    for (i, ps) in p_segs.iter().enumerate() {
        let free = free_space_cell(ps, &q0, eps).bottom;
        match free {
            Some(iv) if iv.lo == 0.0 => {
                bottom[i] = Some(iv);
                if iv.hi < 1.0 {
                    break;
                }
            }
            _ => break,
        }
    }

    let mut left_edge_open = true;
    for j in 0..m {
        let qs = q.segment(j);
        // Left boundary of the diagram: reachable while free from t = 0.
        let mut left: Option<ParamInterval> = None;
        if left_edge_open {
            match free_space_cell(&p_segs[0], &qs, eps).left {
                Some(iv) if iv.lo == 0.0 => {
                    left = Some(iv);
                    left_edge_open = iv.hi == 1.0;
                }
                _ => left_edge_open = false,
            }
        }
        for i in 0..n {
            let cell = free_space_cell(&p_segs[i], &qs, eps);
            let from_bottom = bottom[i];
            let top = match cell.top {
                Some(t) if left.is_some() => Some(t),
                Some(t) => from_bottom
                    .map(|b| t.lo.max(b.lo))
                    .filter(|&lo| lo <= t.hi)
                    .map(|lo| ParamInterval::new(lo, t.hi)),
                None => None,
            };
            let right = match cell.right {
                Some(r) if from_bottom.is_some() => Some(r),
                Some(r) => left
                    .map(|l| r.lo.max(l.lo))
                    .filter(|&lo| lo <= r.hi)
                    .map(|lo| ParamInterval::new(lo, r.hi)),
                None => None,
            };
            bottom[i] = top;
            left = right;
            if i == n - 1 && j == m - 1 {
                let corner_by_right = right.is_some_and(|r| r.hi == 1.0);
                let corner_by_top = top.is_some_and(|t| t.hi == 1.0);
                return corner_by_right || corner_by_top;
            }
        }
    }
    unreachable!("grid has at least one cell")
}

/// Fréchet distance to within `tol`: returns `e` with `decide(e)` true and
/// `decide(e - tol)` false.
pub fn continuous_frechet_value(p: &Curve, q: &Curve, tol: f64) -> f64 {
    let mut cands = Vec::new();
    let mut hi: f64 = 0.0;
    for &a in p.vertices() {
        for &b in q.vertices() {
            let d = a.dist(b);
            hi = hi.max(d);
            cands.push(d);
        }
    }
    for &a in p.vertices() {
        for s in q.segments() {
            cands.push(crate::geom::point_segment_distance(a, &s));
        }
    }
    for &b in q.vertices() {
        for s in p.segments() {
            cands.push(crate::geom::point_segment_distance(b, &s));
        }
    }
    cands.retain(|&c| c <= hi);
    minimize_monotone(cands, hi, tol, |e| continuous_frechet_decide(p, q, e).then_some(()))
        .map(|(e, ())| e)
        .unwrap_or(hi)
}

/// Exact discrete Fréchet distance with an optimal coupling.
pub fn discrete_frechet(p: &Curve, q: &Curve) -> (f64, Coupling) {
    let n = p.num_vertices();
    let m = q.num_vertices();
    let mut dp = vec![f64::INFINITY; n * m];
    let at = |i: usize, j: usize| i * m + j;
    for i in 0..n {
        for j in 0..m {
            let d = p.vertex(i).dist(q.vertex(j));
            let prev = if i == 0 && j == 0 {
                0.0
            } else {
                let mut best = f64::INFINITY;
                if i > 0 {
                    best = best.min(dp[at(i - 1, j)]);
                }
                if j > 0 {
                    best = best.min(dp[at(i, j - 1)]);
                }
                if i > 0 && j > 0 {
                    best = best.min(dp[at(i - 1, j - 1)]);
                }
                best
            };
            dp[at(i, j)] = d.max(prev);
        }
    }
    let value = dp[at(n - 1, m - 1)];
    let mut steps = vec![(n - 1, m - 1)];
    let (mut i, mut j) = (n - 1, m - 1);
    while (i, j) != (0, 0) {
        // Prefer the diagonal, then P, then Q.
        let mut options = Vec::with_capacity(3);
        if i > 0 && j > 0 {
            options.push((i - 1, j - 1));
        }
        if i > 0 {
            options.push((i - 1, j));
        }
        if j > 0 {
            options.push((i, j - 1));
        }
        let next = options
            .into_iter()
            .min_by(|a, b| dp[at(a.0, a.1)].total_cmp(&dp[at(b.0, b.1)]))
            .unwrap();
        (i, j) = next;
        steps.push(next);
    }
    steps.reverse();
    (value, Coupling { steps })
}
