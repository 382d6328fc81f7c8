//! Planar primitives: distances, ball/segment intersection, cylinder
//! membership and the free-space cell.
//!
//! Balls and cylinders are closed. Every comparison against a radius is made
//! on squared distances with an absolute slack of [`SQ_TOL`] so that points
//! placed exactly on a cylinder boundary resolve as inside.

use std::ops::{Add, Mul, Sub};

/// Absolute slack applied to squared-distance comparisons.
pub const SQ_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Point { x, y }
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite()
    }

    pub fn dot(self, o: Point) -> f64 {
        self.x * o.x + self.y * o.y
    }

    pub fn cross(self, o: Point) -> f64 {
        self.x * o.y - self.y * o.x
    }

    pub fn norm_sq(self) -> f64 {
        self.dot(self)
    }

    pub fn norm(self) -> f64 {
        self.norm_sq().sqrt()
    }

    pub fn dist_sq(self, o: Point) -> f64 {
        (self - o).norm_sq()
    }

    pub fn dist(self, o: Point) -> f64 {
        self.dist_sq(o).sqrt()
    }

    /// Linear interpolation `self + u (o - self)`.
    pub fn lerp(self, o: Point, u: f64) -> Point {
        Point::new(self.x + u * (o.x - self.x), self.y + u * (o.y - self.y))
    }

    /// Rotates by +90 degrees.
    pub fn perp(self) -> Point {
        Point::new(-self.y, self.x)
    }
}

impl Add for Point {
    type Output = Point;
    fn add(self, o: Point) -> Point {
        Point::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Point {
    type Output = Point;
    fn sub(self, o: Point) -> Point {
        Point::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<f64> for Point {
    type Output = Point;
    fn mul(self, s: f64) -> Point {
        Point::new(self.x * s, self.y * s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub const fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn at(&self, u: f64) -> Point {
        self.a.lerp(self.b, u)
    }

    pub fn length(&self) -> f64 {
        self.a.dist(self.b)
    }

    pub fn reversed(&self) -> Segment {
        Segment::new(self.b, self.a)
    }

    /// Parameter of the point of the segment closest to `p`.
    pub fn closest_param(&self, p: Point) -> f64 {
        let d = self.b - self.a;
        let len_sq = d.norm_sq();
        if len_sq == 0.0 {
            return 0.0;
        }
        ((p - self.a).dot(d) / len_sq).clamp(0.0, 1.0)
    }

    pub fn dist_sq_to(&self, p: Point) -> f64 {
        self.at(self.closest_param(p)).dist_sq(p)
    }
}

/// A closed sub-interval `[lo, hi]` of the unit parameter range of one
/// segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ParamInterval {
    pub lo: f64,
    pub hi: f64,
}

impl ParamInterval {
    pub fn new(lo: f64, hi: f64) -> Self {
        debug_assert!(0.0 <= lo && lo <= hi && hi <= 1.0, "bad interval [{lo}, {hi}]");
        ParamInterval { lo, hi }
    }

    pub fn contains(&self, u: f64) -> bool {
        self.lo <= u && u <= self.hi
    }

    pub fn is_subset_of(&self, other: &ParamInterval) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    /// The interval seen from the other end of the segment.
    pub fn mirrored(&self) -> ParamInterval {
        ParamInterval::new(1.0 - self.hi, 1.0 - self.lo)
    }
}

pub fn point_segment_distance(p: Point, seg: &Segment) -> f64 {
    seg.dist_sq_to(p).sqrt()
}

pub fn within(d_sq: f64, eps: f64) -> bool {
    d_sq <= eps * eps + SQ_TOL
}

/// True iff `p` lies in the closed cylinder of radius `eps` around `seg`.
pub fn in_cylinder(p: Point, seg: &Segment, eps: f64) -> bool {
    within(seg.dist_sq_to(p), eps)
}

pub fn in_ball(p: Point, center: Point, eps: f64) -> bool {
    within(p.dist_sq(center), eps)
}

/// Parameter interval of `seg` inside the closed ball `B(center, eps)`.
///
/// Presence agrees exactly with [`in_cylinder`]. An endpoint inside the ball
/// always pins the corresponding end of the interval to 0 or 1, so endpoint
/// membership and vertex-ball membership never disagree.
pub fn ball_segment_intersection(seg: &Segment, center: Point, eps: f64) -> Option<ParamInterval> {
    let u0 = seg.closest_param(center);
    let foot = seg.at(u0);
    let foot_sq = foot.dist_sq(center);
    if !within(foot_sq, eps) {
        return None;
    }
    let d = seg.b - seg.a;
    let len_sq = d.norm_sq();
    if len_sq == 0.0 {
        return Some(ParamInterval::new(0.0, 1.0));
    }
    // Unclamped foot of the perpendicular and the half chord around it.
    let t = (center - seg.a).dot(d) / len_sq;
    let perp_sq = (seg.a + d * t).dist_sq(center);
    let half = ((eps * eps - perp_sq).max(0.0) / len_sq).sqrt();
    let mut lo = (t - half).clamp(0.0, 1.0);
    let mut hi = (t + half).clamp(0.0, 1.0);
    if in_ball(seg.a, center, eps) {
        lo = 0.0;
    }
    if in_ball(seg.b, center, eps) {
        hi = 1.0;
    }
    // Tangency resolved by the slack: collapse onto the clamped foot.
    if lo > u0 {
        lo = u0;
    }
    if hi < u0 {
        hi = u0;
    }
    Some(ParamInterval::new(lo, hi))
}

/// Free portions of the four boundaries of one free-space cell.
///
/// The cell is spanned by `p_edge` (horizontal parameter) and `q_edge`
/// (vertical parameter). `left`/`right` hold parameters on `q_edge` with the
/// `p_edge` start/end fixed; `bottom`/`top` hold parameters on `p_edge` with
/// the `q_edge` start/end fixed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FreeCell {
    pub left: Option<ParamInterval>,
    pub right: Option<ParamInterval>,
    pub bottom: Option<ParamInterval>,
    pub top: Option<ParamInterval>,
}

pub fn free_space_cell(p_edge: &Segment, q_edge: &Segment, eps: f64) -> FreeCell {
    FreeCell {
        left: ball_segment_intersection(q_edge, p_edge.a, eps),
        right: ball_segment_intersection(q_edge, p_edge.b, eps),
        bottom: ball_segment_intersection(p_edge, q_edge.a, eps),
        top: ball_segment_intersection(p_edge, q_edge.b, eps),
    }
}

/// True iff the two closed segments share a point.
pub fn segments_intersect(s: &Segment, t: &Segment) -> bool {
    fn orient(a: Point, b: Point, c: Point) -> f64 {
        (b - a).cross(c - a)
    }
    fn on_seg(a: Point, b: Point, p: Point) -> bool {
        p.x >= a.x.min(b.x) && p.x <= a.x.max(b.x) && p.y >= a.y.min(b.y) && p.y <= a.y.max(b.y)
    }
    let d1 = orient(t.a, t.b, s.a);
    let d2 = orient(t.a, t.b, s.b);
    let d3 = orient(s.a, s.b, t.a);
    let d4 = orient(s.a, s.b, t.b);
    if ((d1 > 0.0 && d2 < 0.0) || (d1 < 0.0 && d2 > 0.0))
        && ((d3 > 0.0 && d4 < 0.0) || (d3 < 0.0 && d4 > 0.0))
    {
        return true;
    }
    (d1 == 0.0 && on_seg(t.a, t.b, s.a))
        || (d2 == 0.0 && on_seg(t.a, t.b, s.b))
        || (d3 == 0.0 && on_seg(s.a, s.b, t.a))
        || (d4 == 0.0 && on_seg(s.a, s.b, t.b))
}
