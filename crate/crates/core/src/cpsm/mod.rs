//! Matching a curve to a precise point set.

mod bruteforce;
mod candidates;
mod discrete;
mod reach;

pub use bruteforce::{
    brute_force_allpoints_decide, brute_force_restricted_decide, brute_force_subset_decide, cap_from_env,
    BruteForce, SearchMode, DEFAULT_ALLPOINTS_CAP, DEFAULT_SUBSET_CAP,
};
pub use candidates::critical_eps_candidates;
pub use discrete::{discrete_allpoints_decide, discrete_subset_decide};
pub use reach::{
    continuous_subset_decide, continuous_subset_optimize, reachability_table, search_with_table, Chords, ReachTable,
};

use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::geom::Point;

/// The candidate points `S`; indices are stable, duplicates allowed.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    points: Vec<Point>,
}

impl PointSet {
    pub fn new(points: Vec<Point>) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::InvalidInput("point set must not be empty".into()));
        }
        if let Some(i) = points.iter().position(|p| !p.is_finite()) {
            return Err(Error::InvalidInput(format!("point {i} is not finite")));
        }
        Ok(PointSet { points })
    }

    pub fn from_xy(coords: &[(f64, f64)]) -> Result<Self> {
        PointSet::new(coords.iter().map(|&(x, y)| Point::new(x, y)).collect())
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn get(&self, i: usize) -> Point {
        self.points[i]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }
}

/// One vertex of the output curve matched to a position on `P`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Visit {
    pub point: usize,
    /// 0-based segment index of `P`.
    pub segment: usize,
    /// Parameter on that segment where the visit starts.
    pub position: f64,
}

/// An output curve on `S` and the monotone schedule that certifies it.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchWitness {
    pub q_vertices: Vec<usize>,
    pub visits: Vec<Visit>,
}

impl MatchWitness {
    pub fn from_visits(visits: Vec<Visit>) -> Self {
        let mut q_vertices: Vec<usize> = visits.iter().map(|v| v.point).collect();
        q_vertices.dedup();
        MatchWitness { q_vertices, visits }
    }

    pub fn curve(&self, s: &PointSet) -> Curve {
        Curve::new(self.q_vertices.iter().map(|&i| s.get(i)).collect()).expect("witness is never empty")
    }

    /// Segments non-decreasing, positions non-decreasing within a segment.
    pub fn is_monotone(&self) -> bool {
        self.visits.windows(2).all(|w| {
            w[0].segment < w[1].segment || (w[0].segment == w[1].segment && w[0].position <= w[1].position)
        })
    }

    pub fn covers_all(&self, k: usize) -> bool {
        let mut seen = vec![false; k];
        for &q in &self.q_vertices {
            seen[q] = true;
        }
        seen.into_iter().all(|b| b)
    }
}

/// `P` restricted to the parameter range from `(seg_a, u_a)` to `(seg_b, u_b)`.
pub fn subcurve(p: &Curve, seg_a: usize, u_a: f64, seg_b: usize, u_b: f64) -> Curve {
    if p.num_segments() == 0 {
        return p.clone();
    }
    let mut v = vec![p.segment(seg_a).at(u_a)];
    for i in seg_a + 1..=seg_b {
        v.push(p.vertex(i));
    }
    v.push(p.segment(seg_b).at(u_b));
    if seg_a == seg_b {
        v = vec![v[0], *v.last().unwrap()];
    }
    Curve::new(v).expect("non-empty")
}
