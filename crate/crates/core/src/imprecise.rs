//! Segment-shaped imprecise points and an exact solver for the discrete
//! non-unique matching question: can the regions be realized so that every
//! vertex ball of `P` holds a realized point?

use fixedbitset::FixedBitSet;

use crate::cpsm::cap_from_env;
use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::geom::{ball_segment_intersection, in_ball, Point, Segment};

pub const DEFAULT_REGION_CAP: usize = 24;

/// An imprecise point given as a closed segment; `a == b` is a precise point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ImpreciseRegion {
    pub a: Point,
    pub b: Point,
}

impl ImpreciseRegion {
    pub fn new(a: Point, b: Point) -> Result<Self> {
        if !a.is_finite() || !b.is_finite() {
            return Err(Error::InvalidInput("region endpoints must be finite".into()));
        }
        Ok(ImpreciseRegion { a, b })
    }

    pub fn point(p: Point) -> Self {
        ImpreciseRegion { a: p, b: p }
    }

    pub fn segment(&self) -> Segment {
        Segment::new(self.a, self.b)
    }

    pub fn contains(&self, p: Point) -> bool {
        self.segment().dist_sq_to(p) <= 1e-18
    }
}

/// One chosen point per region.
#[derive(Debug, Clone, PartialEq)]
pub struct Realization {
    pub chosen: Vec<Point>,
}

pub fn realize(regions: &[ImpreciseRegion], params: &[f64]) -> Result<Realization> {
    if regions.len() != params.len() {
        return Err(Error::InvalidInput(format!("{} regions but {} parameters", regions.len(), params.len())));
    }
    if let Some(u) = params.iter().find(|u| !(0.0..=1.0).contains(*u)) {
        return Err(Error::InvalidInput(format!("parameter {u} outside [0, 1]")));
    }
    Ok(Realization { chosen: regions.iter().zip(params).map(|(r, &u)| r.segment().at(u)).collect() })
}

fn ball_mask(p: Point, curve: &Curve, eps: f64) -> FixedBitSet {
    let mut m = FixedBitSet::with_capacity(curve.num_vertices());
    for (i, &v) in curve.vertices().iter().enumerate() {
        if in_ball(p, v, eps) {
            m.insert(i);
        }
    }
    m
}

/// The distinct vertex-ball memberships along a region, in order, each with
/// a representative point.
pub fn region_ball_patterns(region: &ImpreciseRegion, p: &Curve, eps: f64) -> Vec<(FixedBitSet, Point)> {
    let seg = region.segment();
    let mut breaks = vec![0.0, 1.0];
    for &v in p.vertices() {
        if let Some(c) = ball_segment_intersection(&seg, v, eps) {
            breaks.push(c.lo);
            breaks.push(c.hi);
        }
    }
    breaks.sort_by(f64::total_cmp);
    breaks.dedup();
    // Samples at every breakpoint and between consecutive ones.
    let mut samples = Vec::with_capacity(2 * breaks.len());
    for w in breaks.windows(2) {
        samples.push(w[0]);
        samples.push(0.5 * (w[0] + w[1]));
    }
    samples.push(*breaks.last().unwrap());

    let mut runs: Vec<(FixedBitSet, f64, f64)> = Vec::new();
    for u in samples {
        let m = ball_mask(seg.at(u), p, eps);
        match runs.last_mut() {
            Some((mask, _, hi)) if *mask == m => *hi = u,
            _ => runs.push((m, u, u)),
        }
    }
    runs.into_iter()
        .map(|(mask, lo, hi)| {
            let rep = seg.at(0.5 * (lo + hi));
            // The midpoint of a run shares its mask; guard against rounding.
            if ball_mask(rep, p, eps) == mask {
                (mask, rep)
            } else {
                (mask, seg.at(lo))
            }
        })
        .collect()
}

struct Search<'a> {
    options: &'a [Vec<(FixedBitSet, Point)>],
    assigned: Vec<Option<usize>>,
    covered: Vec<u32>,
}

impl Search<'_> {
    fn solve(&mut self) -> bool {
        let m = self.covered.len();
        // The uncovered ball with the fewest ways to cover it.
        let mut pick: Option<(usize, usize)> = None;
        for ball in (0..m).filter(|&b| self.covered[b] == 0) {
            let ways = self
                .options
                .iter()
                .enumerate()
                .filter(|(r, _)| self.assigned[*r].is_none())
                .map(|(_, opts)| opts.iter().filter(|(mask, _)| mask.contains(ball)).count())
                .sum::<usize>();
            if ways == 0 {
                return false;
            }
            if pick.is_none_or(|(_, w)| ways < w) {
                pick = Some((ball, ways));
            }
        }
        let Some((ball, _)) = pick else { return true };
        for r in 0..self.options.len() {
            if self.assigned[r].is_some() {
                continue;
            }
            for o in 0..self.options[r].len() {
                if !self.options[r][o].0.contains(ball) {
                    continue;
                }
                self.assign(r, Some(o));
                if self.solve() {
                    return true;
                }
                self.assign(r, None);
            }
        }
        false
    }

    fn assign(&mut self, r: usize, o: Option<usize>) {
        let (old, delta): (usize, i64) = match o {
            Some(o) => (o, 1),
            None => (self.assigned[r].expect("unassigning a free region"), -1),
        };
        for b in self.options[r][old].0.ones() {
            self.covered[b] = (self.covered[b] as i64 + delta) as u32;
        }
        self.assigned[r] = o;
    }
}

/// Exact exponential solver. With `all_points`, every realized point must
/// also lie in some vertex ball.
pub fn discrete_cipsm_nonunique_decide(
    p: &Curve,
    regions: &[ImpreciseRegion],
    eps: f64,
    all_points: bool,
    cap: Option<usize>,
) -> Result<Option<Realization>> {
    let cap = cap.or_else(cap_from_env).unwrap_or(DEFAULT_REGION_CAP);
    if regions.len() > cap {
        return Err(Error::InstanceTooLarge { what: "region count", size: regions.len(), cap });
    }
    if eps < 0.0 {
        return Ok(None);
    }
    let mut options: Vec<Vec<(FixedBitSet, Point)>> = Vec::with_capacity(regions.len());
    for r in regions {
        let mut opts = region_ball_patterns(r, p, eps);
        if all_points {
            opts.retain(|(m, _)| !m.is_clear());
            if opts.is_empty() {
                return Ok(None);
            }
        }
        // A mask inside another mask of the same region is never needed.
        let dominated: Vec<bool> = (0..opts.len())
            .map(|i| (0..opts.len()).any(|j| j != i && opts[i].0.is_subset(&opts[j].0) && (opts[i].0 != opts[j].0 || j < i)))
            .collect();
        let mut it = dominated.into_iter();
        opts.retain(|_| !it.next().unwrap());
        options.push(opts);
    }
    let mut search = Search { options: &options, assigned: vec![None; regions.len()], covered: vec![0; p.num_vertices()] };
    if !search.solve() {
        return Ok(None);
    }
    let chosen = search.assigned.iter().enumerate().map(|(r, o)| options[r][o.unwrap_or(0)].1).collect();
    Ok(Some(Realization { chosen }))
}
