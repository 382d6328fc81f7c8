#![allow(dead_code)]

use curve_match::allpoints::{closest_segment, compute_point_sets, entry_exit_sets, first_essential_after, modify_reachability, preprocess_feasible};
use curve_match::cpsm::{critical_eps_candidates, reachability_table, MatchWitness, PointSet};
use curve_match::geom::ball_segment_intersection;
use curve_match::{Curve, Point};
use rand::rngs::StdRng;
use rand::Rng;

/// A random curve with `n` segments and `k` points scattered around it.
pub fn random_instance(rng: &mut StdRng, n: usize, k: usize) -> (Curve, PointSet) {
    let mut v = vec![Point::new(rng.gen_range(0.0..10.0), rng.gen_range(0.0..10.0))];
    for _ in 0..n {
        let last = *v.last().unwrap();
        v.push(last + Point::new(rng.gen_range(-4.0..4.0), rng.gen_range(-4.0..4.0)));
    }
    let p = Curve::new(v).unwrap();
    let mut pts = Vec::with_capacity(k);
    for j in 0..k {
        let base = if j == 0 {
            p.start()
        } else if j == k - 1 {
            p.end()
        } else {
            let i = rng.gen_range(0..n.max(1));
            if n == 0 { p.start() } else { p.segment(i).at(rng.gen_range(0.0..1.0)) }
        };
        pts.push(base + Point::new(rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)));
    }
    (p, PointSet::new(pts).unwrap())
}

/// An eps near a randomly chosen critical value.
pub fn eps_near_critical(rng: &mut StdRng, p: &Curve, s: &PointSet) -> f64 {
    let c = critical_eps_candidates(p, s);
    let base = c[rng.gen_range(0..c.len())];
    let jitter = match rng.gen_range(0..3) {
        0 => 0.0,
        1 => -1e-6,
        _ => 1e-6,
    };
    (base + jitter).max(0.0)
}

/// First point of each segment group is an entry point, the last an exit point.
pub fn lemma_holds(w: &MatchWitness, p: &curve_match::Curve, s: &curve_match::cpsm::PointSet, eps: f64) -> bool {
    if p.num_segments() == 0 {
        return true;
    }
    let sets = compute_point_sets(p, s, eps);
    let ee = entry_exit_sets(&sets);
    let mut i = 0;
    while i < w.visits.len() {
        let seg = w.visits[i].segment;
        let mut j = i;
        while j + 1 < w.visits.len() && w.visits[j + 1].segment == seg {
            j += 1;
        }
        if !ee.is_entry(seg, w.visits[i].point) || !ee.is_exit(seg, w.visits[j].point) {
            return false;
        }
        i = j + 1;
    }
    true
}

/// Checks the three properties of the modified reachability table against
/// entry/exit and essential sets recomputed from the geometry. Returns the
/// violations and the number of forward hops seen, or `None` when the
/// instance fails preprocessing and the table is never built.
pub fn r_prime_violations(p: &Curve, s: &PointSet, eps: f64) -> Option<(Vec<String>, usize)> {
    let n = p.num_segments();
    let k = s.len();
    let chord = |i: usize, a: usize| ball_segment_intersection(&p.segment(i), s.get(a), eps);
    let essential = |i: usize| (0..k).filter(move |&a| closest_segment(p, s.get(a)) == i);
    let is_entry = |i: usize, t: usize| chord(i, t).is_some_and(|ct| essential(i).all(|e| chord(i, e).is_some_and(|ce| ct.lo <= ce.hi)));
    let is_exit = |i: usize, a: usize| chord(i, a).is_some_and(|ca| essential(i).all(|e| chord(i, e).is_some_and(|ce| ce.lo <= ca.hi)));

    let sets = compute_point_sets(p, s, eps);
    if !preprocess_feasible(p, s, eps, &sets) {
        return None;
    }
    let ee = entry_exit_sets(&sets);
    let r = reachability_table(p, s, eps);
    let r2 = modify_reachability(&r, &sets, &ee, &first_essential_after(&sets));
    let mut bad = Vec::new();
    let mut hops = 0;
    for i in 0..n {
        for a in 0..k {
            for t in 0..k {
                let Some(j) = r2.get(i, a, t) else { continue };
                if !is_exit(i, a) && j != i {
                    bad.push(format!("r'[{i}][{a}][{t}] = {j} but {a} is not an exit point"));
                }
                if j > i {
                    hops += 1;
                    if !is_entry(j, t) {
                        bad.push(format!("r'[{i}][{a}][{t}] = {j} but {t} is not an entry point there"));
                    }
                    if let Some(m) = (i + 1..j).find(|&m| essential(m).next().is_some()) {
                        bad.push(format!("r'[{i}][{a}][{t}] = {j} skips essential points of {m}"));
                    }
                }
            }
        }
    }
    Some((bad, hops))
}
