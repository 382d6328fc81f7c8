//! Smallest feasible eps for a monotone decision procedure: binary search over
//! sorted critical candidates, then bisection inside the bracketing gap.

/// Candidates closer than this are treated as one.
pub const DEDUP_TOL: f64 = 1e-12;

pub fn sorted_candidates(mut cands: Vec<f64>) -> Vec<f64> {
    cands.retain(|c| c.is_finite() && *c >= 0.0);
    cands.sort_by(f64::total_cmp);
    cands.dedup_by(|b, a| (*b - *a).abs() <= DEDUP_TOL);
    cands
}

/// Returns `(e, witness)` with `decide(e)` feasible and `decide(e - tol)`
/// infeasible, assuming `decide` is monotone in eps. `None` when even `top`
/// is infeasible. Candidates above `top` are ignored.
pub fn minimize_monotone<W, F>(cands: Vec<f64>, top: f64, tol: f64, mut decide: F) -> Option<(f64, W)>
where
    F: FnMut(f64) -> Option<W>,
{
    assert!(tol > 0.0, "tolerance must be positive");
    let mut cands = sorted_candidates(cands);
    cands.retain(|&c| c <= top);
    if cands.last().is_none_or(|&c| c < top) {
        cands.push(top);
    }
    let top_witness = decide(top)?;

    // First feasible candidate; the last one is known to be feasible.
    let (mut lo_idx, mut hi_idx) = (0usize, cands.len() - 1);
    let mut best = top_witness;
    while lo_idx < hi_idx {
        let mid = (lo_idx + hi_idx) / 2;
        match decide(cands[mid]) {
            Some(w) => {
                best = w;
                hi_idx = mid;
            }
            None => lo_idx = mid + 1,
        }
    }
    // `best` always belongs to `cands[hi_idx]`.
    let mut hi = cands[hi_idx];
    let mut lo = if hi_idx == 0 {
        if let Some(w) = decide(0.0) {
            return Some((0.0, w));
        }
        0.0
    } else {
        cands[hi_idx - 1]
    };
    while hi - lo > tol {
        let mid = lo + 0.5 * (hi - lo);
        if mid <= lo || mid >= hi {
            break;
        }
        match decide(mid) {
            Some(w) => {
                hi = mid;
                best = w;
            }
            None => lo = mid,
        }
    }
    Some((hi, best))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_threshold_between_candidates() {
        let threshold = 2.345_678;
        let (e, ()) =
            minimize_monotone(vec![1.0, 2.0, 3.0], 5.0, 1e-9, |e| (e >= threshold).then_some(())).unwrap();
        assert!(e >= threshold && e - 1e-9 < threshold);
    }

    #[test]
    fn exact_candidate() {
        let (e, ()) = minimize_monotone(vec![1.0, 2.0, 3.0], 5.0, 1e-9, |e| (e >= 2.0).then_some(())).unwrap();
        assert!(e >= 2.0 && e - 1e-9 < 2.0);
    }

    #[test]
    fn zero_and_infeasible() {
        assert_eq!(minimize_monotone(vec![1.0], 2.0, 1e-9, |_| Some(())).unwrap().0, 0.0);
        assert!(minimize_monotone(vec![1.0], 2.0, 1e-9, |_| None::<()>).is_none());
    }
}
