use std::collections::HashSet;

use curve_match::cpsm::{discrete_allpoints_decide, discrete_subset_decide, PointSet};
use curve_match::geom::in_ball;
use curve_match::imprecise::{discrete_cipsm_nonunique_decide, region_ball_patterns, ImpreciseRegion};
use curve_match::{Curve, Point};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn random_case(rng: &mut StdRng, m: usize, r: usize) -> (Curve, Vec<ImpreciseRegion>) {
    let p = Curve::new((0..m).map(|_| Point::new(rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0))).collect()).unwrap();
    let regions = (0..r)
        .map(|_| {
            let a = Point::new(rng.gen_range(0.0..6.0), rng.gen_range(0.0..6.0));
            let b = a + Point::new(rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0));
            ImpreciseRegion::new(a, b).unwrap()
        })
        .collect();
    (p, regions)
}

fn mask_of(p: &Curve, q: Point, eps: f64) -> Vec<usize> {
    (0..p.num_vertices()).filter(|&i| in_ball(q, p.vertex(i), eps)).collect()
}

/// Every combination of pattern representatives, without pruning.
fn product_oracle(p: &Curve, regions: &[ImpreciseRegion], eps: f64, all_points: bool) -> bool {
    let pats: Vec<Vec<Point>> = regions.iter().map(|r| region_ball_patterns(r, p, eps).into_iter().map(|x| x.1).collect()).collect();
    let mut idx = vec![0usize; regions.len()];
    loop {
        let pts: Vec<Point> = idx.iter().enumerate().map(|(r, &i)| pats[r][i]).collect();
        let covers = (0..p.num_vertices()).all(|v| pts.iter().any(|&q| in_ball(q, p.vertex(v), eps)));
        let used = !all_points || pts.iter().all(|&q| !mask_of(p, q, eps).is_empty());
        if covers && used {
            return true;
        }
        let mut r = 0;
        loop {
            if r == idx.len() {
                return false;
            }
            idx[r] += 1;
            if idx[r] < pats[r].len() {
                break;
            }
            idx[r] = 0;
            r += 1;
        }
    }
}

#[test]
fn solver_matches_product_enumeration() {
    let mut rng = StdRng::seed_from_u64(31);
    let mut positives = 0;
    for _ in 0..400 {
        let m = rng.gen_range(1..=5);
        let r = rng.gen_range(1..=6);
        let (p, regions) = random_case(&mut rng, m, r);
        let eps = rng.gen_range(0.3..2.0);
        for all_points in [false, true] {
            let fast = discrete_cipsm_nonunique_decide(&p, &regions, eps, all_points, None).unwrap();
            assert_eq!(fast.is_some(), product_oracle(&p, &regions, eps, all_points));
            if let Some(real) = fast {
                positives += 1;
                for (reg, &q) in regions.iter().zip(&real.chosen) {
                    assert!(reg.contains(q));
                }
                let s = PointSet::new(real.chosen.clone()).unwrap();
                assert!(discrete_subset_decide(&p, &s, eps).is_some());
                if all_points {
                    assert!(discrete_allpoints_decide(&p, &s, eps).is_some());
                }
            }
        }
    }
    assert!(positives > 40, "{positives}");
}

#[test]
fn patterns_are_exhaustive() {
    let mut rng = StdRng::seed_from_u64(32);
    for _ in 0..100 {
        let m = rng.gen_range(1..=6);
        let (p, regions) = random_case(&mut rng, m, 1);
        let eps = rng.gen_range(0.3..2.0);
        let reg = regions[0];
        let listed: HashSet<Vec<usize>> =
            region_ball_patterns(&reg, &p, eps).iter().map(|(m, _)| m.ones().collect()).collect();
        for i in 0..=1000 {
            let q = reg.segment().at(i as f64 / 1000.0);
            assert!(listed.contains(&mask_of(&p, q, eps)), "missing pattern at {i}");
        }
    }
}

#[test]
fn monotone_in_eps() {
    let mut rng = StdRng::seed_from_u64(33);
    for _ in 0..100 {
        let (m, r) = (rng.gen_range(1..=4), rng.gen_range(1..=5));
        let (p, regions) = random_case(&mut rng, m, r);
        let mut prev = false;
        for eps in [0.4, 0.8, 1.6, 3.2] {
            let now = discrete_cipsm_nonunique_decide(&p, &regions, eps, false, None).unwrap().is_some();
            assert!(!prev || now);
            prev = now;
        }
    }
}
