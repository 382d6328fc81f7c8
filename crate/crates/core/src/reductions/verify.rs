//! Runs a generator, the matching solver and the SAT oracle side by side.

use std::fmt;
use std::str::FromStr;

use super::{gen_discrete_cipsm_instance, gen_imprecise_subset_instance, gen_unique_subset_instance, sat_bruteforce};
use super::{CnfFormula, GadgetInstance};
use crate::cpsm::{continuous_subset_decide, BruteForce, PointSet, SearchMode};
use crate::error::{Error, Result};
use crate::geom::{point_segment_distance, Point, Segment};
use crate::imprecise::discrete_cipsm_nonunique_decide;

pub const UNIQUE_POINT_CAP: usize = 128;
pub const DISCRETE_REGION_CAP: usize = 64;
/// Regions with two usable endpoints; every combination is tried.
pub const CHOICE_REGION_CAP: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Variant {
    UniqueSubset,
    ImpreciseSubset,
    DiscreteCipsm,
}

impl Variant {
    pub fn name(&self) -> &'static str {
        match self {
            Variant::UniqueSubset => "unique-subset",
            Variant::ImpreciseSubset => "imprecise-subset",
            Variant::DiscreteCipsm => "discrete-cipsm",
        }
    }

    pub fn generate(&self, f: &CnfFormula, scale: f64) -> Result<GadgetInstance> {
        match self {
            Variant::UniqueSubset => gen_unique_subset_instance(f, scale),
            Variant::ImpreciseSubset => gen_imprecise_subset_instance(f, scale),
            Variant::DiscreteCipsm => gen_discrete_cipsm_instance(f, scale),
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Variant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "unique-subset" => Ok(Variant::UniqueSubset),
            "imprecise-subset" => Ok(Variant::ImpreciseSubset),
            "discrete-cipsm" => Ok(Variant::DiscreteCipsm),
            _ => Err(Error::InvalidInput(format!("unknown variant `{s}`"))),
        }
    }
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub variant: Variant,
    pub satisfiable: bool,
    pub assignment: Option<Vec<bool>>,
    pub feasible: bool,
    /// Vertices of the matching curve, or the realized points for the
    /// discrete variant.
    pub witness: Option<Vec<Point>>,
    pub instance: GadgetInstance,
}

impl VerifyReport {
    pub fn agrees(&self) -> bool {
        self.satisfiable == self.feasible
    }

    pub fn summary(&self) -> String {
        let (f, s) = if self.feasible { ("feasible", "SAT") } else { ("infeasible", "UNSAT") };
        if self.agrees() {
            format!("agreement: {f} ⇔ {s}")
        } else {
            let s = if self.satisfiable { "SAT" } else { "UNSAT" };
            format!("counterexample: {f} but {s}")
        }
    }
}

/// Generates the instance for `variant` at unit scale and checks that the
/// solver's answer matches satisfiability. `cap` overrides the variant's size
/// limit.
pub fn verify_equivalence(f: &CnfFormula, variant: Variant, cap: Option<usize>) -> Result<VerifyReport> {
    let assignment = sat_bruteforce(f)?;
    let instance = variant.generate(f, 1.0)?;
    let witness = match variant {
        Variant::UniqueSubset => {
            let s = instance.points.as_ref().expect("point instance");
            let cap = cap.unwrap_or(UNIQUE_POINT_CAP);
            if s.len() > cap {
                return Err(Error::InstanceTooLarge { what: "point set", size: s.len(), cap });
            }
            BruteForce::new(SearchMode::Subset, true)
                .with_cap(Some(cap))
                .run(&instance.curve, s, instance.eps)?
                .map(|seq| seq.iter().map(|&i| s.get(i)).collect())
        }
        Variant::ImpreciseSubset => {
            let regions = instance.regions.as_ref().expect("region instance");
            let segs: Vec<Segment> = instance.curve.segments().collect();
            let near = |p: Point| segs.iter().map(|g| point_segment_distance(p, g)).fold(f64::INFINITY, f64::min);
            let options: Vec<Vec<Point>> = regions
                .iter()
                .map(|r| {
                    let inside: Vec<Point> = [r.a, r.b].into_iter().filter(|&q| near(q) <= instance.eps).collect();
                    match inside.as_slice() {
                        [a, b] if a != b => inside,
                        [a, ..] => vec![*a],
                        [] => vec![if near(r.a) <= near(r.b) { r.a } else { r.b }],
                    }
                })
                .collect();
            choose_and_match(&instance, &options, cap.unwrap_or(CHOICE_REGION_CAP))?
        }
        Variant::DiscreteCipsm => {
            let regions = instance.regions.as_ref().expect("region instance");
            let cap = cap.unwrap_or(DISCRETE_REGION_CAP);
            discrete_cipsm_nonunique_decide(&instance.curve, regions, instance.eps, false, Some(cap))?.map(|r| r.chosen)
        }
    };
    Ok(VerifyReport {
        variant,
        satisfiable: assignment.is_some(),
        assignment,
        feasible: witness.is_some(),
        witness,
        instance,
    })
}

/// Tries every combination of endpoint choices and runs the subset algorithm
/// on each resulting point set.
fn choose_and_match(instance: &GadgetInstance, options: &[Vec<Point>], cap: usize) -> Result<Option<Vec<Point>>> {
    let free: Vec<usize> = (0..options.len()).filter(|&r| options[r].len() == 2).collect();
    if free.len() > cap {
        return Err(Error::InstanceTooLarge { what: "regions with a choice", size: free.len(), cap });
    }
    for bits in 0u64..(1u64 << free.len()) {
        let mut pick = vec![0usize; options.len()];
        for (j, &r) in free.iter().enumerate() {
            pick[r] = (bits >> j & 1) as usize;
        }
        let s = PointSet::new(options.iter().zip(&pick).map(|(o, &c)| o[c]).collect())?;
        if let Some(w) = continuous_subset_decide(&instance.curve, &s, instance.eps) {
            return Ok(Some(w.q_vertices.iter().map(|&i| s.get(i)).collect()));
        }
    }
    Ok(None)
}
