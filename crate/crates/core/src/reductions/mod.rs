//! (3,B2)-SAT tooling and generators for the hardness constructions.

mod discrete;
mod unique;
mod verify;

pub use discrete::{gen_discrete_cipsm_instance, transfer_chain};
pub use unique::{corner_count, gen_imprecise_subset_instance, gen_unique_subset_instance, literal_boundary_deviation, spiral_pass_count};
pub use verify::{verify_equivalence, Variant, VerifyReport};

use std::fmt;

use crate::cpsm::PointSet;
use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::imprecise::ImpreciseRegion;

pub const SAT_VAR_CAP: usize = 24;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal {
    pub var: usize,
    pub positive: bool,
}

impl Literal {
    pub fn pos(var: usize) -> Self {
        Literal { var, positive: true }
    }

    pub fn neg(var: usize) -> Self {
        Literal { var, positive: false }
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        assignment[self.var] == self.positive
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let v = self.var as i64 + 1;
        write!(f, "{}", if self.positive { v } else { -v })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CnfFormula {
    pub num_vars: usize,
    pub clauses: Vec<Vec<Literal>>,
}

impl CnfFormula {
    pub fn new(num_vars: usize, clauses: Vec<Vec<Literal>>) -> Result<Self> {
        for c in &clauses {
            if let Some(l) = c.iter().find(|l| l.var >= num_vars) {
                return Err(Error::InvalidFormula(format!("literal {l} exceeds {num_vars} variables")));
            }
        }
        Ok(CnfFormula { num_vars, clauses })
    }

    /// Clauses of signed 1-based variables, as in DIMACS.
    pub fn from_signed(num_vars: usize, clauses: &[&[i64]]) -> Result<Self> {
        let clauses = clauses
            .iter()
            .map(|c| c.iter().map(|&x| signed_literal(x)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        CnfFormula::new(num_vars, clauses)
    }

    /// Parses DIMACS CNF: `c` comment lines, a `p cnf V C` header and
    /// zero-terminated clauses.
    pub fn parse_dimacs(text: &str) -> Result<Self> {
        let mut num_vars = None;
        let mut clauses = Vec::new();
        let mut current = Vec::new();
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('c') || line.starts_with('%') {
                continue;
            }
            if let Some(rest) = line.strip_prefix('p') {
                let parts: Vec<&str> = rest.split_whitespace().collect();
                if parts.len() != 3 || parts[0] != "cnf" {
                    return Err(Error::InvalidFormula(format!("line {}: bad header", lineno + 1)));
                }
                num_vars = Some(parts[1].parse::<usize>().map_err(|e| Error::InvalidFormula(format!("line {}: {e}", lineno + 1)))?);
                continue;
            }
            for tok in line.split_whitespace() {
                let x: i64 = tok.parse().map_err(|e| Error::InvalidFormula(format!("line {}: {tok}: {e}", lineno + 1)))?;
                if x == 0 {
                    clauses.push(std::mem::take(&mut current));
                } else {
                    current.push(signed_literal(x)?);
                }
            }
        }
        if !current.is_empty() {
            clauses.push(current);
        }
        let num_vars = num_vars.ok_or_else(|| Error::InvalidFormula("missing `p cnf` header".into()))?;
        CnfFormula::new(num_vars, clauses)
    }

    pub fn to_dimacs(&self) -> String {
        let mut out = format!("p cnf {} {}\n", self.num_vars, self.clauses.len());
        for c in &self.clauses {
            for l in c {
                out.push_str(&format!("{l} "));
            }
            out.push_str("0\n");
        }
        out
    }

    pub fn eval(&self, assignment: &[bool]) -> bool {
        self.clauses.iter().all(|c| c.iter().any(|l| l.eval(assignment)))
    }

    /// The example formula (x∨y∨z)(x̄∨y∨z̄)(x̄∨ȳ∨z)(x∨ȳ∨z̄).
    pub fn example() -> Self {
        CnfFormula::from_signed(3, &[&[1, 2, 3], &[-1, 2, -3], &[-1, -2, 3], &[1, -2, -3]]).unwrap()
    }
}

fn signed_literal(x: i64) -> Result<Literal> {
    if x == 0 {
        return Err(Error::InvalidFormula("literal 0".into()));
    }
    Ok(Literal { var: (x.unsigned_abs() - 1) as usize, positive: x > 0 })
}

/// Every clause has three literals and every literal occurs exactly twice.
pub fn validate_3b2(f: &CnfFormula) -> bool {
    if f.clauses.iter().any(|c| c.len() != 3) {
        return false;
    }
    let mut counts = vec![[0usize; 2]; f.num_vars];
    for l in f.clauses.iter().flatten() {
        counts[l.var][l.positive as usize] += 1;
    }
    counts.iter().all(|c| c[0] == 2 && c[1] == 2)
}

/// Exhaustive satisfiability check with a satisfying assignment.
pub fn sat_bruteforce(f: &CnfFormula) -> Result<Option<Vec<bool>>> {
    if f.num_vars > SAT_VAR_CAP {
        return Err(Error::InstanceTooLarge { what: "variable count", size: f.num_vars, cap: SAT_VAR_CAP });
    }
    for bits in 0u32..(1u32 << f.num_vars) {
        let a: Vec<bool> = (0..f.num_vars).map(|v| bits >> v & 1 == 1).collect();
        if f.eval(&a) {
            return Ok(Some(a));
        }
    }
    Ok(None)
}

/// All (3,B2) formulas on `num_vars` variables up to clause and literal
/// order, in a fixed order.
pub fn enumerate_3b2(num_vars: usize) -> Vec<CnfFormula> {
    let lits: Vec<Literal> = (0..num_vars).flat_map(|v| [Literal::pos(v), Literal::neg(v)]).collect();
    let occurrences = 4 * num_vars;
    if occurrences % 3 != 0 {
        return Vec::new();
    }
    // Candidate clauses: sorted multisets of three literals.
    let mut clauses = Vec::new();
    for a in 0..lits.len() {
        for b in a..lits.len() {
            for c in b..lits.len() {
                let cl = vec![lits[a], lits[b], lits[c]];
                if cl.iter().all(|l| cl.iter().filter(|m| *m == l).count() <= 2) {
                    clauses.push(cl);
                }
            }
        }
    }
    let mut out = Vec::new();
    let mut remaining = vec![2usize; lits.len()];
    let mut chosen = Vec::new();
    fn rec(
        start: usize,
        left: usize,
        clauses: &[Vec<Literal>],
        lits: &[Literal],
        remaining: &mut [usize],
        chosen: &mut Vec<usize>,
        out: &mut Vec<CnfFormula>,
        num_vars: usize,
    ) {
        if left == 0 {
            if remaining.iter().all(|&r| r == 0) {
                let cl = chosen.iter().map(|&i| clauses[i].clone()).collect();
                out.push(CnfFormula { num_vars, clauses: cl });
            }
            return;
        }
        for i in start..clauses.len() {
            let idx: Vec<usize> = clauses[i].iter().map(|l| lits.iter().position(|m| m == l).unwrap()).collect();
            if idx.iter().all(|&j| remaining[j] >= idx.iter().filter(|&&k| k == j).count()) {
                for &j in &idx {
                    remaining[j] -= 1;
                }
                chosen.push(i);
                rec(i, left - 1, clauses, lits, remaining, chosen, out, num_vars);
                chosen.pop();
                for &j in &idx {
                    remaining[j] += 1;
                }
            }
        }
    }
    rec(0, occurrences / 3, &clauses, &lits, &mut remaining, &mut chosen, &mut out, num_vars);
    out
}

/// Role of one point or region in a generated instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Role {
    LiteralPoint,
    SwitchPoint,
    Corner,
    ClauseAnchor,
    VariableRing,
    Transfer,
    Junction,
}

impl Role {
    pub fn tag(&self) -> &'static str {
        match self {
            Role::LiteralPoint => "literal",
            Role::SwitchPoint => "switch",
            Role::Corner => "corner",
            Role::ClauseAnchor => "clause-anchor",
            Role::VariableRing => "variable-ring",
            Role::Transfer => "transfer",
            Role::Junction => "junction",
        }
    }
}

/// A generated instance: points for the precise construction, regions for
/// the imprecise ones.
#[derive(Debug, Clone)]
pub struct GadgetInstance {
    pub curve: Curve,
    pub points: Option<PointSet>,
    pub regions: Option<Vec<ImpreciseRegion>>,
    pub eps: f64,
    pub scale: f64,
    pub annotations: Vec<String>,
}

impl GadgetInstance {
    pub fn element_count(&self) -> usize {
        self.points.as_ref().map_or(0, |p| p.len()) + self.regions.as_ref().map_or(0, |r| r.len())
    }
}

/// True iff no two non-adjacent segments of the curve meet.
pub fn is_simple(curve: &Curve) -> bool {
    let segs: Vec<_> = curve.segments().collect();
    for i in 0..segs.len() {
        for j in i + 2..segs.len() {
            if crate::geom::segments_intersect(&segs[i], &segs[j]) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_formula_is_3b2_and_satisfiable() {
        let f = CnfFormula::example();
        assert!(validate_3b2(&f));
        let a = sat_bruteforce(&f).unwrap().unwrap();
        assert!(f.eval(&a));
        assert!(f.eval(&[true, true, true]));
    }

    #[test]
    fn validation() {
        let f = CnfFormula::from_signed(1, &[&[1, 1, 1]]).unwrap();
        assert!(!validate_3b2(&f));
        assert!(validate_3b2(&CnfFormula { num_vars: 0, clauses: vec![] }));
        assert!(sat_bruteforce(&CnfFormula { num_vars: 0, clauses: vec![] }).unwrap().is_some());
    }

    #[test]
    fn unsat_with_duplicates() {
        let f = CnfFormula::from_signed(1, &[&[1, 1, 1], &[-1, -1, -1]]).unwrap();
        assert!(sat_bruteforce(&f).unwrap().is_none());
    }

    #[test]
    fn dimacs_round_trip() {
        let f = CnfFormula::example();
        assert_eq!(CnfFormula::parse_dimacs(&f.to_dimacs()).unwrap(), f);
        assert!(CnfFormula::parse_dimacs("1 2 0").is_err());
        assert!(CnfFormula::parse_dimacs("p cnf 1 1\n2 0").is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert!(enumerate_3b2(2).is_empty());
        let all = enumerate_3b2(3);
        assert_eq!(all.len(), 715);
        assert!(all.iter().all(validate_3b2));
        let unsat = all.iter().filter(|f| sat_bruteforce(f).unwrap().is_none()).count();
        assert_eq!(unsat, 6);
    }
}
