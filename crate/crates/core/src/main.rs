use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use curve_match::allpoints::approx_allpoints;
use curve_match::cpsm::{
    continuous_subset_decide, continuous_subset_optimize, critical_eps_candidates, discrete_allpoints_decide, discrete_subset_decide,
    BruteForce, PointSet, SearchMode,
};
use curve_match::frechet::{continuous_frechet_decide, continuous_frechet_value};
use curve_match::imprecise::discrete_cipsm_nonunique_decide;
use curve_match::io::{parse_instance, InstanceFile};
use curve_match::optimize::minimize_monotone;
use curve_match::reductions::{verify_equivalence, CnfFormula, Variant};
use curve_match::svg::render_svg;
use curve_match::{Curve, Error, Point, Result};

#[derive(Parser)]
#[command(name = "curve-match", version, about = "Match polygonal curves to point sets under the Fréchet distance")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Instance file, or `-` for stdin.
    file: PathBuf,
    /// Distance threshold; defaults to the file's `eps`.
    #[arg(long)]
    eps: Option<f64>,
    /// Tolerance for optimization.
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Size cap for exhaustive solvers.
    #[arg(long)]
    cap: Option<usize>,
    /// Accepted for scripted runs; every command is deterministic.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Fréchet distance between the instance curve and a second curve.
    Frechet {
        #[arg(value_enum)]
        op: FrechetOp,
        #[command(flatten)]
        common: Common,
        /// File whose curve is compared; by default the instance points, in order.
        #[arg(long)]
        other: Option<PathBuf>,
    },
    /// Curve/point-set matching.
    Match {
        #[arg(value_enum)]
        op: MatchOp,
        #[command(flatten)]
        common: Common,
    },
    /// Approximation algorithms.
    Approx {
        #[arg(value_enum)]
        op: ApproxOp,
        #[command(flatten)]
        common: Common,
    },
    /// Exhaustive oracles; without `--eps` they minimize eps.
    Oracle {
        #[arg(value_enum)]
        op: OracleOp,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        unique: bool,
    },
    /// Imprecise points.
    Imprecise {
        #[arg(value_enum)]
        op: ImpreciseOp,
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        all_points: bool,
    },
    /// Emit a hardness instance for a DIMACS formula.
    Gen {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long, default_value_t = 1.0)]
        scale: f64,
    },
    /// Check a generated instance against satisfiability.
    Verify {
        #[arg(long, value_parser = parse_variant)]
        variant: Variant,
        #[arg(long)]
        formula: PathBuf,
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Draw an instance, optionally with a witness.
    Render {
        file: PathBuf,
        #[arg(long)]
        svg: PathBuf,
        /// A result file from another command, or a JSON list of points.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Cylinder radius; defaults to the file's `eps`.
        #[arg(long)]
        eps: Option<f64>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FrechetOp {
    Decide,
    Value,
}

#[derive(Clone, Copy, ValueEnum)]
enum MatchOp {
    DiscreteSubset,
    DiscreteAllpoints,
    Subset,
    SubsetOpt,
}

#[derive(Clone, Copy, ValueEnum)]
enum ApproxOp {
    Allpoints,
}

#[derive(Clone, Copy, ValueEnum)]
enum OracleOp {
    Subset,
    Allpoints,
}

#[derive(Clone, Copy, ValueEnum)]
enum ImpreciseOp {
    Decide,
}

fn parse_variant(s: &str) -> std::result::Result<Variant, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

/// What a command prints and how it exits.
struct Outcome {
    feasible: bool,
    body: Value,
}

fn result(feasible: bool, eps: Option<f64>, witness: Option<Vec<Point>>, certificate: Value) -> Outcome {
    let witness = witness.map(|w| w.iter().map(|p| json!([p.x, p.y])).collect::<Vec<_>>());
    Outcome { feasible, body: json!({ "feasible": feasible, "eps": eps, "witness": witness, "certificate": certificate }) }
}

fn read_text(path: &Path) -> Result<String> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

struct Loaded {
    file: InstanceFile,
    curve: Curve,
    points: PointSet,
}

fn load(common: &Common) -> Result<Loaded> {
    let file = parse_instance(&read_text(&common.file)?)?;
    let curve = file.curve()?;
    let points = file.point_set()?;
    Ok(Loaded { file, curve, points })
}

fn eps_of(common: &Common, file: &InstanceFile) -> Result<f64> {
    let eps = common.eps.or(file.eps).ok_or_else(|| Error::Validation { field: "eps".into(), message: "pass --eps or set it in the file".into() })?;
    if !eps.is_finite() || eps < 0.0 {
        return Err(Error::Validation { field: "eps".into(), message: format!("must be finite and non-negative, got {eps}") });
    }
    Ok(eps)
}

fn need_points(l: &Loaded) -> Result<()> {
    if l.points.is_empty() {
        return Err(Error::Validation { field: "points".into(), message: "this command needs a non-empty point set".into() });
    }
    Ok(())
}

fn vertices(seq: &[usize], s: &PointSet) -> Vec<Point> {
    seq.iter().map(|&i| s.get(i)).collect()
}

fn run(cli: Cli) -> Result<Outcome> {
    match cli.command {
        Command::Frechet { op, common, other } => {
            let l = load(&common)?;
            let q = match &other {
                Some(path) => parse_instance(&read_text(path)?)?.curve()?,
                None => {
                    need_points(&l)?;
                    Curve::new(l.points.points().to_vec())?
                }
            };
            match op {
                FrechetOp::Decide => {
                    let eps = eps_of(&common, &l.file)?;
                    Ok(result(continuous_frechet_decide(&l.curve, &q, eps), Some(eps), None, Value::Null))
                }
                FrechetOp::Value => Ok(result(true, Some(continuous_frechet_value(&l.curve, &q, common.tol)), None, Value::Null)),
            }
        }
        Command::Match { op, common } => {
            let l = load(&common)?;
            need_points(&l)?;
            let (p, s) = (&l.curve, &l.points);
            match op {
                MatchOp::SubsetOpt => {
                    let (eps, w) = continuous_subset_optimize(p, s, common.tol);
                    Ok(result(true, Some(eps), Some(vertices(&w.q_vertices, s)), Value::Null))
                }
                _ => {
                    let eps = eps_of(&common, &l.file)?;
                    let seq = match op {
                        MatchOp::DiscreteSubset => discrete_subset_decide(p, s, eps),
                        MatchOp::DiscreteAllpoints => discrete_allpoints_decide(p, s, eps),
                        _ => continuous_subset_decide(p, s, eps).map(|w| w.q_vertices),
                    };
                    Ok(result(seq.is_some(), Some(eps), seq.map(|q| vertices(&q, s)), Value::Null))
                }
            }
        }
        Command::Approx { op: ApproxOp::Allpoints, common } => {
            let l = load(&common)?;
            need_points(&l)?;
            let (eps, w, cert) = approx_allpoints(&l.curve, &l.points, common.tol)?;
            let cert = serde_json::to_value(cert).expect("plain struct");
            Ok(result(true, Some(eps), Some(vertices(&w.q_vertices, &l.points)), cert))
        }
        Command::Oracle { op, common, unique } => {
            let l = load(&common)?;
            need_points(&l)?;
            let (p, s) = (&l.curve, &l.points);
            let mode = match op {
                OracleOp::Subset => SearchMode::Subset,
                OracleOp::Allpoints => SearchMode::AllPoints,
            };
            let bf = BruteForce::new(mode, unique).with_cap(common.cap);
            if common.eps.is_some() || l.file.eps.is_some() {
                let eps = eps_of(&common, &l.file)?;
                let seq = bf.run(p, s, eps)?;
                return Ok(result(seq.is_some(), Some(eps), seq.map(|q| vertices(&q, s)), Value::Null));
            }
            let top = s.points().iter().flat_map(|a| p.vertices().iter().map(move |v| a.dist(*v))).fold(0.0, f64::max);
            // Surface a cap violation before searching.
            bf.run(p, s, -1.0)?;
            let mut failure = None;
            let best = minimize_monotone(critical_eps_candidates(p, s), top, common.tol, |e| match bf.run(p, s, e) {
                Ok(r) => r,
                Err(err) => {
                    failure = Some(err);
                    None
                }
            });
            if let Some(err) = failure {
                return Err(err);
            }
            match best {
                Some((eps, seq)) => Ok(result(true, Some(eps), Some(vertices(&seq, s)), Value::Null)),
                None => Ok(result(false, None, None, Value::Null)),
            }
        }
        Command::Imprecise { op: ImpreciseOp::Decide, common, all_points } => {
            let file = parse_instance(&read_text(&common.file)?)?;
            let eps = eps_of(&common, &file)?;
            let regions = file.imprecise_regions();
            let r = discrete_cipsm_nonunique_decide(&file.curve()?, &regions, eps, all_points, common.cap)?;
            Ok(result(r.is_some(), Some(eps), r.map(|r| r.chosen), Value::Null))
        }
        Command::Gen { variant, formula, scale } => {
            let f = CnfFormula::parse_dimacs(&read_text(&formula)?)?;
            let g = variant.generate(&f, scale)?;
            let text = InstanceFile::from_gadget(&g).emit();
            Ok(Outcome { feasible: true, body: Value::String(text) })
        }
        Command::Verify { variant, formula, cap } => {
            let f = CnfFormula::parse_dimacs(&read_text(&formula)?)?;
            let r = verify_equivalence(&f, variant, cap)?;
            let witness = r.witness.as_ref().map(|w| w.iter().map(|p| json!([p.x, p.y])).collect::<Vec<_>>());
            let mut body = json!({
                "variant": variant.name(),
                "report": r.summary(),
                "agrees": r.agrees(),
                "satisfiable": r.satisfiable,
                "feasible": r.feasible,
                "assignment": r.assignment,
                "witness": witness,
            });
            if !r.agrees() {
                let inst: Value = serde_json::from_str(&InstanceFile::from_gadget(&r.instance).emit()).expect("canonical JSON");
                body["instance"] = inst;
            }
            Ok(Outcome { feasible: r.agrees(), body })
        }
        Command::Render { file, svg, witness, eps } => {
            let mut inst = parse_instance(&read_text(&file)?)?;
            if eps.is_some() {
                inst.eps = eps;
            }
            let w = witness.map(|path| read_witness(&path)).transpose()?;
            std::fs::write(&svg, render_svg(&inst, w.as_deref()))?;
            Ok(result(true, inst.eps, w, Value::Null))
        }
    }
}

fn read_witness(path: &Path) -> Result<Vec<Point>> {
    let text = read_text(path)?;
    let v: Value =
        serde_json::from_str(&text).map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    let list = match &v {
        Value::Object(m) => m.get("witness").cloned().unwrap_or(Value::Null),
        other => other.clone(),
    };
    let pts: Vec<[f64; 2]> = serde_json::from_value(list)
        .map_err(|e| Error::Validation { field: "witness".into(), message: e.to_string() })?;
    Ok(pts.into_iter().map(|[x, y]| Point::new(x, y)).collect())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            match out.body {
                Value::String(text) => print!("{text}"),
                body => println!("{body}"),
            }
            ExitCode::from(if out.feasible { 0 } else { 1 })
        }
        Err(e) => {
            eprintln!("error: {e}");
            let code = match e {
                Error::InstanceTooLarge { .. } => 3,
                Error::Infeasible { .. } => 1,
                _ => 2,
            };
            ExitCode::from(code)
        }
    }
}
