//! The JSON instance format. Parsing is strict; emission is canonical, with
//! sorted keys and floats printed to 17 significant digits, so that
//! `emit(parse(emit(x))) == emit(x)` byte for byte.

use serde::Deserialize;
use serde_json::Value;

use crate::cpsm::PointSet;
use crate::error::{Error, Result};
use crate::frechet::Curve;
use crate::geom::Point;
use crate::imprecise::ImpreciseRegion;
use crate::reductions::GadgetInstance;

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceFile {
    pub curve: Vec<[f64; 2]>,
    #[serde(default)]
    pub points: Option<Vec<[f64; 2]>>,
    #[serde(default)]
    pub regions: Option<Vec<RegionEntry>>,
    #[serde(default)]
    pub eps: Option<f64>,
    #[serde(default)]
    pub annotations: Option<Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum RegionEntry {
    Segment { a: [f64; 2], b: [f64; 2] },
}

fn validation(field: &str, message: impl Into<String>) -> Error {
    Error::Validation { field: field.to_string(), message: message.into() }
}

fn point(xy: [f64; 2]) -> Point {
    Point::new(xy[0], xy[1])
}

fn xy(p: Point) -> [f64; 2] {
    [p.x, p.y]
}

pub fn parse_instance(text: &str) -> Result<InstanceFile> {
    let file: InstanceFile = serde_json::from_str(text)
        .map_err(|e| Error::Parse { line: e.line(), column: e.column(), message: e.to_string() })?;
    file.validate()?;
    Ok(file)
}

impl InstanceFile {
    pub fn validate(&self) -> Result<()> {
        if self.curve.is_empty() {
            return Err(validation("curve", "must have at least one vertex"));
        }
        let finite = |v: &[[f64; 2]]| v.iter().flatten().all(|c| c.is_finite());
        if !finite(&self.curve) {
            return Err(validation("curve", "coordinates must be finite"));
        }
        if self.points.is_some() && self.regions.is_some() {
            return Err(validation("regions", "an instance has points or regions, not both"));
        }
        if self.points.as_ref().is_some_and(|p| !finite(p)) {
            return Err(validation("points", "coordinates must be finite"));
        }
        if let Some(regions) = &self.regions {
            if regions.iter().any(|RegionEntry::Segment { a, b }| !finite(&[*a, *b])) {
                return Err(validation("regions", "coordinates must be finite"));
            }
        }
        if let Some(eps) = self.eps {
            if !eps.is_finite() || eps < 0.0 {
                return Err(validation("eps", format!("must be finite and non-negative, got {eps}")));
            }
        }
        if let Some(tags) = &self.annotations {
            let count = self.element_count();
            if tags.len() != count {
                return Err(validation("annotations", format!("{} tags for {count} elements", tags.len())));
            }
        }
        Ok(())
    }

    pub fn element_count(&self) -> usize {
        self.points.as_ref().map_or(0, Vec::len) + self.regions.as_ref().map_or(0, Vec::len)
    }

    pub fn curve(&self) -> Result<Curve> {
        Curve::new(self.curve.iter().copied().map(point).collect())
    }

    /// The points, or an empty set when the instance has none.
    pub fn point_set(&self) -> Result<PointSet> {
        PointSet::new(self.points.iter().flatten().copied().map(point).collect())
    }

    /// The regions; precise points count as degenerate regions.
    pub fn imprecise_regions(&self) -> Vec<ImpreciseRegion> {
        match (&self.regions, &self.points) {
            (Some(r), _) => r.iter().map(|RegionEntry::Segment { a, b }| ImpreciseRegion { a: point(*a), b: point(*b) }).collect(),
            (None, Some(p)) => p.iter().map(|&q| ImpreciseRegion::point(point(q))).collect(),
            (None, None) => Vec::new(),
        }
    }

    pub fn from_gadget(g: &GadgetInstance) -> Self {
        InstanceFile {
            curve: g.curve.vertices().iter().copied().map(xy).collect(),
            points: g.points.as_ref().map(|s| s.points().iter().copied().map(xy).collect()),
            regions: g.regions.as_ref().map(|r| r.iter().map(|r| RegionEntry::Segment { a: xy(r.a), b: xy(r.b) }).collect()),
            eps: Some(g.eps),
            annotations: Some(g.annotations.clone()),
        }
    }

    /// Canonical JSON text, ending in a newline.
    pub fn emit(&self) -> String {
        let pair = |p: &[f64; 2]| Value::Array(vec![num(p[0]), num(p[1])]);
        let mut obj = serde_json::Map::new();
        if let Some(tags) = &self.annotations {
            obj.insert("annotations".into(), tags.iter().cloned().map(Value::String).collect());
        }
        obj.insert("curve".into(), self.curve.iter().map(pair).collect());
        if let Some(eps) = self.eps {
            obj.insert("eps".into(), num(eps));
        }
        if let Some(points) = &self.points {
            obj.insert("points".into(), points.iter().map(pair).collect());
        }
        if let Some(regions) = &self.regions {
            let entries = regions.iter().map(|RegionEntry::Segment { a, b }| {
                let mut m = serde_json::Map::new();
                m.insert("a".into(), pair(a));
                m.insert("b".into(), pair(b));
                m.insert("type".into(), Value::String("segment".into()));
                Value::Object(m)
            });
            obj.insert("regions".into(), entries.collect());
        }
        let mut out = String::new();
        write_value(&Value::Object(obj), &mut out);
        out.push('\n');
        out
    }
}

/// Numbers are carried as raw strings until written.
fn num(x: f64) -> Value {
    Value::String(format!("\u{0}{}", format_float(x)))
}

/// 17 significant digits, trailing zeros dropped, exponent form outside
/// [1e-5, 1e17).
pub fn format_float(x: f64) -> String {
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.16e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent form");
    let exp: i32 = exp.parse().expect("integer exponent");
    let negative = mantissa.starts_with('-');
    let digits: String = mantissa.chars().filter(char::is_ascii_digit).collect();
    let digits = digits.trim_end_matches('0');
    let sign = if negative { "-" } else { "" };
    if !(-5..17).contains(&exp) {
        let (head, tail) = digits.split_at(1);
        return if tail.is_empty() { format!("{sign}{head}e{exp}") } else { format!("{sign}{head}.{tail}e{exp}") };
    }
    let body = if exp < 0 {
        format!("0.{}{digits}", "0".repeat((-exp - 1) as usize))
    } else {
        let int_len = exp as usize + 1;
        if digits.len() <= int_len {
            format!("{digits}{}", "0".repeat(int_len - digits.len()))
        } else {
            format!("{}.{}", &digits[..int_len], &digits[int_len..])
        }
    };
    format!("{sign}{body}")
}

fn write_value(v: &Value, out: &mut String) {
    match v {
        Value::String(s) if s.starts_with('\u{0}') => out.push_str(&s[1..]),
        Value::Array(items) => {
            out.push('[');
            for (i, item) in items.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                write_value(item, out);
            }
            out.push(']');
        }
        Value::Object(map) => {
            out.push('{');
            for (i, (k, item)) in map.iter().enumerate() {
                if i > 0 {
                    out.push(',');
                }
                out.push_str(&Value::String(k.clone()).to_string());
                out.push(':');
                write_value(item, out);
            }
            out.push('}');
        }
        other => out.push_str(&other.to_string()),
    }
}

/// The tightness example as an instance file, without the perturbation.
pub fn tightness_fixture() -> InstanceFile {
    let (p, s) = crate::allpoints::tightness_instance(1.0, 0.0);
    InstanceFile {
        curve: p.vertices().iter().copied().map(xy).collect(),
        points: Some(s.points().iter().copied().map(xy).collect()),
        regions: None,
        eps: None,
        annotations: None,
    }
}
