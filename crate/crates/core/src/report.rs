//! Deterministic reports: an ordered record rendered either as indented text
//! or as JSON with the same fields in the same order. Rationals print as `p`
//! or `p/2`.

use std::fmt::Write as _;

use crate::arrangement::{
    delta_row, describe_pattern, table1, triple_delta, triple_point_indices, CellComplex, EventModel, EventType,
};
use crate::constructions::{format_pattern, outward, Direction, GadgetSpec, QLocalPair};
use crate::diagram::{Diagram, RegionId};
use crate::error::Result;
use crate::ids::DartId;
use crate::movie::{theorem37_check, triple_records, Movie, CHECK_BASES};
use crate::numbering::{alexander_numbering, classify_vanishing_triangle, dst1_omega3, vertex_indices};
use crate::omega3::{apply_omega3, triangle_outward_count};
use crate::rational::{self, Rational};
use crate::text::serialize_diagram;
use crate::verify::{summarize, VerificationCase};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(i64),
    Rat(Rational),
    Bool(bool),
    Text(String),
    List(Vec<Value>),
    Record(Report),
}

impl From<i64> for Value {
    fn from(v: i64) -> Self {
        Value::Int(v)
    }
}

impl From<usize> for Value {
    fn from(v: usize) -> Self {
        Value::Int(v as i64)
    }
}

impl From<Rational> for Value {
    fn from(v: Rational) -> Self {
        Value::Rat(v)
    }
}

impl From<bool> for Value {
    fn from(v: bool) -> Self {
        Value::Bool(v)
    }
}

impl From<&str> for Value {
    fn from(v: &str) -> Self {
        Value::Text(v.to_owned())
    }
}

impl From<String> for Value {
    fn from(v: String) -> Self {
        Value::Text(v)
    }
}

impl From<Report> for Value {
    fn from(v: Report) -> Self {
        Value::Record(v)
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub fields: Vec<(String, Value)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Text,
    Json,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn with(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.fields.push((key.to_owned(), v.into()));
        self
    }

    pub fn push(&mut self, key: &str, v: impl Into<Value>) {
        self.fields.push((key.to_owned(), v.into()));
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.fields.iter().find(|(k, _)| k == key).map(|(_, v)| v)
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        text_record(&mut out, self, 0);
        out
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        json_value(&mut out, &Value::Record(self.clone()), 0);
        out.push('\n');
        out
    }
}

fn scalar(v: &Value) -> Option<String> {
    match v {
        Value::Int(n) => Some(n.to_string()),
        Value::Rat(q) => Some(rational::format(q)),
        Value::Bool(b) => Some(b.to_string()),
        Value::Text(s) if !s.contains('\n') => Some(s.clone()),
        _ => None,
    }
}

fn text_record(out: &mut String, r: &Report, indent: usize) {
    for (k, v) in &r.fields {
        let pad = " ".repeat(indent);
        match scalar(v) {
            Some(s) => {
                let _ = writeln!(out, "{pad}{k}: {s}");
            }
            None => {
                let _ = writeln!(out, "{pad}{k}:");
                text_value(out, v, indent + 2);
            }
        }
    }
}

fn text_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent);
    match v {
        Value::Text(s) => {
            for line in s.lines() {
                let _ = writeln!(out, "{pad}{line}");
            }
        }
        Value::Record(r) => text_record(out, r, indent),
        Value::List(items) => {
            if items.is_empty() {
                let _ = writeln!(out, "{pad}(none)");
            }
            for item in items {
                match scalar(item) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        text_value(out, item, indent + 2);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar(other).unwrap_or_default());
        }
    }
}

fn json_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings serialize")
}

fn json_value(out: &mut String, v: &Value, indent: usize) {
    let pad = " ".repeat(indent + 2);
    match v {
        Value::Int(n) => out.push_str(&n.to_string()),
        Value::Rat(q) => out.push_str(&json_string(&rational::format(q))),
        Value::Bool(b) => out.push_str(&b.to_string()),
        Value::Text(s) => out.push_str(&json_string(s)),
        Value::List(items) => {
            if items.is_empty() {
                out.push_str("[]");
                return;
            }
            out.push_str("[\n");
            for (i, item) in items.iter().enumerate() {
                out.push_str(&pad);
                json_value(out, item, indent + 2);
                out.push_str(if i + 1 < items.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push(']');
        }
        Value::Record(r) => {
            if r.fields.is_empty() {
                out.push_str("{}");
                return;
            }
            out.push_str("{\n");
            for (i, (k, v)) in r.fields.iter().enumerate() {
                let _ = write!(out, "{pad}{}: ", json_string(k));
                json_value(out, v, indent + 2);
                out.push_str(if i + 1 < r.fields.len() { ",\n" } else { "\n" });
            }
            out.push_str(&" ".repeat(indent));
            out.push('}');
        }
    }
}

fn rats(values: &[Rational]) -> Value {
    Value::List(values.iter().map(|q| Value::Rat(*q)).collect())
}

fn ints(values: &[i64]) -> Value {
    Value::List(values.iter().map(|n| Value::Int(*n)).collect())
}

fn region_name(r: &RegionId) -> String {
    r.to_string()
}

// ---------------------------------------------------------------------------
// report builders

pub fn curve_st1_report(d: &Diagram, base: Rational) -> Result<Report> {
    let n = alexander_numbering(d, base)?;
    let idx = vertex_indices(d, &n)?;
    let regions =
        n.values.iter().map(|(r, v)| Report::new().with("region", region_name(r)).with("value", *v).into()).collect();
    let vertices =
        idx.iter().map(|(v, i)| Report::new().with("vertex", v.to_string()).with("index", *i).into()).collect();
    let st1: Rational = idx.values().sum();
    Ok(Report::new()
        .with("base", base)
        .with("regions", Value::List(regions))
        .with("vertices", Value::List(vertices))
        .with("st1", st1))
}

pub fn curve_move_report(d: &Diagram, face: &DartId, base: Rational) -> Result<Report> {
    let j = triangle_outward_count(d, face)?;
    let n = alexander_numbering(d, base)?;
    let class = classify_vanishing_triangle(d, &n, face)?;
    let dst1 = dst1_omega3(d, face, base)?;
    let (after, _) = apply_omega3(d, face)?;
    Ok(Report::new()
        .with("base", base)
        .with("face", face.to_string())
        .with("j", j as i64)
        .with("type", class.kind.to_string())
        .with("i", class.i)
        .with("dst1", dst1)
        .with("after", serialize_diagram(&after)))
}

fn triple_table(m: &Movie, base: Rational) -> Result<(Value, Rational)> {
    let recs = triple_records(m, base)?;
    let total = recs.iter().map(|r| r.index).sum();
    let list = recs
        .iter()
        .map(|r| {
            Report::new()
                .with("step", r.step)
                .with("vertices", r.vertices.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(" "))
                .with("sectors", rats(&r.sectors))
                .with("triangle_before", r.triangle_before)
                .with("triangle_after", r.triangle_after)
                .with("index", r.index)
                .into()
        })
        .collect();
    Ok((Value::List(list), total))
}

pub fn movie_st2_report(m: &Movie) -> Result<Report> {
    let base = rational::half(-3);
    let (triples, total) = triple_table(m, base)?;
    let mut r = Report::new()
        .with("closed", m.closed)
        .with("steps", m.steps.len())
        .with("ambient", base)
        .with("triple_points", triples);
    r.push(if m.closed { "st2" } else { "st2_local" }, total);
    Ok(r)
}

pub fn q_pair_report(spec: &GadgetSpec, pair: &QLocalPair) -> Result<Report> {
    let t = theorem37_check(&pair.before, &pair.after, &pair.induced, pair.direction)?;
    let base = Rational::new(CHECK_BASES[0].0, CHECK_BASES[0].1);
    let (before, sb) = triple_table(&pair.before, base)?;
    let (after, sa) = triple_table(&pair.after, base)?;
    Ok(Report::new()
        .with("event", "Q")
        .with("pattern", format_pattern(&spec.pattern))
        .with("direction", spec.direction.keyword())
        .with("j", pair.j)
        .with("ambient", base)
        .with("before", before)
        .with("st2_before", sb)
        .with("after", after)
        .with("st2_after", sa)
        .with("dst2", t.dst2)
        .with("dst1", t.dst1)
        .with("sgn", t.sgn)
        .with("expected_dst2", 2 * pair.j as i64 - 4)
        .with("theorem37_holds", t.holds))
}

pub fn complex_report(c: &CellComplex, base: Rational) -> Result<Report> {
    let counts: Vec<i64> = (0..4).map(|k| c.count(k) as i64).collect();
    let sigma: Vec<Rational> = (0..4).map(|k| c.sigma(k, base)).collect();
    let triples = triple_point_indices(c, base)?
        .into_iter()
        .map(|t| Report::new().with("signs", t.signs.to_string()).with("index", t.index).into())
        .collect();
    Ok(Report::new().with("cells", ints(&counts)).with("sigma", rats(&sigma)).with("triple_points", Value::List(triples)))
}

pub fn event_model_report(model: &EventModel, direction: Option<Direction>) -> Result<Report> {
    let base = rational::half(-3);
    let mut r = Report::new()
        .with("event", model.label.clone())
        .with("pattern", format_pattern(&model.pattern))
        .with("coorientation", describe_pattern(&model.pattern))
        .with("j", model.j)
        .with("ambient", base)
        .with("before", complex_report(&model.before, base)?)
        .with("after", complex_report(&model.after, base)?)
        .with("delta_sigma", rats(&delta_row(model, base)?));
    if model.kind == crate::arrangement::EventKind::Q {
        r.push("dst2", triple_delta(model, base)?);
        r.push("expected_dst2", 2 * outward(&model.pattern) as i64 - 4);
    }
    if let Some(d) = direction {
        r.push("direction", d.keyword());
    }
    Ok(r)
}

pub fn table_report(event: EventType, i: i64) -> Report {
    Report::new().with("event", event.label()).with("i", i).with("row", ints(&table1(event, i)))
}

pub fn verify_report(cases: &[VerificationCase]) -> Report {
    let records = cases
        .iter()
        .map(|c| {
            let paths = c
                .paths
                .iter()
                .map(|p| {
                    let mut r = Report::new().with("path", p.path.clone());
                    match (&p.value, &p.error) {
                        (Some(v), _) => r.push("value", *v),
                        (None, Some(e)) => r.push("error", e.clone()),
                        (None, None) => r.push("error", "no value"),
                    }
                    r.into()
                })
                .collect();
            let mut r = Report::new()
                .with("claim", c.claim.id())
                .with("parameters", c.parameters.clone())
                .with("expected", c.expected);
            match c.computed {
                Some(v) => r.push("computed", v),
                None => r.push("computed", "error"),
            }
            r.with("holds", c.holds).with("paths", Value::List(paths)).into()
        })
        .collect();
    let summary = summarize(cases)
        .into_iter()
        .map(|s| {
            Report::new()
                .with("claim", s.claim.id())
                .with("cases", s.cases)
                .with("holding", s.holding)
                .with("status", if s.cases == s.holding { "pass" } else { "FAIL" })
                .into()
        })
        .collect();
    Report::new()
        .with("cases", Value::List(records))
        .with("summary", Value::List(summary))
        .with("all_hold", cases.iter().all(|c| c.holds))
}

/// One line per claim: `claim  holding/cases  pass|FAIL`.
pub fn summary_table(cases: &[VerificationCase]) -> String {
    let mut out = String::new();
    for s in summarize(cases) {
        let status = if s.cases == s.holding { "pass" } else { "FAIL" };
        let _ = writeln!(out, "{:<18} {:>3}/{:<3} {status}", s.claim.id(), s.holding, s.cases);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::two_circles;

    #[test]
    fn text_and_json_mirror_each_other() {
        let r = Report::new()
            .with("a", rational::half(-3))
            .with("b", Value::List(vec![Value::Int(1), Report::new().with("c", true).into()]))
            .with("d", "x");
        assert_eq!(r.to_text(), "a: -3/2\nb:\n  - 1\n  -\n    c: true\nd: x\n");
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["a"], "-3/2");
        assert_eq!(v["b"][1]["c"], true);
        let keys: Vec<&str> = r.fields.iter().map(|(k, _)| k.as_str()).collect();
        let order: Vec<usize> = keys.iter().map(|k| r.to_json().find(&format!("\"{k}\"")).unwrap()).collect();
        assert!(order.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn st1_report_is_stable() {
        let d = two_circles();
        let a = curve_st1_report(&d, rational::int(-1)).unwrap();
        let b = curve_st1_report(&d.clone(), rational::int(-1)).unwrap();
        assert_eq!(a.to_text(), b.to_text());
        assert!(a.get("st1").is_some());
    }

    #[test]
    fn table_row() {
        assert_eq!(table_report(EventType::Q4, 0).to_text(), "event: Q4\ni: 0\nrow:\n  - -4\n  - -12\n  - -12\n  - -4\n");
    }
}
