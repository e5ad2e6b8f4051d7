//! Cross-checks of every claim by at least two computation paths, and an
//! independent region-numbering oracle.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::arrangement::{
    delta_sigma, event_model, event_model_of, q_outward_after, reversed, table1, triple_delta, EventKind, EventType,
};
use crate::constructions::{
    all_patterns, even_realization, format_pattern, outward, q3_braid, q_local_pair, triangle_gadget, Ambient,
    Direction, GadgetSpec, Orientation,
};
use crate::diagram::{Coorient, Diagram, RegionId, Side};
use crate::error::{Error, Result};
use crate::movie::{dst2_pair, run, theorem37_check};
use crate::numbering::{alexander_numbering, dst1_omega3, vertex_indices, RegionNumbering};
use crate::rational::{self, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Claim {
    #[serde(rename = "lemma-st1")]
    LemmaSt1,
    #[serde(rename = "thm-3-7")]
    Thm37,
    #[serde(rename = "thm-3-8")]
    Thm38,
    #[serde(rename = "table1-Q")]
    Table1Q,
    #[serde(rename = "table1-H")]
    Table1H,
    #[serde(rename = "table1-diffs")]
    Table1Diffs,
    #[serde(rename = "example-5-1")]
    Example51,
    #[serde(rename = "remark-5-2")]
    Remark52,
    #[serde(rename = "numbering-oracle")]
    NumberingOracle,
}

impl Claim {
    pub const ALL: [Claim; 9] = [
        Claim::LemmaSt1,
        Claim::Thm37,
        Claim::Thm38,
        Claim::Table1Q,
        Claim::Table1H,
        Claim::Table1Diffs,
        Claim::Example51,
        Claim::Remark52,
        Claim::NumberingOracle,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::LemmaSt1 => "lemma-st1",
            Claim::Thm37 => "thm-3-7",
            Claim::Thm38 => "thm-3-8",
            Claim::Table1Q => "table1-Q",
            Claim::Table1H => "table1-H",
            Claim::Table1Diffs => "table1-diffs",
            Claim::Example51 => "example-5-1",
            Claim::Remark52 => "remark-5-2",
            Claim::NumberingOracle => "numbering-oracle",
        }
    }

    pub fn parse(s: &str) -> Option<Claim> {
        Claim::ALL.into_iter().find(|c| c.id() == s)
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// One computation path of a case.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathValue {
    pub path: String,
    pub value: Option<Rational>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerificationCase {
    pub claim: Claim,
    pub parameters: String,
    pub expected: Rational,
    /// The first path value that differs from `expected`, or the common value.
    pub computed: Option<Rational>,
    pub paths: Vec<PathValue>,
    pub holds: bool,
}

impl VerificationCase {
    fn new(claim: Claim, parameters: String, expected: Rational, paths: Vec<PathValue>) -> Self {
        let computed = match paths.iter().find(|p| p.value != Some(expected)) {
            Some(p) => p.value,
            None => paths.first().and_then(|p| p.value),
        };
        let holds = !paths.is_empty() && computed == Some(expected);
        VerificationCase { claim, parameters, expected, computed, paths, holds }
    }
}

fn path(name: impl Into<String>, r: Result<Rational>) -> PathValue {
    match r {
        Ok(v) => PathValue { path: name.into(), value: Some(v), error: None },
        Err(e) => PathValue { path: name.into(), value: None, error: Some(e.to_string()) },
    }
}

fn int(n: i64) -> Rational {
    rational::int(n)
}

// ---------------------------------------------------------------------------
// numbering oracle

/// Region values from signed crossing counts along the paths of a dual
/// spanning tree rooted at the outside, checked against every other dual
/// edge.
pub fn numbering_oracle(d: &Diagram, base: Rational) -> Result<RegionNumbering> {
    d.validate().into_result()?;
    let topo = d.topology()?;
    // (from, to, +1 when crossing from `from` to `to` follows the arrow)
    let mut crossings: Vec<(RegionId, RegionId, i64, String)> = Vec::new();
    for (x, y) in d.mates.iter() {
        if x >= y {
            continue;
        }
        let left = topo.region_of_dart(d, x)?;
        let right = topo.region_of_dart(d, y)?;
        let step = if d.sides[x] == Side::Left { 1 } else { -1 };
        crossings.push((right, left, step, format!("edge {x}")));
    }
    for (c, fc) in d.circles.iter() {
        let out = topo.region_outside_circle(d, c)?;
        let step = if fc.coorient == Coorient::Inward { 1 } else { -1 };
        crossings.push((out, RegionId::Inner(c.clone()), step, format!("circle {c}")));
    }
    let mut incident: BTreeMap<&RegionId, Vec<usize>> = BTreeMap::new();
    for (i, (a, b, _, _)) in crossings.iter().enumerate() {
        incident.entry(a).or_default().push(i);
        incident.entry(b).or_default().push(i);
    }
    // depth-first tree with parent pointers
    let mut parent: BTreeMap<RegionId, Option<(RegionId, i64, usize)>> = BTreeMap::new();
    parent.insert(RegionId::Ambient, None);
    let mut stack = vec![RegionId::Ambient];
    while let Some(r) = stack.pop() {
        for &i in incident.get(&r).map(Vec::as_slice).unwrap_or(&[]) {
            let (a, b, step, _) = &crossings[i];
            let (other, s) = if *a == r { (b, *step) } else { (a, -*step) };
            if !parent.contains_key(other) {
                parent.insert(other.clone(), Some((r.clone(), s, i)));
                stack.push(other.clone());
            }
        }
    }
    let value_of = |r: &RegionId| -> Rational {
        let mut total = base;
        let mut cur = r.clone();
        while let Some(Some((p, s, _))) = parent.get(&cur) {
            total += int(*s);
            cur = p.clone();
        }
        total
    };
    let mut values = BTreeMap::new();
    for r in topo.regions(d)? {
        if !parent.contains_key(&r) {
            return Err(Error::Internal(format!("oracle: region {r} is not reachable from the outside")));
        }
        values.insert(r.clone(), value_of(&r));
    }
    values.insert(RegionId::Ambient, base);
    let tree: Vec<usize> = parent.values().flatten().map(|(_, _, i)| *i).collect();
    for (i, (a, b, step, label)) in crossings.iter().enumerate() {
        if tree.contains(&i) {
            continue;
        }
        let (va, vb) = (value_of(a), value_of(b));
        if vb - va != int(*step) {
            return Err(Error::Consistency {
                region: format!("{b} (across {label} from {a})"),
                first: rational::format(&vb),
                second: rational::format(&(va + int(*step))),
            });
        }
    }
    Ok(RegionNumbering { base, values })
}

/// Regions on which the oracle and the primary numbering disagree.
pub fn numbering_disagreements(d: &Diagram, base: Rational) -> Result<Vec<RegionId>> {
    let a = alexander_numbering(d, base)?;
    let b = numbering_oracle(d, base)?;
    let mut out: Vec<RegionId> = a.values.iter().filter(|(r, v)| b.values.get(*r) != Some(*v)).map(|(r, _)| r.clone()).collect();
    out.extend(b.values.keys().filter(|r| !a.values.contains_key(*r)).cloned());
    Ok(out)
}

fn st1_with(d: &Diagram, n: &RegionNumbering) -> Result<Rational> {
    Ok(vertex_indices(d, n)?.values().sum())
}

// ---------------------------------------------------------------------------
// suites

pub const DST1_BASES: [(i64, i64); 4] = [(-3, 2), (-1, 1), (0, 1), (7, 2)];

fn lemma_st1() -> Vec<VerificationCase> {
    let mut out = Vec::new();
    for amb in Ambient::ALL {
        for p in all_patterns(3) {
            let j = outward(&p) as i64;
            let params = format!("pattern={} ambient={}", format_pattern(&p), amb.keyword());
            let spec = GadgetSpec::omega3(p.clone().try_into().expect("3"), amb);
            let mut paths = Vec::new();
            match triangle_gadget(&spec) {
                Ok(g) => {
                    for (n, dd) in DST1_BASES {
                        let base = Rational::new(n, dd);
                        paths.push(path(
                            format!("dst1 numbering base={}", rational::format(&base)),
                            dst1_omega3(&g.before, &g.face, base),
                        ));
                    }
                    let oracle = (|| {
                        let b = numbering_oracle(&g.before, int(-1))?;
                        let a = numbering_oracle(&g.after, int(-1))?;
                        Ok(st1_with(&g.after, &a)? - st1_with(&g.before, &b)?)
                    })();
                    paths.push(path("st1 difference via oracle", oracle));
                }
                Err(e) => paths.push(path("gadget", Err(e))),
            }
            out.push(VerificationCase::new(Claim::LemmaSt1, params, int(2 * j - 3), paths));
        }
    }
    out
}

fn directions(p: &[Orientation]) -> Vec<Direction> {
    [Direction::Upward, Direction::Downward]
        .into_iter()
        .filter(|d| match d {
            Direction::Upward => p.contains(&Orientation::In),
            Direction::Downward => p.contains(&Orientation::Out),
        })
        .collect()
}

fn thm38() -> Vec<VerificationCase> {
    let mut out = Vec::new();
    for p in all_patterns(4) {
        let j = outward(&p) as i64;
        let params = format!("pattern={}", format_pattern(&p));
        let mut paths = Vec::new();
        let model = event_model(EventKind::Q, &p);
        match &model {
            Ok(m) => {
                for (n, d) in [(-3, 2), (-1, 2), (7, 2)] {
                    let base = Rational::new(n, d);
                    paths.push(path(format!("arrangement base={}", rational::format(&base)), triple_delta(m, base)));
                }
            }
            Err(e) => paths.push(path("arrangement", Err(e.clone()))),
        }
        for dir in directions(&p) {
            let spec = GadgetSpec::q(p.clone().try_into().expect("4"), dir);
            let r = q_local_pair(&spec).and_then(|q| dst2_pair(&q.before, &q.after));
            paths.push(path(format!("movie {}", dir.keyword()), r));
        }
        out.push(VerificationCase::new(Claim::Thm38, params.clone(), int(2 * j - 4), paths));
        // the same event backwards: j becomes 4 − j
        if let Ok(m) = &model {
            let back = reversed(m);
            let mut paths = vec![path("arrangement reversed", triple_delta(&back, rational::half(-3)))];
            paths.push(path(
                "outward count after, as 2j-4",
                q_outward_after(m).map(|ja| int(2 * ja as i64 - 4)),
            ));
            out.push(VerificationCase::new(Claim::Thm38, format!("{params} reversed"), int(2 * (4 - j) - 4), paths));
        }
    }
    out
}

fn thm37() -> Vec<VerificationCase> {
    let mut out = Vec::new();
    for p in all_patterns(4) {
        let j = outward(&p) as i64;
        for dir in directions(&p) {
            let params = format!("pattern={} direction={}", format_pattern(&p), dir.keyword());
            let spec = GadgetSpec::q(p.clone().try_into().expect("4"), dir);
            let paths = match q_local_pair(&spec).and_then(|q| theorem37_check(&q.before, &q.after, &q.induced, dir)) {
                Ok(t) => vec![
                    path("dst2 movie", Ok(t.dst2)),
                    path(format!("dst1 {} + sgn {}", rational::format(&t.dst1), t.sgn), Ok(t.dst1 + int(t.sgn))),
                ],
                Err(e) => vec![path("theorem 3.7 check", Err(e))],
            };
            out.push(VerificationCase::new(Claim::Thm37, params, int(2 * j - 4), paths));
        }
    }
    out
}

fn table_cases(claim: Claim, events: &[EventType]) -> Vec<VerificationCase> {
    let mut out = Vec::new();
    for &e in events {
        let model = event_model_of(e);
        let row = table1(e, 0);
        for k in 0..4 {
            let params = format!("event={} k={k}", e.label());
            let paths = match &model {
                Ok(m) => [(-3, 2), (1, 2)]
                    .into_iter()
                    .map(|(n, d)| {
                        let base = Rational::new(n, d);
                        path(format!("delta_sigma base={}", rational::format(&base)), delta_sigma(m, k, base))
                    })
                    .collect(),
                Err(err) => vec![path("model", Err(err.clone()))],
            };
            out.push(VerificationCase::new(claim, params, int(row[k]), paths));
        }
    }
    out
}

fn table_diffs() -> Vec<VerificationCase> {
    let mut out = Vec::new();
    let chains: [&[EventType]; 2] = [
        &[EventType::E0, EventType::E1, EventType::E2],
        &[EventType::T0, EventType::T1, EventType::T2, EventType::T3],
    ];
    for chain in chains {
        let models: Vec<Result<_>> = chain.iter().map(|e| event_model_of(*e)).collect();
        for w in 0..chain.len() - 1 {
            let (lo, hi) = (chain[w], chain[w + 1]);
            for k in 0..4 {
                let expected = int(table1(hi, 0)[k] - table1(lo, 0)[k]);
                let params = format!("flip={}->{} k={k}", lo.label(), hi.label());
                let paths = [(-3, 2), (1, 2)]
                    .into_iter()
                    .map(|(n, d)| {
                        let base = Rational::new(n, d);
                        let r = match (&models[w], &models[w + 1]) {
                            (Ok(a), Ok(b)) => delta_sigma(b, k, base).and_then(|y| Ok(y - delta_sigma(a, k, base)?)),
                            (Err(e), _) | (_, Err(e)) => Err(e.clone()),
                        };
                        path(format!("difference base={}", rational::format(&base)), r)
                    })
                    .collect();
                out.push(VerificationCase::new(Claim::Table1Diffs, params, expected, paths));
            }
        }
    }
    out
}

fn example51() -> Vec<VerificationCase> {
    let mut out = Vec::new();
    for k in 1..=5usize {
        for rev in [false, true] {
            let expected = int(if rev { 2 * k as i64 } else { -2 * k as i64 });
            let r = q3_braid(k, rev).and_then(|b| dst2_pair(&b.before, &b.after));
            out.push(VerificationCase::new(
                Claim::Example51,
                format!("k={k} reversed={rev}"),
                expected,
                vec![path("st2(after) - st2(before)", r)],
            ));
        }
    }
    out
}

fn remark52() -> Vec<VerificationCase> {
    let mut out = Vec::new();
    for n in (-6..=6).step_by(2) {
        let r = even_realization(n).and_then(|steps| {
            let mut total = int(0);
            for s in &steps {
                total += dst2_pair(&s.before, &s.after)?;
            }
            Ok(total)
        });
        out.push(VerificationCase::new(Claim::Remark52, format!("n={n:+}"), int(n), vec![path("sum of steps", r)]));
    }
    out
}

/// Every diagram the generators produce, for the oracle comparison.
fn corpus() -> Vec<(String, Result<Diagram>)> {
    let mut out = vec![("empty".to_owned(), Ok(Diagram::new()))];
    for amb in Ambient::ALL {
        for p in all_patterns(3) {
            let name = format!("gadget {} {}", format_pattern(&p), amb.keyword());
            match triangle_gadget(&GadgetSpec::omega3(p.clone().try_into().expect("3"), amb)) {
                Ok(g) => {
                    out.push((format!("{name} before"), Ok(g.before)));
                    out.push((format!("{name} after"), Ok(g.after)));
                }
                Err(e) => out.push((name, Err(e))),
            }
        }
    }
    let q = q_local_pair(&GadgetSpec::q(
        [Orientation::Out, Orientation::In, Orientation::In, Orientation::In],
        Direction::Upward,
    ));
    match q {
        Ok(q) => {
            out.push(("induced site".to_owned(), Ok(q.induced.slice.clone())));
            for (which, m) in [("before", &q.before), ("after", &q.after)] {
                match run(m) {
                    Ok(slices) => {
                        for (i, s) in slices.into_iter().enumerate() {
                            out.push((format!("Q3 {which} slice {i}"), Ok(s)));
                        }
                    }
                    Err(e) => out.push((format!("Q3 {which}"), Err(e))),
                }
            }
        }
        Err(e) => out.push(("Q3 pair".to_owned(), Err(e))),
    }
    match q3_braid(1, false).and_then(|b| run(&b.before)) {
        Ok(slices) => {
            for (i, s) in slices.into_iter().enumerate() {
                out.push((format!("braid slice {i:03}"), Ok(s)));
            }
        }
        Err(e) => out.push(("braid".to_owned(), Err(e))),
    }
    out
}

fn numbering_cases() -> Vec<VerificationCase> {
    corpus()
        .into_iter()
        .map(|(name, d)| {
            let r = d.and_then(|d| numbering_disagreements(&d, rational::half(-3))).map(|v| int(v.len() as i64));
            VerificationCase::new(Claim::NumberingOracle, name, int(0), vec![path("regions in disagreement", r)])
        })
        .collect()
}

pub fn run_claim(claim: Claim) -> Vec<VerificationCase> {
    let mut cases = match claim {
        Claim::LemmaSt1 => lemma_st1(),
        Claim::Thm37 => thm37(),
        Claim::Thm38 => thm38(),
        Claim::Table1Q => table_cases(claim, &[EventType::Q4, EventType::Q3, EventType::Q2]),
        Claim::Table1H => table_cases(claim, &[EventType::HPlus, EventType::HMinus]),
        Claim::Table1Diffs => table_diffs(),
        Claim::Example51 => example51(),
        Claim::Remark52 => remark52(),
        Claim::NumberingOracle => numbering_cases(),
    };
    cases.sort_by(|a, b| a.parameters.cmp(&b.parameters));
    cases
}

/// Runs one claim or all of them, in canonical order. For the full suite a
/// final parity case checks that every computed change of `St(2)` is even.
pub fn run_suite(claim: Option<Claim>) -> Vec<VerificationCase> {
    let claims: Vec<Claim> = match claim {
        Some(c) => vec![c],
        None => Claim::ALL.to_vec(),
    };
    let mut out: Vec<VerificationCase> = claims.into_iter().flat_map(run_claim).collect();
    if matches!(claim, None | Some(Claim::Remark52)) {
        let st2_claims = [Claim::Thm37, Claim::Thm38, Claim::Example51, Claim::Remark52];
        let values: Vec<Rational> = out
            .iter()
            .filter(|c| st2_claims.contains(&c.claim))
            .flat_map(|c| c.paths.iter().filter(|p| !p.path.starts_with("dst1")).filter_map(|p| p.value))
            .collect();
        let odd = values.iter().filter(|v| !rational::is_integer(&(**v / 2))).count();
        out.push(VerificationCase::new(
            Claim::Remark52,
            format!("parity of {} computed St(2) changes", values.len()),
            int(0),
            vec![path("values outside 2Z", Ok(int(odd as i64)))],
        ));
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClaimSummary {
    pub claim: Claim,
    pub cases: usize,
    pub holding: usize,
}

pub fn summarize(cases: &[VerificationCase]) -> Vec<ClaimSummary> {
    let mut by: BTreeMap<Claim, (usize, usize)> = BTreeMap::new();
    for c in cases {
        let e = by.entry(c.claim).or_default();
        e.0 += 1;
        e.1 += usize::from(c.holds);
    }
    by.into_iter().map(|(claim, (cases, holding))| ClaimSummary { claim, cases, holding }).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::two_circles;

    #[test]
    fn oracle_on_small_diagrams() {
        let e = numbering_oracle(&Diagram::new(), rational::half(-3)).unwrap();
        assert_eq!(e.values.len(), 1);
        assert_eq!(e.values[&RegionId::Ambient], rational::half(-3));
        assert!(numbering_disagreements(&two_circles(), int(0)).unwrap().is_empty());
    }

    #[test]
    fn corrupted_coorientation_is_rejected_by_both() {
        let mut d = two_circles();
        let (x, _) = d.mates.iter().next().map(|(a, b)| (a.clone(), b.clone())).unwrap();
        let s = d.sides[&x];
        d.sides.insert(x, s.flip());
        assert!(alexander_numbering(&d, int(0)).is_err());
        assert!(numbering_oracle(&d, int(0)).is_err());
    }

    #[test]
    fn lemma_suite_holds() {
        let cases = run_claim(Claim::LemmaSt1);
        assert_eq!(cases.len(), 16);
        assert!(cases.iter().all(|c| c.holds), "{cases:#?}");
    }

    #[test]
    fn table_q_suite_holds() {
        let cases = run_claim(Claim::Table1Q);
        assert_eq!(cases.len(), 12);
        assert!(cases.iter().all(|c| c.holds));
    }
}
