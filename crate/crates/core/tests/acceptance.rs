//! Acceptance criteria, one line each. Criteria listed in `UNATTAINABLE`
//! are computed faithfully and expected to fail; the run fails if any other
//! criterion fails or if one of those starts to pass.

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use strangeness_core::arrangement::{event_model, triple_point_indices, EventKind};
use strangeness_core::canon::isomorphic;
use strangeness_core::constructions::{
    all_patterns, q_local_pair, triangle_gadget, Ambient, Direction, GadgetSpec, Orientation::*,
};
use strangeness_core::movie::{parse_movie, run, serialize_movie, theorem37_check};
use strangeness_core::rational::{self, Rational};
use strangeness_core::verify::{run_claim, Claim, VerificationCase};
use strangeness_core::{parse_diagram, serialize_diagram};

const UNATTAINABLE: [u8; 2] = [6, 7];

struct Outcome {
    pass: bool,
    detail: String,
}

fn from_cases(cases: &[VerificationCase]) -> Outcome {
    let failing: Vec<String> = cases
        .iter()
        .filter(|c| !c.holds)
        .map(|c| {
            let got = c.computed.map(|v| rational::format(&v)).unwrap_or_else(|| "error".into());
            format!("{} expected {} got {}", c.parameters, rational::format(&c.expected), got)
        })
        .collect();
    let held = cases.len() - failing.len();
    let mut detail = format!("{held}/{} cases", cases.len());
    if !failing.is_empty() {
        detail.push_str(&format!("; failing: {}", failing.join("; ")));
    }
    Outcome { pass: failing.is_empty() && !cases.is_empty(), detail }
}

fn c1_lemma() -> Outcome {
    from_cases(&run_claim(Claim::LemmaSt1))
}

fn c2_arrangement(thm38: &[VerificationCase]) -> Outcome {
    let cases: Vec<VerificationCase> = thm38
        .iter()
        .map(|c| {
            let mut c = c.clone();
            c.paths.retain(|p| !p.path.starts_with("movie"));
            c
        })
        .collect();
    let bases = cases
        .iter()
        .find(|c| !c.parameters.ends_with("reversed"))
        .map_or(0, |c| c.paths.iter().filter(|p| p.path.starts_with("arrangement base=")).count());
    let reversed = cases.iter().filter(|c| c.parameters.ends_with("reversed")).count();
    let patterns = cases.len() - reversed;
    let mut o = from_cases(&cases);
    let shape = patterns == 16 && reversed == 16 && bases >= 3;
    o.detail = format!("{patterns} patterns, {reversed} reversed, {bases} bases; {}", o.detail);
    o.pass &= shape;
    o
}

fn c3_movie(thm38: &[VerificationCase]) -> Outcome {
    // cases with j in {0,1,2}; each must carry a movie path that agrees with
    // the arrangement path
    let mut cases = Vec::new();
    let mut directions = 0;
    for c in thm38.iter().filter(|c| !c.parameters.ends_with("reversed")) {
        let j = c.parameters.matches("out").count();
        if j > 2 {
            continue;
        }
        let movies = c.paths.iter().filter(|p| p.path.starts_with("movie")).count();
        directions += movies;
        let mut c = c.clone();
        if movies == 0 {
            c.holds = false;
        }
        cases.push(c);
    }
    let mut o = from_cases(&cases);
    o.detail = format!("{directions} movie computations; {}", o.detail);
    o
}

fn c4_theorem37() -> Outcome {
    let mut o = from_cases(&run_claim(Claim::Thm37));
    let proof_cases = [
        ([In, In, In, In], (-3, -4)),
        ([Out, In, In, In], (-1, -2)),
        ([Out, Out, In, In], (1, 0)),
    ];
    for (p, (dst1, dst2)) in proof_cases {
        let ok = q_local_pair(&GadgetSpec::q(p, Direction::Upward))
            .and_then(|q| theorem37_check(&q.before, &q.after, &q.induced, Direction::Upward))
            .map(|t| {
                o.detail.push_str(&format!(
                    "; ({}, {}) sgn {}",
                    rational::format(&t.dst1),
                    rational::format(&t.dst2),
                    t.sgn
                ));
                t.dst1 == rational::int(dst1) && t.dst2 == rational::int(dst2) && t.sgn == -1 && t.holds
            })
            .unwrap_or(false);
        o.pass &= ok;
    }
    o
}

fn c5_table_q() -> Outcome {
    from_cases(&run_claim(Claim::Table1Q))
}

fn c6_table_h() -> Outcome {
    from_cases(&run_claim(Claim::Table1H))
}

fn c7_table_diffs() -> Outcome {
    from_cases(&run_claim(Claim::Table1Diffs))
}

fn c9_even(remark: &[VerificationCase], all_st2: &[&VerificationCase]) -> Outcome {
    let mut o = from_cases(remark);
    let values: Vec<Rational> = all_st2
        .iter()
        .flat_map(|c| c.paths.iter().filter(|p| !p.path.starts_with("dst1")).filter_map(|p| p.value))
        .collect();
    let odd = values.iter().filter(|v| !rational::is_integer(&(**v / 2))).count();
    o.detail.push_str(&format!("; {} computed St(2) changes, {odd} odd", values.len()));
    o.pass &= odd == 0 && !values.is_empty();
    o
}

fn c10_well_defined(lemma: &[VerificationCase]) -> Outcome {
    let mut problems = Vec::new();
    // triple-point indices of every model and every local movie
    let mut triples = 0;
    for kind in [EventKind::Q, EventKind::T] {
        for p in all_patterns(kind.sheets()) {
            match event_model(kind, &p) {
                Ok(m) => {
                    for c in [&m.before, &m.after] {
                        for base in [rational::half(-3), rational::half(1)] {
                            match triple_point_indices(c, base) {
                                Ok(ts) => {
                                    triples += ts.len();
                                    problems.extend(
                                        ts.iter()
                                            .filter(|t| !rational::is_integer(&t.index))
                                            .map(|t| format!("{} index {}", t.signs, rational::format(&t.index))),
                                    );
                                }
                                Err(e) => problems.push(e.to_string()),
                            }
                        }
                    }
                }
                Err(e) => problems.push(e.to_string()),
            }
        }
    }
    // movies reject non-integral triple indices themselves, so the Q and
    // braid suites above already cover them
    let oracle = run_claim(Claim::NumberingOracle);
    problems.extend(oracle.iter().filter(|c| !c.holds).map(|c| format!("oracle disagrees on {}", c.parameters)));
    // round trips
    let mut trips = 0;
    for amb in Ambient::ALL {
        for p in all_patterns(3) {
            let g = triangle_gadget(&GadgetSpec::omega3(p.clone().try_into().unwrap(), amb)).unwrap();
            for d in [&g.before, &g.after] {
                trips += 1;
                match parse_diagram(&serialize_diagram(d)) {
                    Ok(back) if isomorphic(&back, d) => {}
                    _ => problems.push(format!("diagram round trip failed for {p:?}")),
                }
            }
        }
    }
    let q = q_local_pair(&GadgetSpec::q([Out, In, In, In], Direction::Upward)).unwrap();
    for m in [&q.before, &q.after] {
        trips += 1;
        match parse_movie(&serialize_movie(m)) {
            Ok(back) => {
                let (a, b) = (run(m).unwrap(), run(&back).unwrap());
                if a.len() != b.len() || a.iter().zip(&b).any(|(x, y)| !isomorphic(x, y)) {
                    problems.push("movie round trip changed a slice".into());
                }
            }
            Err(e) => problems.push(format!("movie round trip: {e}")),
        }
    }
    // base shift of dst1 over the four bases
    let shifts = lemma
        .iter()
        .filter(|c| {
            let vals: BTreeSet<_> =
                c.paths.iter().filter(|p| p.path.starts_with("dst1 numbering")).map(|p| p.value).collect();
            vals.len() != 1 || vals.contains(&None)
        })
        .count();
    if shifts > 0 {
        problems.push(format!("{shifts} gadgets change dst1 with the base"));
    }
    let detail = format!(
        "{triples} model triple points, {} oracle diagrams, {trips} round trips, {} gadgets x 4 bases{}",
        oracle.len(),
        lemma.len(),
        if problems.is_empty() { String::new() } else { format!("; problems: {}", problems.join("; ")) }
    );
    Outcome { pass: problems.is_empty(), detail }
}

fn main() -> ExitCode {
    let start = Instant::now();
    let lemma = run_claim(Claim::LemmaSt1);
    let thm38 = run_claim(Claim::Thm38);
    let thm37 = run_claim(Claim::Thm37);
    let example = run_claim(Claim::Example51);
    let remark = run_claim(Claim::Remark52);
    let st2: Vec<&VerificationCase> = thm38.iter().chain(&thm37).chain(&example).chain(&remark).collect();

    let results: Vec<(u8, &str, Outcome)> = vec![
        (1, "St(1) change of a triangle move is 2j-3", c1_lemma()),
        (2, "St(2) change of a quadruple point is 2j-4 (arrangements)", c2_arrangement(&thm38)),
        (3, "St(2) change of a quadruple point is 2j-4 (movies)", c3_movie(&thm38)),
        (4, "St(2) change equals St(1) change plus slice sign", c4_theorem37()),
        (5, "Delta sigma rows of the quadruple points", c5_table_q()),
        (6, "Delta sigma rows of the hyperbolic tangencies", c6_table_h()),
        (7, "Delta sigma differences under one flip for E and T", c7_table_diffs()),
        (8, "k successive Q3 events change St(2) by -2k", from_cases(&example)),
        (9, "every even value is realized; all changes are even", c9_even(&remark, &st2)),
        (10, "integrality, oracle agreement, round trips, base shifts", c10_well_defined(&lemma)),
    ];

    let mut unexpected = Vec::new();
    for (n, name, o) in &results {
        let status = if o.pass { "PASS" } else { "FAIL" };
        let known = UNATTAINABLE.contains(n);
        let note = match (o.pass, known) {
            (false, true) => " (documented as unattainable)",
            (true, true) => " (listed as unattainable but passes)",
            _ => "",
        };
        println!("criterion {n:>2}: {status} {name}{note} [{}]", o.detail);
        if o.pass == known {
            unexpected.push(*n);
        }
    }
    println!("acceptance finished in {:.1}s", start.elapsed().as_secs_f64());
    if unexpected.is_empty() {
        println!("acceptance: all criteria as recorded ({} unattainable)", UNATTAINABLE.len());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected outcome for criteria {unexpected:?}");
        ExitCode::FAILURE
    }
}
