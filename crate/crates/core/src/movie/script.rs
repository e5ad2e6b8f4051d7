//! Movie script format.
//!
//! ```text
//! movie closed|open
//! initial {
//!   <diagram records>
//! }
//! birth c1 host outer coorient inward
//! crossing_birth edge:a circle:c1:outer -> v w coorient left right [split ...]
//! saddle edge:a edge:b [-> c2] [split ...]
//! triple [face] u v w
//! crossing_death v w [via <dart>] [-> c3 c4]
//! death c1
//! ```

use std::fmt::Write as _;

use super::{ArcSite, Movie, Transition};
use crate::error::Result;
use crate::ids::{CircleId, DartId, VertexId};
use crate::text::{diagram_records, expect_kw, parse_coorient, parse_host, parse_side, syntax, tokenize, DiagramBuilder, Token};

fn arc(tok: &Token<'_>, line: usize) -> Result<ArcSite> {
    if let Some(a) = ArcSite::parse(tok.text) {
        return Ok(a);
    }
    if !tok.text.contains(':') {
        return Ok(ArcSite::Edge(DartId::from(tok.text)));
    }
    Err(syntax(line, tok.column, format!("expected edge:<dart> or circle:<cid>:inner|outer, found `{}`", tok.text)))
}

fn need<'a, 'b>(toks: &'b [Token<'a>], i: usize, line: usize, what: &str) -> Result<&'b Token<'a>> {
    toks.get(i).ok_or_else(|| {
        let col = toks.last().map_or(1, |t| t.column + t.text.len());
        syntax(line, col, format!("missing {what}"))
    })
}

/// Parses `[-> names...] [split names...]` style tails.
fn tail(toks: &[Token<'_>], mut i: usize, line: usize) -> Result<(Option<DartId>, Vec<String>, Vec<String>)> {
    let mut via = None;
    let mut created = Vec::new();
    let mut split = Vec::new();
    while i < toks.len() {
        match toks[i].text {
            "via" => {
                via = Some(DartId::from(need(toks, i + 1, line, "dart after `via`")?.text));
                i += 2;
            }
            "->" => {
                i += 1;
                while i < toks.len() && !matches!(toks[i].text, "split" | "via") {
                    created.push(toks[i].text.to_owned());
                    i += 1;
                }
            }
            "split" => {
                i += 1;
                while i < toks.len() {
                    split.push(toks[i].text.to_owned());
                    i += 1;
                }
            }
            other => return Err(syntax(line, toks[i].column, format!("unexpected `{other}`"))),
        }
    }
    Ok((via, created, split))
}

fn transition(toks: &[Token<'_>], line: usize) -> Result<Transition> {
    let head = &toks[0];
    let t = match head.text {
        "birth" => {
            if toks.len() != 6 {
                return Err(syntax(line, head.column, "`birth` expects: birth <cid> host <host> coorient <c>"));
            }
            expect_kw(&toks[2], "host", line)?;
            expect_kw(&toks[4], "coorient", line)?;
            Transition::Birth {
                circle: CircleId::from(toks[1].text),
                host: parse_host(&toks[3], line)?,
                coorient: parse_coorient(&toks[5], line)?,
            }
        }
        "death" => {
            if toks.len() != 2 {
                return Err(syntax(line, head.column, "`death` expects one circle"));
            }
            Transition::Death { circle: CircleId::from(toks[1].text) }
        }
        "saddle" => {
            let a = arc(need(toks, 1, line, "first arc")?, line)?;
            let b = arc(need(toks, 2, line, "second arc")?, line)?;
            let (via, created, split) = tail(toks, 3, line)?;
            if via.is_some() || created.len() > 1 {
                return Err(syntax(line, head.column, "`saddle` takes at most one created circle"));
            }
            Transition::Saddle { a, b, created: created.first().map(|c| CircleId::from(c.as_str())), split }
        }
        "crossing_birth" => {
            let a = arc(need(toks, 1, line, "first arc")?, line)?;
            let b = arc(need(toks, 2, line, "second arc")?, line)?;
            expect_kw(need(toks, 3, line, "`->`")?, "->", line)?;
            let v1 = VertexId::from(need(toks, 4, line, "first vertex")?.text);
            let v2 = VertexId::from(need(toks, 5, line, "second vertex")?.text);
            expect_kw(need(toks, 6, line, "`coorient`")?, "coorient", line)?;
            let s1 = parse_side(need(toks, 7, line, "side")?, line)?;
            let s2 = parse_side(need(toks, 8, line, "side")?, line)?;
            let (via, created, split) = tail(toks, 9, line)?;
            if via.is_some() || !created.is_empty() {
                return Err(syntax(line, head.column, "`crossing_birth` takes only a split list after the sides"));
            }
            Transition::CrossingBirth { a, b, vertices: [v1, v2], sides: [s1, s2], split }
        }
        "crossing_death" => {
            let v1 = VertexId::from(need(toks, 1, line, "first vertex")?.text);
            let v2 = VertexId::from(need(toks, 2, line, "second vertex")?.text);
            let (via, created, split) = tail(toks, 3, line)?;
            if !split.is_empty() {
                return Err(syntax(line, head.column, "`crossing_death` takes no split list"));
            }
            Transition::CrossingDeath {
                vertices: [v1, v2],
                via,
                created: created.iter().map(|c| CircleId::from(c.as_str())).collect(),
            }
        }
        "triple" => {
            let rest: Vec<&Token<'_>> = toks[1..].iter().filter(|t| t.text != "face").collect();
            if rest.len() != 3 {
                return Err(syntax(line, head.column, "`triple` expects three vertices"));
            }
            Transition::Triple { vertices: [0, 1, 2].map(|k| VertexId::from(rest[k].text)) }
        }
        other => return Err(syntax(line, head.column, format!("unknown transition `{other}`"))),
    };
    Ok(t)
}

pub fn parse_movie(text: &str) -> Result<Movie> {
    let mut closed = None;
    let mut builder: Option<DiagramBuilder> = None;
    let mut in_initial = false;
    let mut initial = None;
    let mut steps = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokenize(raw);
        let Some(head) = toks.first() else { continue };
        if closed.is_none() {
            if head.text != "movie" || toks.len() != 2 {
                return Err(syntax(line, head.column, "expected `movie closed|open`"));
            }
            closed = Some(match toks[1].text {
                "closed" => true,
                "open" => false,
                other => return Err(syntax(line, toks[1].column, format!("expected closed|open, found `{other}`"))),
            });
            continue;
        }
        if in_initial {
            if head.text == "}" {
                in_initial = false;
                initial = Some(builder.take().expect("open block").finish()?);
                continue;
            }
            let b = builder.as_mut().expect("open block");
            if !b.record(&toks, line)? {
                return Err(syntax(line, head.column, format!("unknown record `{}`", head.text)));
            }
            continue;
        }
        if head.text == "initial" {
            if initial.is_some() || !steps.is_empty() {
                return Err(syntax(line, head.column, "`initial` must come once, before the steps"));
            }
            if toks.len() != 2 || toks[1].text != "{" {
                return Err(syntax(line, head.column, "expected `initial {`"));
            }
            in_initial = true;
            builder = Some(DiagramBuilder::default());
            continue;
        }
        steps.push(transition(&toks, line)?);
    }
    let closed = closed.ok_or_else(|| syntax(1, 1, "empty movie script"))?;
    if in_initial {
        return Err(syntax(text.lines().count().max(1), 1, "missing closing `}`"));
    }
    Ok(Movie { initial: initial.unwrap_or_default(), steps, closed })
}

pub fn serialize_movie(m: &Movie) -> String {
    let mut s = format!("movie {}\n", if m.closed { "closed" } else { "open" });
    if !m.initial.is_empty() {
        s.push_str("initial {\n");
        for r in diagram_records(&m.initial) {
            let _ = writeln!(s, "  {r}");
        }
        s.push_str("}\n");
    }
    for t in &m.steps {
        let _ = writeln!(s, "{t}");
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn round_trip() {
        let text = "movie open\ninitial {\n  circle a host outer coorient inward\n  circle b host outer coorient inward\n}\n\
                    crossing_birth circle:a:outer circle:b:outer -> u w coorient right right\n\
                    crossing_death u w via u.3 -> a b\n\
                    saddle circle:a:outer circle:b:outer\n\
                    triple face x y z\n";
        let m = parse_movie(text).unwrap();
        assert_eq!(m.steps.len(), 4);
        assert!(!m.closed);
        let again = parse_movie(&serialize_movie(&m)).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn errors_have_positions() {
        assert!(matches!(parse_movie("movie sideways\n"), Err(Error::Syntax { line: 1, .. })));
        let e = parse_movie("movie closed\nbirth c1 host outer coorient up\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }));
        let e = parse_movie("movie closed\nwobble\n").unwrap_err();
        assert!(matches!(e, Error::Syntax { line: 2, .. }));
    }
}
