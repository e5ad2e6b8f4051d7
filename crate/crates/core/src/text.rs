//! Line-oriented text format for diagrams.
//!
//! ```text
//! # comment
//! vertex <vid> <d0> <d1> <d2> <d3>          # counterclockwise
//! edge <da> <db> coorient left|right         # side when walking da -> db
//! circle <cid> host outer|face:<dart>|circle:<cid> coorient inward|outward
//! outer <dart>                               # left face of dart is unbounded
//! outer ambient                              # mapless diagrams (optional)
//! nest <dart> host face:<dart>|circle:<cid>  # outer face of a nested component
//! ```
//!
//! The records may be wrapped in `diagram { ... }`. Serialization sorts every
//! record kind by id, so equal diagrams serialize identically.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::diagram::{Coorient, Diagram, Host, Side};
use crate::error::{Error, Result};
use crate::ids::{CircleId, DartId, VertexId};

#[derive(Clone, Debug)]
pub(crate) struct Token<'a> {
    pub text: &'a str,
    pub column: usize,
}

/// Splits a line into whitespace-separated tokens with 1-based columns,
/// dropping `#` comments.
pub(crate) fn tokenize(line: &str) -> Vec<Token<'_>> {
    let body = match line.find('#') {
        Some(i) => &line[..i],
        None => line,
    };
    let mut out = Vec::new();
    let mut start = None;
    for (i, ch) in body.char_indices() {
        if ch.is_whitespace() {
            if let Some(s) = start.take() {
                out.push(Token { text: &body[s..i], column: s + 1 });
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        out.push(Token { text: &body[s..], column: s + 1 });
    }
    out
}

pub(crate) fn syntax(line: usize, column: usize, message: impl Into<String>) -> Error {
    Error::Syntax { line, column, message: message.into() }
}

pub(crate) fn expect_len(toks: &[Token<'_>], n: usize, line: usize, what: &str) -> Result<()> {
    if toks.len() == n {
        return Ok(());
    }
    let column = toks.get(n).or(toks.last()).map_or(1, |t| t.column);
    Err(syntax(line, column, format!("`{what}` expects {} fields, found {}", n, toks.len())))
}

pub(crate) fn expect_kw(tok: &Token<'_>, kw: &str, line: usize) -> Result<()> {
    if tok.text == kw {
        Ok(())
    } else {
        Err(syntax(line, tok.column, format!("expected `{kw}`, found `{}`", tok.text)))
    }
}

pub(crate) fn parse_side(tok: &Token<'_>, line: usize) -> Result<Side> {
    match tok.text {
        "left" => Ok(Side::Left),
        "right" => Ok(Side::Right),
        other => Err(syntax(line, tok.column, format!("expected left|right, found `{other}`"))),
    }
}

pub(crate) fn parse_coorient(tok: &Token<'_>, line: usize) -> Result<Coorient> {
    match tok.text {
        "inward" => Ok(Coorient::Inward),
        "outward" => Ok(Coorient::Outward),
        other => Err(syntax(line, tok.column, format!("expected inward|outward, found `{other}`"))),
    }
}

pub(crate) fn parse_host(tok: &Token<'_>, line: usize) -> Result<Host> {
    if tok.text == "outer" {
        return Ok(Host::Ambient);
    }
    if let Some(d) = tok.text.strip_prefix("face:") {
        if !d.is_empty() {
            return Ok(Host::Face(DartId::from(d)));
        }
    }
    if let Some(c) = tok.text.strip_prefix("circle:") {
        if !c.is_empty() {
            return Ok(Host::Circle(CircleId::from(c)));
        }
    }
    Err(syntax(
        line,
        tok.column,
        format!("expected outer|face:<dart>|circle:<cid>, found `{}`", tok.text),
    ))
}

/// Accumulates diagram records; shared with the movie parser.
#[derive(Default)]
pub(crate) struct DiagramBuilder {
    diagram: Diagram,
    vertex_darts: BTreeMap<DartId, usize>,
    edge_darts: BTreeSet<DartId>,
    pending_edges: Vec<(usize, DartId, DartId)>,
    pending_refs: Vec<(usize, DartId)>,
    pending_circle_refs: Vec<(usize, CircleId)>,
}

impl DiagramBuilder {
    /// Consumes one record. Returns `Ok(false)` if the keyword is not a
    /// diagram record.
    pub fn record(&mut self, toks: &[Token<'_>], line: usize) -> Result<bool> {
        let Some(head) = toks.first() else { return Ok(true) };
        match head.text {
            "vertex" => {
                expect_len(toks, 6, line, "vertex")?;
                let v = VertexId::from(toks[1].text);
                if self.diagram.vertices.contains_key(&v) {
                    return Err(Error::Semantic { line, id: v.0, message: "duplicate vertex".into() });
                }
                let mut darts = Vec::with_capacity(4);
                for t in &toks[2..6] {
                    let x = DartId::from(t.text);
                    if self.vertex_darts.insert(x.clone(), line).is_some() {
                        return Err(Error::Semantic { line, id: x.0, message: "dart used twice".into() });
                    }
                    darts.push(x);
                }
                self.diagram.vertices.insert(v, darts.try_into().expect("four darts"));
            }
            "edge" => {
                expect_len(toks, 5, line, "edge")?;
                expect_kw(&toks[3], "coorient", line)?;
                let side = parse_side(&toks[4], line)?;
                let a = DartId::from(toks[1].text);
                let b = DartId::from(toks[2].text);
                for x in [&a, &b] {
                    if !self.edge_darts.insert(x.clone()) && a != b {
                        return Err(Error::Semantic { line, id: x.0.clone(), message: "dart used twice".into() });
                    }
                }
                self.pending_edges.push((line, a.clone(), b.clone()));
                self.diagram.add_edge(a.as_str(), b.as_str(), side);
            }
            "circle" => {
                expect_len(toks, 6, line, "circle")?;
                expect_kw(&toks[2], "host", line)?;
                expect_kw(&toks[4], "coorient", line)?;
                let host = parse_host(&toks[3], line)?;
                let co = parse_coorient(&toks[5], line)?;
                let c = CircleId::from(toks[1].text);
                if self.diagram.circles.contains_key(&c) {
                    return Err(Error::Semantic { line, id: c.0, message: "duplicate circle".into() });
                }
                self.note_host(&host, line);
                self.diagram.add_circle(c, host, co);
            }
            "outer" => {
                expect_len(toks, 2, line, "outer")?;
                if toks[1].text != "ambient" {
                    let x = DartId::from(toks[1].text);
                    self.pending_refs.push((line, x.clone()));
                    self.diagram.anchors.insert(x, Host::Ambient);
                }
            }
            "nest" => {
                expect_len(toks, 4, line, "nest")?;
                expect_kw(&toks[2], "host", line)?;
                let host = parse_host(&toks[3], line)?;
                let x = DartId::from(toks[1].text);
                self.pending_refs.push((line, x.clone()));
                self.note_host(&host, line);
                self.diagram.anchors.insert(x, host);
            }
            _ => return Ok(false),
        }
        Ok(true)
    }

    fn note_host(&mut self, host: &Host, line: usize) {
        match host {
            Host::Face(x) => self.pending_refs.push((line, x.clone())),
            Host::Circle(c) => self.pending_circle_refs.push((line, c.clone())),
            Host::Ambient => {}
        }
    }

    pub fn finish(self) -> Result<Diagram> {
        for (line, a, b) in &self.pending_edges {
            for x in [a, b] {
                if !self.vertex_darts.contains_key(x) {
                    return Err(Error::Semantic { line: *line, id: x.0.clone(), message: "undefined dart".into() });
                }
            }
        }
        for (line, x) in &self.pending_refs {
            if !self.vertex_darts.contains_key(x) {
                return Err(Error::Semantic { line: *line, id: x.0.clone(), message: "undefined dart".into() });
            }
        }
        for (line, c) in &self.pending_circle_refs {
            if !self.diagram.circles.contains_key(c) {
                return Err(Error::Semantic { line: *line, id: c.0.clone(), message: "undefined circle".into() });
            }
        }
        Ok(self.diagram)
    }
}

pub fn parse_diagram(text: &str) -> Result<Diagram> {
    let mut b = DiagramBuilder::default();
    let mut open = false;
    let mut closed = false;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let toks = tokenize(raw);
        if toks.is_empty() {
            continue;
        }
        if closed {
            return Err(syntax(line, toks[0].column, "content after closing `}`"));
        }
        if toks[0].text == "diagram" {
            if open || toks.len() < 2 || toks[1].text != "{" {
                return Err(syntax(line, toks[0].column, "expected `diagram {`"));
            }
            open = true;
            if toks.len() > 2 {
                if toks.len() == 3 && toks[2].text == "}" {
                    closed = true;
                    continue;
                }
                return Err(syntax(line, toks[2].column, "records must start on their own line"));
            }
            continue;
        }
        if toks[0].text == "}" {
            if !open || toks.len() != 1 {
                return Err(syntax(line, toks[0].column, "unexpected `}`"));
            }
            closed = true;
            continue;
        }
        if !b.record(&toks, line)? {
            return Err(syntax(line, toks[0].column, format!("unknown record `{}`", toks[0].text)));
        }
    }
    if open && !closed {
        return Err(syntax(text.lines().count().max(1), 1, "missing closing `}`"));
    }
    b.finish()
}

/// Canonical record lines, without a wrapper.
pub(crate) fn diagram_records(d: &Diagram) -> Vec<String> {
    let mut out = Vec::new();
    for (v, darts) in &d.vertices {
        out.push(format!("vertex {v} {} {} {} {}", darts[0], darts[1], darts[2], darts[3]));
    }
    for (a, b, side) in d.edges() {
        out.push(format!("edge {a} {b} coorient {}", side.keyword()));
    }
    for (c, circle) in &d.circles {
        out.push(format!("circle {c} host {} coorient {}", circle.host, circle.coorient.keyword()));
    }
    for (x, host) in &d.anchors {
        match host {
            Host::Ambient => out.push(format!("outer {x}")),
            other => out.push(format!("nest {x} host {other}")),
        }
    }
    out
}

pub fn serialize_diagram(d: &Diagram) -> String {
    let mut s = String::from("diagram {\n");
    for r in diagram_records(d) {
        let _ = writeln!(s, "  {r}");
    }
    s.push_str("}\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::two_circles;

    #[test]
    fn round_trip_is_identity() {
        let d = two_circles();
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        assert_eq!(back, d);
        assert_eq!(serialize_diagram(&back), text);
    }

    #[test]
    fn empty_block_is_empty_diagram() {
        let d = parse_diagram("diagram {\n}\n").unwrap();
        assert!(d.is_empty());
        assert_eq!(d.regions().unwrap().len(), 1);
        assert!(parse_diagram("").unwrap().is_empty());
        assert!(parse_diagram("diagram { }").unwrap().is_empty());
    }

    #[test]
    fn undefined_dart_is_named() {
        let err = parse_diagram("vertex v a b c d\nedge a zz coorient left\n").unwrap_err();
        match err {
            Error::Semantic { id, line, .. } => {
                assert_eq!(id, "zz");
                assert_eq!(line, 2);
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn dart_used_twice_is_semantic_error() {
        let err = parse_diagram("vertex v a b c d\nvertex w a e f g\n").unwrap_err();
        assert!(matches!(err, Error::Semantic { ref id, .. } if id == "a"));
        let err = parse_diagram("vertex v a b c d\nedge a b coorient left\nedge a c coorient left\n").unwrap_err();
        assert!(matches!(err, Error::Semantic { ref id, .. } if id == "a"));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = parse_diagram("vertex v a b c d\nedge a b coorient up\n").unwrap_err();
        assert_eq!(err, Error::Syntax { line: 2, column: 19, message: "expected left|right, found `up`".into() });
        let err = parse_diagram("  bogus 1\n").unwrap_err();
        assert!(matches!(err, Error::Syntax { line: 1, column: 3, .. }));
    }

    #[test]
    fn comments_and_free_circles() {
        let d = parse_diagram("# lone circle\ncircle c1 host outer coorient inward # inside is higher\nouter ambient\n").unwrap();
        assert_eq!(d.circles().len(), 1);
        assert!(d.validate().is_ok());
    }
}
