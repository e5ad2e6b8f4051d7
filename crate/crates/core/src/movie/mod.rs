//! Slice movies of immersed surfaces and their triple-point invariant.

mod surgery;
mod script;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::canon::isomorphic;
use crate::constructions::Direction;
use crate::diagram::{Coorient, Diagram, Host, Side};
use crate::error::{Error, Result};
use crate::ids::{CircleId, DartId, VertexId};
use crate::numbering::{dst1_omega3, numbering_in};
use crate::omega3::{find_triangle, triangle_in};
use crate::rational::{self, Rational};

pub use script::{parse_movie, serialize_movie};
pub use surgery::ArcSite;
pub(crate) use surgery::{arc_side, normalize_hosts};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Transition {
    Birth { circle: CircleId, host: Host, coorient: Coorient },
    Death { circle: CircleId },
    Saddle { a: ArcSite, b: ArcSite, created: Option<CircleId>, split: Vec<String> },
    CrossingBirth { a: ArcSite, b: ArcSite, vertices: [VertexId; 2], sides: [Side; 2], split: Vec<String> },
    CrossingDeath { vertices: [VertexId; 2], via: Option<DartId>, created: Vec<CircleId> },
    Triple { vertices: [VertexId; 3] },
}

impl Transition {
    pub fn kind(&self) -> &'static str {
        match self {
            Transition::Birth { .. } => "birth",
            Transition::Death { .. } => "death",
            Transition::Saddle { .. } => "saddle",
            Transition::CrossingBirth { .. } => "crossing_birth",
            Transition::CrossingDeath { .. } => "crossing_death",
            Transition::Triple { .. } => "triple",
        }
    }

    pub fn apply(&self, d: &Diagram) -> Result<Diagram> {
        match self {
            Transition::Birth { circle, host, coorient } => surgery::birth(d, circle, host, *coorient),
            Transition::Death { circle } => surgery::death(d, circle),
            Transition::Saddle { a, b, created, split } => surgery::saddle(d, a, b, created.as_ref(), split),
            Transition::CrossingBirth { a, b, vertices, sides, split } => {
                surgery::crossing_birth(d, a, b, vertices, *sides, split)
            }
            Transition::CrossingDeath { vertices, via, created } => {
                surgery::crossing_death(d, vertices, via.as_ref(), created)
            }
            Transition::Triple { vertices } => surgery::triple(d, vertices),
        }
    }
}

impl fmt::Display for Transition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let split_suffix = |split: &[String]| {
            if split.is_empty() {
                String::new()
            } else {
                format!(" split {}", split.join(" "))
            }
        };
        match self {
            Transition::Birth { circle, host, coorient } => {
                write!(f, "birth {circle} host {host} coorient {}", coorient.keyword())
            }
            Transition::Death { circle } => write!(f, "death {circle}"),
            Transition::Saddle { a, b, created, split } => {
                write!(f, "saddle {a} {b}")?;
                if let Some(c) = created {
                    write!(f, " -> {c}")?;
                }
                f.write_str(&split_suffix(split))
            }
            Transition::CrossingBirth { a, b, vertices, sides, split } => write!(
                f,
                "crossing_birth {a} {b} -> {} {} coorient {} {}{}",
                vertices[0],
                vertices[1],
                sides[0].keyword(),
                sides[1].keyword(),
                split_suffix(split)
            ),
            Transition::CrossingDeath { vertices, via, created } => {
                write!(f, "crossing_death {} {}", vertices[0], vertices[1])?;
                if let Some(x) = via {
                    write!(f, " via {x}")?;
                }
                if !created.is_empty() {
                    let names: Vec<String> = created.iter().map(|c| c.to_string()).collect();
                    write!(f, " -> {}", names.join(" "))?;
                }
                Ok(())
            }
            Transition::Triple { vertices } => write!(f, "triple {} {} {}", vertices[0], vertices[1], vertices[2]),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Movie {
    pub initial: Diagram,
    pub steps: Vec<Transition>,
    pub closed: bool,
}

impl Movie {
    pub fn closed(steps: Vec<Transition>) -> Self {
        Movie { initial: Diagram::new(), steps, closed: true }
    }

    pub fn open(initial: Diagram, steps: Vec<Transition>) -> Self {
        Movie { initial, steps, closed: false }
    }
}

/// All slices of a movie, from the initial one to the final one.
pub fn run(m: &Movie) -> Result<Vec<Diagram>> {
    m.initial.validate().into_result()?;
    if m.closed && !m.initial.is_empty() {
        return Err(Error::pre("a closed movie starts from the empty slice"));
    }
    let mut slices = vec![normalize_hosts(&m.initial)?];
    for (step, t) in m.steps.iter().enumerate() {
        let next = t
            .apply(slices.last().expect("nonempty"))
            .map_err(|e| Error::Transition { step, reason: e.to_string() })?;
        slices.push(next);
    }
    if m.closed && !slices.last().expect("nonempty").is_empty() {
        return Err(Error::Transition { step: m.steps.len(), reason: "a closed movie must end empty".into() });
    }
    Ok(slices)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TriplePointRecord {
    pub step: usize,
    pub vertices: [VertexId; 3],
    /// Around the triangle: for each corner, the region across the vertex
    /// and then the region across the following edge.
    pub sectors: [Rational; 6],
    pub triangle_before: Rational,
    pub triangle_after: Rational,
    pub index: Rational,
}

/// Octant values of every triple transition, with the ambient region at
/// `base`.
pub fn triple_records(m: &Movie, base: Rational) -> Result<Vec<TriplePointRecord>> {
    let slices = run(m)?;
    let mut out = Vec::new();
    for (step, t) in m.steps.iter().enumerate() {
        let Transition::Triple { vertices } = t else { continue };
        let (before, after) = (&slices[step], &slices[step + 1]);
        let tb = before.topology()?;
        let nb = numbering_in(before, &tb, base)?;
        let face = find_triangle(before, vertices)?;
        let tri = triangle_in(before, &tb, &face)?;
        let mut sectors = [Rational::from_integer(0); 6];
        for (i, a) in tri.darts.iter().enumerate() {
            sectors[2 * i] = nb.value(&tb.region_of_dart(before, &tb.opposite(before, a))?)?;
            sectors[2 * i + 1] = nb.value(&tb.region_of_dart(before, &before.mates[a])?)?;
        }
        let triangle_before = nb.value(&tb.region_of_dart(before, &face)?)?;
        let ta = after.topology()?;
        let na = numbering_in(after, &ta, base)?;
        let face_after = find_triangle(after, vertices)?;
        let triangle_after = na.value(&ta.region_of_dart(after, &face_after)?)?;
        let sum: Rational = sectors.iter().sum::<Rational>() + triangle_before + triangle_after;
        let index = sum / 8;
        if !rational::is_integer(&index) {
            return Err(Error::Internal(format!(
                "triple point at step {step} has non-integral index {}",
                rational::format(&index)
            )));
        }
        out.push(TriplePointRecord {
            step,
            vertices: vertices.clone(),
            sectors,
            triangle_before,
            triangle_after,
            index,
        });
    }
    Ok(out)
}

pub fn st2(m: &Movie) -> Result<Rational> {
    if !m.closed {
        return Err(Error::pre("St(2) needs a closed movie; use st2_local for open ones"));
    }
    st2_local(m, rational::half(-3))
}

pub fn st2_local(m: &Movie, ambient_base: Rational) -> Result<Rational> {
    Ok(triple_records(m, ambient_base)?.iter().map(|r| r.index).sum())
}

/// −1 for an upward local transition, +1 for a downward one.
pub fn slice_sign(direction: Direction) -> i64 {
    match direction {
        Direction::Upward => -1,
        Direction::Downward => 1,
    }
}

/// Bases used to confirm that an open comparison does not depend on the
/// surrounding value.
pub const CHECK_BASES: [(i64, i64); 3] = [(-3, 2), (-1, 2), (5, 2)];

pub fn dst2_pair(before: &Movie, after: &Movie) -> Result<Rational> {
    match (before.closed, after.closed) {
        (true, true) => Ok(st2(after)? - st2(before)?),
        (false, false) => {
            let sb = run(before)?;
            let sa = run(after)?;
            if !isomorphic(&sb[0], &sa[0]) {
                return Err(Error::pre("open movies start from different slices"));
            }
            if !isomorphic(sb.last().unwrap(), sa.last().unwrap()) {
                return Err(Error::pre("open movies end in different slices"));
            }
            let mut values = BTreeSet::new();
            for (n, d) in CHECK_BASES {
                let base = Rational::new(n, d);
                values.insert(st2_local(after, base)? - st2_local(before, base)?);
            }
            if values.len() != 1 {
                return Err(Error::Internal("open pair difference depends on the ambient value".into()));
            }
            Ok(values.into_iter().next().unwrap())
        }
        _ => Err(Error::pre("cannot compare a closed movie with an open one")),
    }
}

/// The triangle move a Q event induces on the moving sheet.
#[derive(Clone, Debug)]
pub struct InducedSite {
    pub slice: Diagram,
    pub face: DartId,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Theorem37 {
    pub dst2: Rational,
    pub dst1: Rational,
    pub sgn: i64,
    pub holds: bool,
}

pub fn theorem37_check(before: &Movie, after: &Movie, site: &InducedSite, direction: Direction) -> Result<Theorem37> {
    let dst2 = dst2_pair(before, after)?;
    let dst1 = dst1_omega3(&site.slice, &site.face, rational::int(-1))
        .map_err(|e| Error::pre(format!("induced site: {e}")))?;
    let sgn = slice_sign(direction);
    Ok(Theorem37 { dst2, dst1, sgn, holds: dst2 == dst1 + rational::int(sgn) })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bd() -> Movie {
        Movie::closed(vec![
            Transition::Birth { circle: "c1".into(), host: Host::Ambient, coorient: Coorient::Inward },
            Transition::Death { circle: "c1".into() },
        ])
    }

    #[test]
    fn sphere_movie() {
        let s = run(&bd()).unwrap();
        assert_eq!(s.len(), 3);
        assert!(s[0].is_empty() && s[2].is_empty());
        assert_eq!(s[1].circles().len(), 1);
        assert_eq!(st2(&bd()).unwrap(), rational::int(0));
        assert_eq!(dst2_pair(&bd(), &bd()).unwrap(), rational::int(0));
    }

    #[test]
    fn failing_step_is_reported() {
        let m = Movie::closed(vec![Transition::Death { circle: "c1".into() }]);
        match run(&m).unwrap_err() {
            Error::Transition { step, reason } => {
                assert_eq!(step, 0);
                assert!(reason.contains("unknown circle"));
            }
            e => panic!("{e}"),
        }
    }

    #[test]
    fn open_movies_need_st2_local() {
        let m = Movie::open(Diagram::new(), vec![]);
        assert!(matches!(st2(&m), Err(Error::Precondition(_))));
        assert_eq!(st2_local(&m, rational::int(0)).unwrap(), rational::int(0));
    }

    #[test]
    fn signs() {
        assert_eq!(slice_sign(Direction::Upward), -1);
        assert_eq!(slice_sign(Direction::Downward), 1);
        for d in [Direction::Upward, Direction::Downward] {
            assert_eq!(slice_sign(d), -slice_sign(d.reverse()));
        }
    }
}
