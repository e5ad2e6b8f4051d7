//! Alexander numbering of slice regions, double-point indices and `St(1)`.

use std::collections::{BTreeMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Coorient, Diagram, RegionId, Side, Topology};
use crate::error::{Error, Result};
use crate::ids::{DartId, VertexId};
use crate::omega3::{apply_omega3, triangle_in};
use crate::rational::{self, Rational};

/// Region values; the ambient region carries `base`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RegionNumbering {
    pub base: Rational,
    pub values: BTreeMap<RegionId, Rational>,
}

impl RegionNumbering {
    pub fn value(&self, r: &RegionId) -> Result<Rational> {
        self.values
            .get(r)
            .copied()
            .ok_or_else(|| Error::Internal(format!("region {r} has no value")))
    }

    pub fn shifted(&self, c: Rational) -> RegionNumbering {
        RegionNumbering {
            base: self.base + c,
            values: self.values.iter().map(|(r, v)| (r.clone(), *v + c)).collect(),
        }
    }
}

/// A dual edge: crossing from `from` to `to` changes the value by `step`.
pub(crate) struct DualEdge {
    pub from: RegionId,
    pub to: RegionId,
    pub step: i64,
}

/// All dual edges of a diagram: one per map edge and one per free circle.
pub(crate) fn dual_edges(d: &Diagram, topo: &Topology) -> Result<Vec<DualEdge>> {
    let mut out = Vec::new();
    for (a, b, side) in d.edges() {
        // `side` is relative to walking a -> b, whose left face is the face of a
        let left = topo.region_of_dart(d, &a)?;
        let right = topo.region_of_dart(d, &b)?;
        let step = if side == Side::Left { 1 } else { -1 };
        out.push(DualEdge { from: right, to: left, step });
    }
    for (c, circle) in &d.circles {
        let outside = topo.region_outside_circle(d, c)?;
        let step = if circle.coorient == Coorient::Inward { 1 } else { -1 };
        out.push(DualEdge { from: outside, to: RegionId::Inner(c.clone()), step });
    }
    Ok(out)
}

/// Breadth-first propagation from the ambient region.
pub fn alexander_numbering(d: &Diagram, base: Rational) -> Result<RegionNumbering> {
    d.validate().into_result()?;
    let topo = d.topology()?;
    numbering_in(d, &topo, base)
}

pub(crate) fn numbering_in(d: &Diagram, topo: &Topology, base: Rational) -> Result<RegionNumbering> {
    let edges = dual_edges(d, topo)?;
    let mut adj: BTreeMap<RegionId, Vec<(RegionId, i64)>> = BTreeMap::new();
    for e in &edges {
        adj.entry(e.from.clone()).or_default().push((e.to.clone(), e.step));
        adj.entry(e.to.clone()).or_default().push((e.from.clone(), -e.step));
    }
    let mut values = BTreeMap::new();
    values.insert(RegionId::Ambient, base);
    let mut queue = VecDeque::from([RegionId::Ambient]);
    while let Some(r) = queue.pop_front() {
        let v = values[&r];
        for (s, step) in adj.get(&r).map(Vec::as_slice).unwrap_or(&[]) {
            let w = v + rational::int(*step);
            match values.get(s) {
                None => {
                    values.insert(s.clone(), w);
                    queue.push_back(s.clone());
                }
                Some(&old) if old != w => {
                    return Err(Error::Consistency {
                        region: s.to_string(),
                        first: rational::format(&old),
                        second: rational::format(&w),
                    })
                }
                Some(_) => {}
            }
        }
    }
    for r in topo.regions(d)? {
        if !values.contains_key(&r) {
            return Err(Error::Internal(format!("region {r} is not reachable from the outside")));
        }
    }
    Ok(RegionNumbering { base, values })
}

/// Mean of the four corner values at `v`.
pub fn double_point_index(d: &Diagram, n: &RegionNumbering, v: &VertexId) -> Result<Rational> {
    let topo = d.topology()?;
    index_in(d, &topo, n, v)
}

pub(crate) fn index_in(d: &Diagram, topo: &Topology, n: &RegionNumbering, v: &VertexId) -> Result<Rational> {
    let corners = topo.corners(d, v)?;
    let mut sum = Rational::from_integer(0);
    for r in &corners {
        sum += n.value(r)?;
    }
    Ok(sum / 4)
}

pub fn vertex_indices(d: &Diagram, n: &RegionNumbering) -> Result<BTreeMap<VertexId, Rational>> {
    let topo = d.topology()?;
    d.vertices.keys().map(|v| Ok((v.clone(), index_in(d, &topo, n, v)?))).collect()
}

pub fn st1(d: &Diagram, base: Rational) -> Result<Rational> {
    let n = alexander_numbering(d, base)?;
    Ok(vertex_indices(d, &n)?.values().sum())
}

/// `St(1)` after the triangle move at `face` minus `St(1)` before it.
pub fn dst1_omega3(d: &Diagram, face: &DartId, base: Rational) -> Result<Rational> {
    let (after, _) = apply_omega3(d, face)?;
    Ok(st1(&after, base)? - st1(d, base)?)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TriangleKind {
    Weak,
    Strong,
}

impl fmt::Display for TriangleKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TriangleKind::Weak => "weak",
            TriangleKind::Strong => "strong",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Classification {
    pub kind: TriangleKind,
    pub i: Rational,
}

/// Strong if all three indices agree, weak if two agree and the third is one
/// more or one less; `i` is the least index.
pub fn classify_indices(idx: [Rational; 3]) -> Result<Classification> {
    let mut s = idx;
    s.sort();
    let one = Rational::from_integer(1);
    let kind = if s[0] == s[2] {
        TriangleKind::Strong
    } else if (s[0] == s[1] && s[2] - s[1] == one) || (s[1] == s[2] && s[1] - s[0] == one) {
        TriangleKind::Weak
    } else {
        return Err(Error::Classification(idx.map(|q| rational::format(&q))));
    };
    Ok(Classification { kind, i: s[0] })
}

pub fn classify_vanishing_triangle(d: &Diagram, n: &RegionNumbering, face: &DartId) -> Result<Classification> {
    let topo = d.topology()?;
    let t = triangle_in(d, &topo, face)?;
    let mut idx = [Rational::from_integer(0); 3];
    for (k, v) in t.vertices.iter().enumerate() {
        idx[k] = index_in(d, &topo, n, v)?;
    }
    classify_indices(idx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::two_circles;
    use crate::diagram::Host;
    use crate::rational::half;

    #[test]
    fn empty_and_single_circle() {
        let d = Diagram::new();
        let n = alexander_numbering(&d, half(-3)).unwrap();
        assert_eq!(n.values.len(), 1);
        assert_eq!(n.value(&RegionId::Ambient).unwrap(), half(-3));
        let mut d = Diagram::new();
        d.add_circle("c1", Host::Ambient, Coorient::Inward);
        let n = alexander_numbering(&d, half(-3)).unwrap();
        assert_eq!(n.value(&RegionId::Inner("c1".into())).unwrap(), half(-1));
        assert_eq!(st1(&d, half(-3)).unwrap(), Rational::from_integer(0));
    }

    #[test]
    fn two_inward_circles() {
        let d = two_circles();
        let n = alexander_numbering(&d, rational::int(-1)).unwrap();
        let mut vals: Vec<Rational> = n.values.values().copied().collect();
        vals.sort();
        assert_eq!(vals, vec![rational::int(-1), rational::int(0), rational::int(0), rational::int(1)]);
        // corners read -1, 0, 1, 0 at both crossings
        assert_eq!(st1(&d, rational::int(-1)).unwrap(), rational::int(0));
    }

    #[test]
    fn classification_patterns() {
        let r = |a: i64, b: i64, c: i64| classify_indices([rational::int(a), rational::int(b), rational::int(c)]);
        assert_eq!(r(5, 5, 6).unwrap(), Classification { kind: TriangleKind::Weak, i: rational::int(5) });
        assert_eq!(r(6, 5, 6).unwrap(), Classification { kind: TriangleKind::Weak, i: rational::int(5) });
        assert_eq!(r(2, 2, 2).unwrap(), Classification { kind: TriangleKind::Strong, i: rational::int(2) });
        assert!(matches!(r(1, 2, 3), Err(Error::Classification(_))));
        assert!(matches!(r(1, 1, 3), Err(Error::Classification(_))));
    }

    #[test]
    fn conflicting_coorientation_is_reported() {
        let mut d = two_circles();
        // flip a whole strand-consistent edge pair is still inconsistent globally
        d.sides.insert("x0".into(), Side::Right);
        d.sides.insert("y2".into(), Side::Left);
        let topo = d.topology().unwrap();
        let err = numbering_in(&d, &topo, rational::int(0)).unwrap_err();
        assert!(matches!(err, Error::Consistency { .. }));
    }
}
