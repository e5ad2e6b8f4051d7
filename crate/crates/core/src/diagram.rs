//! Cooriented multi-component plane-curve diagrams as 4-valent maps on the
//! sphere.
//!
//! Conventions:
//! * the darts of a vertex are listed counterclockwise; darts in slots `k` and
//!   `k + 2` belong to the same strand;
//! * a face lies to the left of every dart of its boundary orbit, so the face
//!   successor of `d` is the clockwise neighbour of `mate(d)`;
//! * the coorientation of an edge is stored per dart: `sides[d]` is the side
//!   the arrow points to when walking from `d` to `mate(d)`;
//! * crossing-free components are kept as [`FreeCircle`]s, and every map
//!   component carries an *anchor*: a dart whose left face is the component's
//!   outer local face, together with the [`Host`] region it sits in.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ids::{CircleId, DartId, VertexId};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn flip(self) -> Side {
        match self {
            Side::Left => Side::Right,
            Side::Right => Side::Left,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Coorient {
    Inward,
    Outward,
}

impl Coorient {
    pub fn flip(self) -> Coorient {
        match self {
            Coorient::Inward => Coorient::Outward,
            Coorient::Outward => Coorient::Inward,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Coorient::Inward => "inward",
            Coorient::Outward => "outward",
        }
    }
}

/// The region a component is placed in.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Host {
    /// The unbounded region.
    Ambient,
    /// The face to the left of this dart.
    Face(DartId),
    /// The inside of a free circle.
    Circle(CircleId),
}

impl fmt::Display for Host {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Host::Ambient => f.write_str("outer"),
            Host::Face(d) => write!(f, "face:{d}"),
            Host::Circle(c) => write!(f, "circle:{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FreeCircle {
    pub host: Host,
    pub coorient: Coorient,
}

/// A global region of the slice plane.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionId {
    Ambient,
    /// A bounded local face of a map component, named by the least dart of
    /// its boundary orbit.
    Face(DartId),
    /// The inside of a free circle.
    Inner(CircleId),
}

impl fmt::Display for RegionId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RegionId::Ambient => f.write_str("outer"),
            RegionId::Face(d) => write!(f, "face:{d}"),
            RegionId::Inner(c) => write!(f, "circle:{c}"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Face {
    /// Least dart of the orbit.
    pub id: DartId,
    /// Boundary orbit starting at `id`.
    pub boundary: Vec<DartId>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Diagram {
    pub(crate) vertices: BTreeMap<VertexId, [DartId; 4]>,
    pub(crate) mates: BTreeMap<DartId, DartId>,
    pub(crate) sides: BTreeMap<DartId, Side>,
    pub(crate) circles: BTreeMap<CircleId, FreeCircle>,
    pub(crate) anchors: BTreeMap<DartId, Host>,
}

impl Diagram {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_vertex(&mut self, id: impl Into<VertexId>, darts: [&str; 4]) -> &mut Self {
        self.vertices.insert(id.into(), darts.map(DartId::from));
        self
    }

    /// Pairs `a` with `b`; the coorientation points to `side` when walking
    /// from `a` to `b`.
    pub fn add_edge(&mut self, a: &str, b: &str, side: Side) -> &mut Self {
        let (a, b) = (DartId::from(a), DartId::from(b));
        self.sides.insert(a.clone(), side);
        if a != b {
            self.sides.insert(b.clone(), side.flip());
        }
        self.mates.insert(a.clone(), b.clone());
        self.mates.insert(b, a);
        self
    }

    pub fn add_circle(&mut self, id: impl Into<CircleId>, host: Host, coorient: Coorient) -> &mut Self {
        self.circles.insert(id.into(), FreeCircle { host, coorient });
        self
    }

    /// Marks the left face of `dart` as the outer face of its component.
    pub fn set_anchor(&mut self, dart: &str, host: Host) -> &mut Self {
        self.anchors.insert(DartId::from(dart), host);
        self
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty() && self.circles.is_empty()
    }

    pub fn vertices(&self) -> &BTreeMap<VertexId, [DartId; 4]> {
        &self.vertices
    }

    pub fn circles(&self) -> &BTreeMap<CircleId, FreeCircle> {
        &self.circles
    }

    pub fn anchors(&self) -> &BTreeMap<DartId, Host> {
        &self.anchors
    }

    pub fn mate(&self, d: &DartId) -> Option<&DartId> {
        self.mates.get(d)
    }

    pub fn side(&self, d: &DartId) -> Option<Side> {
        self.sides.get(d).copied()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn edge_count(&self) -> usize {
        self.mates.len() / 2
    }

    /// Edges as `(first, second, side)` with `first < second`.
    pub fn edges(&self) -> Vec<(DartId, DartId, Side)> {
        self.mates
            .iter()
            .filter(|(a, b)| a <= b)
            .map(|(a, b)| (a.clone(), b.clone(), self.sides.get(a).copied().unwrap_or(Side::Left)))
            .collect()
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self)
    }

    /// Face orbits of the map part. Free circles contribute no faces here;
    /// see [`Diagram::regions`].
    pub fn faces(&self) -> Result<Vec<Face>> {
        Ok(self.topology()?.faces)
    }

    pub fn regions(&self) -> Result<Vec<RegionId>> {
        let topo = self.topology()?;
        topo.regions(self)
    }

    pub fn topology(&self) -> Result<Topology> {
        Topology::build(self)
    }
}

/// Position of a dart in its vertex.
#[derive(Clone, Debug)]
pub(crate) struct Slot {
    pub vertex: VertexId,
    pub index: usize,
}

#[derive(Clone, Debug)]
pub struct Component {
    pub darts: Vec<DartId>,
    pub vertices: Vec<VertexId>,
    pub faces: Vec<usize>,
    pub anchor: Option<DartId>,
}

/// Derived combinatorics of a structurally sound diagram.
#[derive(Clone, Debug)]
pub struct Topology {
    pub(crate) slots: BTreeMap<DartId, Slot>,
    pub(crate) face_index: BTreeMap<DartId, usize>,
    pub faces: Vec<Face>,
    pub(crate) component_of: BTreeMap<DartId, usize>,
    pub components: Vec<Component>,
}

impl Topology {
    fn build(d: &Diagram) -> Result<Topology> {
        let slots = structural_slots(d)?;
        // integer view; `structural_slots` guarantees that the darts with a
        // slot are exactly the paired ones
        let darts: Vec<&DartId> = d.mates.keys().collect();
        let at = |x: &DartId| darts.binary_search(&x).expect("validated dart");
        let n = darts.len();
        let mate: Vec<usize> = d.mates.values().map(at).collect();
        let mut vert_of = vec![0; n];
        let mut slot_of = vec![0; n];
        let mut around: Vec<[usize; 4]> = Vec::with_capacity(d.vertices.len());
        for (v, ds) in d.vertices.values().enumerate() {
            let ids = ds.each_ref().map(at);
            for (k, &i) in ids.iter().enumerate() {
                vert_of[i] = v;
                slot_of[i] = k;
            }
            around.push(ids);
        }
        let face_next = |i: usize| {
            let m = mate[i];
            around[vert_of[m]][(slot_of[m] + 3) % 4]
        };
        let mut face_id = vec![usize::MAX; n];
        let mut faces = Vec::new();
        for start in 0..n {
            if face_id[start] != usize::MAX {
                continue;
            }
            let idx = faces.len();
            let mut boundary = Vec::new();
            let mut cur = start;
            loop {
                face_id[cur] = idx;
                boundary.push(darts[cur].clone());
                cur = face_next(cur);
                if cur == start {
                    break;
                }
                if boundary.len() > n {
                    return Err(Error::structure("face traversal does not close"));
                }
            }
            // orbits are discovered from their least dart since indices follow key order
            faces.push(Face { id: darts[start].clone(), boundary });
        }
        let vertex_ids: Vec<&VertexId> = d.vertices.keys().collect();
        let mut comp_id = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if comp_id[start] != usize::MAX {
                continue;
            }
            let idx = components.len();
            let mut stack = vec![start];
            let mut members = Vec::new();
            comp_id[start] = idx;
            while let Some(x) = stack.pop() {
                members.push(x);
                for y in around[vert_of[x]].into_iter().chain([mate[x]]) {
                    if comp_id[y] == usize::MAX {
                        comp_id[y] = idx;
                        stack.push(y);
                    }
                }
            }
            members.sort_unstable();
            let mut verts: Vec<usize> = members.iter().map(|&i| vert_of[i]).collect();
            verts.sort_unstable();
            verts.dedup();
            let fs: BTreeSet<usize> = members.iter().map(|&i| face_id[i]).collect();
            components.push(Component {
                darts: members.iter().map(|&i| darts[i].clone()).collect(),
                vertices: verts.into_iter().map(|v| vertex_ids[v].clone()).collect(),
                faces: fs.into_iter().collect(),
                anchor: None,
            });
        }
        for a in d.anchors.keys() {
            if let Ok(i) = darts.binary_search(&a) {
                let c = comp_id[i];
                if components[c].anchor.is_none() {
                    components[c].anchor = Some(a.clone());
                }
            }
        }
        Ok(Topology {
            slots,
            face_index: darts.iter().zip(&face_id).map(|(x, &f)| ((*x).clone(), f)).collect(),
            faces,
            component_of: darts.iter().zip(&comp_id).map(|(x, &c)| ((*x).clone(), c)).collect(),
            components,
        })
    }

    pub(crate) fn rot(&self, d: &Diagram, x: &DartId, step: usize) -> DartId {
        let s = &self.slots[x];
        d.vertices[&s.vertex][(s.index + step) % 4].clone()
    }

    /// Counterclockwise successor at the same vertex.
    pub fn rot_next(&self, d: &Diagram, x: &DartId) -> DartId {
        self.rot(d, x, 1)
    }

    pub fn rot_prev(&self, d: &Diagram, x: &DartId) -> DartId {
        self.rot(d, x, 3)
    }

    /// The dart continuing the same strand through the vertex.
    pub fn opposite(&self, d: &Diagram, x: &DartId) -> DartId {
        self.rot(d, x, 2)
    }

    pub fn face_next(&self, d: &Diagram, x: &DartId) -> DartId {
        self.rot_prev(d, &d.mates[x])
    }

    pub fn vertex_of(&self, x: &DartId) -> &VertexId {
        &self.slots[x].vertex
    }

    pub fn face_of(&self, x: &DartId) -> &Face {
        &self.faces[self.face_index[x]]
    }

    pub fn face_index_of(&self, x: &DartId) -> usize {
        self.face_index[x]
    }

    pub fn component_of(&self, x: &DartId) -> usize {
        self.component_of[x]
    }

    pub fn face_by_id(&self, id: &DartId) -> Option<&Face> {
        self.face_index.get(id).map(|&i| &self.faces[i])
    }

    fn is_outer_face(&self, face: usize) -> Option<usize> {
        let first = &self.faces[face].boundary[0];
        let comp = self.component_of[first];
        let anchor = self.components[comp].anchor.as_ref()?;
        (self.face_index[anchor] == face).then_some(comp)
    }

    /// The global region a local face belongs to.
    pub fn region_of_face(&self, d: &Diagram, face: usize) -> Result<RegionId> {
        self.region_of_face_guarded(d, face, 0)
    }

    fn region_of_face_guarded(&self, d: &Diagram, face: usize, depth: usize) -> Result<RegionId> {
        if depth > d.anchors.len() + d.circles.len() + 1 {
            return Err(Error::structure("host nesting contains a cycle"));
        }
        match self.is_outer_face(face) {
            Some(comp) => {
                let anchor = self.components[comp].anchor.as_ref().expect("outer face implies anchor");
                let host = &d.anchors[anchor];
                self.region_of_host_guarded(d, host, depth + 1)
            }
            None => Ok(RegionId::Face(self.faces[face].id.clone())),
        }
    }

    pub fn region_of_dart(&self, d: &Diagram, x: &DartId) -> Result<RegionId> {
        self.region_of_face(d, self.face_index[x])
    }

    pub fn region_of_host(&self, d: &Diagram, host: &Host) -> Result<RegionId> {
        self.region_of_host_guarded(d, host, 0)
    }

    fn region_of_host_guarded(&self, d: &Diagram, host: &Host, depth: usize) -> Result<RegionId> {
        match host {
            Host::Ambient => Ok(RegionId::Ambient),
            Host::Circle(c) => {
                if d.circles.contains_key(c) {
                    Ok(RegionId::Inner(c.clone()))
                } else {
                    Err(Error::structure(format!("unknown host circle {c}")))
                }
            }
            Host::Face(x) => match self.face_index.get(x) {
                Some(&f) => self.region_of_face_guarded(d, f, depth + 1),
                None => Err(Error::structure(format!("unknown host dart {x}"))),
            },
        }
    }

    /// Region holding the outside of a free circle.
    pub fn region_outside_circle(&self, d: &Diagram, c: &CircleId) -> Result<RegionId> {
        let circle = d
            .circles
            .get(c)
            .ok_or_else(|| Error::structure(format!("unknown circle {c}")))?;
        self.region_of_host(d, &circle.host)
    }

    pub fn regions(&self, d: &Diagram) -> Result<Vec<RegionId>> {
        let mut out = BTreeSet::new();
        out.insert(RegionId::Ambient);
        for i in 0..self.faces.len() {
            out.insert(self.region_of_face(d, i)?);
        }
        for c in d.circles.keys() {
            out.insert(RegionId::Inner(c.clone()));
        }
        Ok(out.into_iter().collect())
    }

    /// Regions at the four corners of a vertex, in slot order: corner `k`
    /// lies between darts `k` and `k + 1`.
    pub fn corners(&self, d: &Diagram, v: &VertexId) -> Result<[RegionId; 4]> {
        let darts = d
            .vertices
            .get(v)
            .ok_or_else(|| Error::pre(format!("unknown vertex {v}")))?;
        let mut out: Vec<RegionId> = Vec::with_capacity(4);
        for x in darts {
            out.push(self.region_of_dart(d, x)?);
        }
        Ok(out.try_into().expect("four corners"))
    }
}

fn structural_slots(d: &Diagram) -> Result<BTreeMap<DartId, Slot>> {
    let mut slots = BTreeMap::new();
    for (v, darts) in &d.vertices {
        for (i, x) in darts.iter().enumerate() {
            if slots
                .insert(x.clone(), Slot { vertex: v.clone(), index: i })
                .is_some()
            {
                return Err(Error::structure(format!("dart {x} occupies two corner slots")));
            }
        }
    }
    for (a, b) in &d.mates {
        if a == b {
            return Err(Error::structure(format!("edge pairing has fixed point {a}")));
        }
        if d.mates.get(b) != Some(a) {
            return Err(Error::structure(format!("edge pairing is not an involution at {a}")));
        }
        if !slots.contains_key(a) {
            return Err(Error::structure(format!("dart {a} has no vertex")));
        }
        if !d.sides.contains_key(a) {
            return Err(Error::structure(format!("dart {a} has no coorientation")));
        }
    }
    for x in slots.keys() {
        if !d.mates.contains_key(x) {
            return Err(Error::structure(format!("dart {x} is not paired")));
        }
    }
    Ok(slots)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "detail", rename_all = "snake_case")]
pub enum Violation {
    Degree(String),
    Involution(String),
    StrandConsistency(String),
    Sphericity(String),
    OuterFace(String),
    CircleForest(String),
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let (k, m) = match self {
            Violation::Degree(m) => ("degree", m),
            Violation::Involution(m) => ("involution", m),
            Violation::StrandConsistency(m) => ("strand consistency", m),
            Violation::Sphericity(m) => ("sphericity", m),
            Violation::OuterFace(m) => ("outer face", m),
            Violation::CircleForest(m) => ("circle forest", m),
        };
        write!(f, "{k}: {m}")
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn into_result(self) -> Result<()> {
        match self.violations.first() {
            None => Ok(()),
            Some(v) => Err(Error::Structure(v.to_string())),
        }
    }
}

fn validate(d: &Diagram) -> ValidationReport {
    let mut out = Vec::new();

    let mut owner: BTreeMap<&DartId, &VertexId> = BTreeMap::new();
    for (v, darts) in &d.vertices {
        let distinct: BTreeSet<&DartId> = darts.iter().collect();
        if distinct.len() != 4 {
            out.push(Violation::Degree(format!("vertex {v} does not have 4 distinct darts")));
        }
        for x in darts {
            if let Some(w) = owner.insert(x, v) {
                if w != v {
                    out.push(Violation::Degree(format!("dart {x} appears at vertices {w} and {v}")));
                }
            }
        }
    }
    for (a, b) in &d.mates {
        if a == b {
            out.push(Violation::Involution(format!("edge pairing has fixed point {a}")));
        } else if d.mates.get(b) != Some(a) {
            out.push(Violation::Involution(format!("pairing of {a} is not symmetric")));
        }
        if !owner.contains_key(a) {
            out.push(Violation::Degree(format!("dart {a} belongs to no vertex")));
        }
    }
    for x in owner.keys() {
        if !d.mates.contains_key(*x) {
            out.push(Violation::Involution(format!("dart {x} is not paired")));
        }
    }
    if !out.is_empty() {
        return ValidationReport { violations: out };
    }
    let topo = match Topology::build(d) {
        Ok(t) => t,
        Err(e) => {
            out.push(Violation::Involution(e.to_string()));
            return ValidationReport { violations: out };
        }
    };

    for (a, b) in &d.mates {
        let (sa, sb) = (d.sides[a], d.sides[b]);
        if sb != sa.flip() {
            out.push(Violation::StrandConsistency(format!(
                "edge {a}-{b} stores contradictory sides"
            )));
            continue;
        }
        // continuing straight through the far vertex keeps the coorientation side
        let next = topo.opposite(d, b);
        if d.sides[&next] != sa {
            out.push(Violation::StrandConsistency(format!(
                "coorientation flips between {a}->{b} and {next}"
            )));
        }
    }

    for (i, comp) in topo.components.iter().enumerate() {
        let v = comp.vertices.len() as i64;
        let e = (comp.darts.len() / 2) as i64;
        let f = comp.faces.len() as i64;
        if v - e + f != 2 {
            out.push(Violation::Sphericity(format!(
                "component {i} (from dart {}) has V-E+F = {}",
                comp.darts[0],
                v - e + f
            )));
        }
        match &comp.anchor {
            None => out.push(Violation::OuterFace(format!(
                "component containing dart {} has no outer face",
                comp.darts[0]
            ))),
            Some(a) => {
                let n = d.anchors.keys().filter(|x| topo.component_of.get(*x) == Some(&i)).count();
                if n > 1 {
                    out.push(Violation::OuterFace(format!(
                        "component containing dart {a} has {n} outer faces"
                    )));
                }
            }
        }
    }
    for (a, host) in &d.anchors {
        if !topo.component_of.contains_key(a) {
            out.push(Violation::OuterFace(format!("outer dart {a} does not exist")));
            continue;
        }
        if let Host::Face(x) = host {
            match topo.component_of.get(x) {
                None => out.push(Violation::OuterFace(format!("host dart {x} does not exist"))),
                Some(c) if *c == topo.component_of[a] => out.push(Violation::OuterFace(format!(
                    "component of {a} is hosted by its own face"
                ))),
                _ => {}
            }
        }
        if let Host::Circle(c) = host {
            if !d.circles.contains_key(c) {
                out.push(Violation::OuterFace(format!("host circle {c} does not exist")));
            }
        }
    }
    for (c, circle) in &d.circles {
        match &circle.host {
            Host::Circle(p) if p == c => {
                out.push(Violation::CircleForest(format!("circle {c} hosts itself")))
            }
            Host::Circle(p) if !d.circles.contains_key(p) => {
                out.push(Violation::CircleForest(format!("circle {c} has unknown parent {p}")))
            }
            Host::Face(x) if !topo.face_index.contains_key(x) => {
                out.push(Violation::CircleForest(format!("circle {c} has unknown host dart {x}")))
            }
            _ => {}
        }
    }
    if out.is_empty() {
        if let Err(e) = topo.regions(d) {
            out.push(Violation::CircleForest(e.to_string()));
        }
        for c in d.circles.keys() {
            if let Err(e) = topo.region_outside_circle(d, c) {
                out.push(Violation::CircleForest(e.to_string()));
            }
        }
    }
    ValidationReport { violations: out }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    /// Two circles crossing twice. Circle A runs a0 -> b0 -> a0 through the
    /// crossings, circle B likewise; both coorientations point inward.
    pub(crate) fn two_circles() -> Diagram {
        let mut d = Diagram::new();
        // at x: A+ , B+ , A- , B- ; at y: A+ , B- , A- , B+
        d.add_vertex("x", ["x0", "x1", "x2", "x3"]);
        d.add_vertex("y", ["y0", "y1", "y2", "y3"]);
        d.add_edge("x0", "y2", Side::Left);
        d.add_edge("y0", "x2", Side::Left);
        d.add_edge("x1", "y1", Side::Left);
        d.add_edge("y3", "x3", Side::Left);
        d.set_anchor("y2", Host::Ambient);
        d
    }

    #[test]
    fn empty_diagram_passes_and_has_one_region() {
        let d = Diagram::new();
        assert!(d.validate().is_ok());
        assert_eq!(d.regions().unwrap(), vec![RegionId::Ambient]);
        assert!(d.faces().unwrap().is_empty());
    }

    #[test]
    fn embedded_circle_has_two_regions() {
        let mut d = Diagram::new();
        d.add_circle("c", Host::Ambient, Coorient::Inward);
        assert!(d.validate().is_ok());
        assert_eq!(d.regions().unwrap().len(), 2);
    }

    #[test]
    fn fixed_point_is_reported() {
        let mut d = Diagram::new();
        d.add_vertex("v", ["a", "b", "c", "e"]);
        d.add_edge("a", "a", Side::Left);
        d.add_edge("b", "c", Side::Left);
        let r = d.validate();
        assert!(r.violations.iter().any(|v| matches!(v, Violation::Involution(m) if m.contains("fixed point"))));
    }

    #[test]
    fn two_circles_have_four_faces() {
        let d = two_circles();
        let r = d.validate();
        assert!(r.is_ok(), "{:?}", r);
        assert_eq!(d.faces().unwrap().len(), 4);
        assert_eq!(d.regions().unwrap().len(), 4);
    }

    #[test]
    fn flipped_edge_breaks_strand_consistency() {
        let mut d = two_circles();
        d.add_edge("x0", "y2", Side::Right);
        let r = d.validate();
        assert!(r
            .violations
            .iter()
            .any(|v| matches!(v, Violation::StrandConsistency(_))));
    }

    #[test]
    fn missing_anchor_is_reported() {
        let mut d = two_circles();
        d.anchors.clear();
        assert!(d
            .validate()
            .violations
            .iter()
            .any(|v| matches!(v, Violation::OuterFace(_))));
    }
}
