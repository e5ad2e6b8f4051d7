//! Canonical forms and isomorphism of diagrams.
//!
//! A map component is relabelled breadth-first from a start dart, exploring
//! the counterclockwise successor and then the mate of each dart; the start
//! dart giving the least code wins. Nested components are folded into the
//! code of the face that hosts them, so two diagrams are isomorphic exactly
//! when their canonical codes agree.

use std::collections::{BTreeMap, VecDeque};

use crate::diagram::{Diagram, RegionId, Side, Topology};
use crate::error::Result;
use crate::ids::{CircleId, DartId};

/// Result of canonical labelling: the code and the canonical name of every
/// dart and circle.
#[derive(Clone, Debug)]
pub struct Canonical {
    pub code: String,
    pub darts: BTreeMap<DartId, String>,
    pub circles: BTreeMap<CircleId, String>,
}

#[derive(Clone, Debug)]
enum Node {
    Map { comp: usize },
    Circle(CircleId),
}

struct Ctx<'a> {
    d: &'a Diagram,
    topo: Topology,
    /// children (map components and circles) per region
    children: BTreeMap<RegionId, Vec<Node>>,
}

/// A fully labelled subtree.
struct Coded {
    code: String,
    /// local names relative to the subtree root
    darts: Vec<(DartId, String)>,
    circles: Vec<(CircleId, String)>,
}

pub fn canonical(d: &Diagram) -> Result<Canonical> {
    let topo = d.topology()?;
    let mut children: BTreeMap<RegionId, Vec<Node>> = BTreeMap::new();
    for (i, comp) in topo.components.iter().enumerate() {
        let anchor = comp
            .anchor
            .as_ref()
            .ok_or_else(|| crate::Error::structure(format!("component of {} has no outer face", comp.darts[0])))?;
        let region = topo.region_of_host(d, &d.anchors[anchor])?;
        children.entry(region).or_default().push(Node::Map { comp: i });
    }
    for (c, circle) in &d.circles {
        let region = topo.region_of_host(d, &circle.host)?;
        children.entry(region).or_default().push(Node::Circle(c.clone()));
    }
    let ctx = Ctx { d, topo, children };
    let root = ctx.code_region(&RegionId::Ambient)?;
    Ok(Canonical {
        code: root.code,
        darts: root.darts.into_iter().collect(),
        circles: root.circles.into_iter().collect(),
    })
}

impl Ctx<'_> {
    fn code_region(&self, region: &RegionId) -> Result<Coded> {
        let mut kids = Vec::new();
        for node in self.children.get(region).map(Vec::as_slice).unwrap_or(&[]) {
            kids.push(match node {
                Node::Map { comp } => self.code_map(*comp)?,
                Node::Circle(c) => self.code_circle(c)?,
            });
        }
        kids.sort_by(|a, b| a.code.cmp(&b.code));
        let mut code = String::from("[");
        let mut darts = Vec::new();
        let mut circles = Vec::new();
        for (k, kid) in kids.into_iter().enumerate() {
            if k > 0 {
                code.push(',');
            }
            code.push_str(&kid.code);
            darts.extend(kid.darts.into_iter().map(|(x, n)| (x, format!("{k}/{n}"))));
            circles.extend(kid.circles.into_iter().map(|(x, n)| (x, format!("{k}/{n}"))));
        }
        code.push(']');
        Ok(Coded { code, darts, circles })
    }

    fn code_circle(&self, c: &CircleId) -> Result<Coded> {
        let inner = self.code_region(&RegionId::Inner(c.clone()))?;
        let co = self.d.circles[c].coorient.keyword();
        let mut circles = vec![(c.clone(), "o".to_owned())];
        circles.extend(inner.circles.into_iter().map(|(x, n)| (x, format!("o{n}"))));
        let darts = inner.darts.into_iter().map(|(x, n)| (x, format!("o{n}"))).collect();
        Ok(Coded { code: format!("O{co}{}", inner.code), darts, circles })
    }

    fn code_map(&self, comp: usize) -> Result<Coded> {
        let c = &self.topo.components[comp];
        let anchor = c.anchor.clone().expect("checked in canonical()");
        let outer_face = self.topo.face_index_of(&anchor);
        // nested subtrees per local face, coded once
        let mut face_kids: BTreeMap<usize, Coded> = BTreeMap::new();
        for &f in &c.faces {
            if f == outer_face {
                continue;
            }
            let region = RegionId::Face(self.topo.faces[f].id.clone());
            if self.children.contains_key(&region) {
                face_kids.insert(f, self.code_region(&region)?);
            }
        }
        // integer view of the component
        let index: BTreeMap<&DartId, usize> = c.darts.iter().enumerate().map(|(i, x)| (x, i)).collect();
        let rot: Vec<usize> = c.darts.iter().map(|x| index[&self.topo.rot_next(self.d, x)]).collect();
        let mate: Vec<usize> = c.darts.iter().map(|x| index[&self.d.mates[x]]).collect();
        let left: Vec<bool> = c.darts.iter().map(|x| self.d.sides[x] == Side::Left).collect();
        let faces: Vec<(usize, Vec<usize>)> = c
            .faces
            .iter()
            .map(|&f| (f, self.topo.faces[f].boundary.iter().map(|x| index[x]).collect()))
            .collect();
        let outer: Vec<usize> = faces.iter().find(|(f, _)| *f == outer_face).expect("outer face").1.clone();
        let mut best: Option<(String, Vec<usize>)> = None;
        for &start in &outer {
            let labels = bfs(&rot, &mate, start);
            let code = map_code(&labels, &rot, &mate, &left, &faces, outer_face, &face_kids);
            if best.as_ref().map_or(true, |(b, _)| code < *b) {
                best = Some((code, labels));
            }
        }
        let (code, lab) = best.expect("component has darts");
        let labels: BTreeMap<DartId, usize> = c.darts.iter().enumerate().map(|(i, x)| (x.clone(), lab[i])).collect();
        let mut darts: Vec<(DartId, String)> = labels.iter().map(|(x, l)| (x.clone(), format!("d{l}"))).collect();
        let mut circles = Vec::new();
        for (f, kid) in face_kids {
            let tag = self.topo.faces[f].boundary.iter().map(|x| labels[x]).min().expect("face");
            darts.extend(kid.darts.into_iter().map(|(x, n)| (x, format!("f{tag}/{n}"))));
            circles.extend(kid.circles.into_iter().map(|(x, n)| (x, format!("f{tag}/{n}"))));
        }
        Ok(Coded { code, darts, circles })
    }
}

fn bfs(rot: &[usize], mate: &[usize], start: usize) -> Vec<usize> {
    let mut labels = vec![usize::MAX; rot.len()];
    let mut queue = VecDeque::new();
    labels[start] = 0;
    let mut next = 1;
    queue.push_back(start);
    while let Some(x) = queue.pop_front() {
        for y in [rot[x], mate[x]] {
            if labels[y] == usize::MAX {
                labels[y] = next;
                next += 1;
                queue.push_back(y);
            }
        }
    }
    labels
}

fn map_code(
    labels: &[usize],
    rot: &[usize],
    mate: &[usize],
    left: &[bool],
    faces: &[(usize, Vec<usize>)],
    outer_face: usize,
    face_kids: &BTreeMap<usize, Coded>,
) -> String {
    use std::fmt::Write as _;
    let mut order = vec![0; labels.len()];
    for (i, &l) in labels.iter().enumerate() {
        order[l] = i;
    }
    let mut code = String::from("M(");
    for x in order {
        let _ = write!(code, "{}.{}{};", labels[rot[x]], labels[mate[x]], if left[x] { 'l' } else { 'r' });
    }
    let min_label = |f: usize| {
        let b = &faces.iter().find(|(g, _)| *g == f).expect("face").1;
        b.iter().map(|&x| labels[x]).min().expect("face")
    };
    let _ = write!(code, ")o{}", min_label(outer_face));
    let mut nested: Vec<(usize, &str)> = face_kids.iter().map(|(f, k)| (min_label(*f), k.code.as_str())).collect();
    nested.sort();
    for (tag, kid) in nested {
        let _ = write!(code, "f{tag}{kid}");
    }
    code
}

pub fn canonical_code(d: &Diagram) -> Result<String> {
    Ok(canonical(d)?.code)
}

pub fn isomorphic(a: &Diagram, b: &Diagram) -> bool {
    match (canonical(a), canonical(b)) {
        (Ok(x), Ok(y)) => x.code == y.code,
        _ => false,
    }
}

/// A label-preserving bijection from the darts and circles of `a` to those
/// of `b`, if the diagrams are isomorphic.
#[derive(Clone, Debug, Default)]
pub struct Isomorphism {
    pub darts: BTreeMap<DartId, DartId>,
    pub circles: BTreeMap<CircleId, CircleId>,
}

pub fn isomorphism(a: &Diagram, b: &Diagram) -> Result<Option<Isomorphism>> {
    Ok(isomorphism_of(&canonical(a)?, &canonical(b)?))
}

pub(crate) fn isomorphism_of(ca: &Canonical, cb: &Canonical) -> Option<Isomorphism> {
    if ca.code != cb.code {
        return None;
    }
    let inv_d: BTreeMap<&String, &DartId> = cb.darts.iter().map(|(k, v)| (v, k)).collect();
    let inv_c: BTreeMap<&String, &CircleId> = cb.circles.iter().map(|(k, v)| (v, k)).collect();
    let darts = ca.darts.iter().map(|(x, n)| (x.clone(), inv_d[n].clone())).collect();
    let circles = ca.circles.iter().map(|(x, n)| (x.clone(), inv_c[n].clone())).collect();
    Some(Isomorphism { darts, circles })
}

/// Renames every vertex, dart and circle to its canonical name.
pub fn relabel(d: &Diagram) -> Result<Diagram> {
    let can = canonical(d)?;
    let dn = |x: &DartId| DartId::new(can.darts[x].clone());
    let cn = |c: &CircleId| CircleId::new(format!("c{}", can.circles[c]));
    let mut out = Diagram::new();
    let topo = d.topology()?;
    for darts in d.vertices.values() {
        let names: Vec<DartId> = darts.iter().map(dn).collect();
        let k = (0..4).min_by(|&i, &j| names[i].cmp(&names[j])).expect("four");
        let rotated: [DartId; 4] = std::array::from_fn(|i| names[(k + i) % 4].clone());
        out.vertices.insert(crate::ids::VertexId::new(format!("v{}", rotated[0])), rotated);
    }
    for (x, y) in &d.mates {
        out.mates.insert(dn(x), dn(y));
        out.sides.insert(dn(x), d.sides[x]);
    }
    let host = |h: &crate::diagram::Host| -> crate::diagram::Host {
        match h {
            crate::diagram::Host::Ambient => crate::diagram::Host::Ambient,
            crate::diagram::Host::Face(x) => {
                let f = topo.face_of(x);
                let m = f.boundary.iter().map(dn).min().expect("face");
                crate::diagram::Host::Face(m)
            }
            crate::diagram::Host::Circle(c) => crate::diagram::Host::Circle(cn(c)),
        }
    };
    for (c, circle) in &d.circles {
        out.circles.insert(
            cn(c),
            crate::diagram::FreeCircle { host: host(&circle.host), coorient: circle.coorient },
        );
    }
    for (x, h) in &d.anchors {
        let f = topo.face_of(x);
        let m = f.boundary.iter().map(dn).min().expect("face");
        out.anchors.insert(m, host(h));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::tests::two_circles;
    use crate::diagram::{Coorient, Host};

    #[test]
    fn renaming_preserves_code() {
        let d = two_circles();
        let r = relabel(&d).unwrap();
        assert!(r.validate().is_ok(), "{:?}", r.validate());
        assert_eq!(canonical_code(&d).unwrap(), canonical_code(&r).unwrap());
        let iso = isomorphism(&d, &r).unwrap().unwrap();
        assert_eq!(iso.darts.len(), 8);
    }

    #[test]
    fn coorientation_and_nesting_are_distinguished() {
        let mut a = Diagram::new();
        a.add_circle("c", Host::Ambient, Coorient::Inward);
        let mut b = Diagram::new();
        b.add_circle("c", Host::Ambient, Coorient::Outward);
        assert!(!isomorphic(&a, &b));
        let mut nested = Diagram::new();
        nested.add_circle("p", Host::Ambient, Coorient::Inward);
        nested.add_circle("q", Host::Circle("p".into()), Coorient::Inward);
        let mut apart = Diagram::new();
        apart.add_circle("p", Host::Ambient, Coorient::Inward);
        apart.add_circle("q", Host::Ambient, Coorient::Inward);
        assert!(!isomorphic(&nested, &apart));
        let mut renamed = Diagram::new();
        renamed.add_circle("z", Host::Ambient, Coorient::Inward);
        renamed.add_circle("y", Host::Circle("z".into()), Coorient::Inward);
        assert!(isomorphic(&nested, &renamed));
    }

    #[test]
    fn outer_face_choice_matters() {
        let a = two_circles();
        let mut b = two_circles();
        b.anchors.clear();
        // the lens instead of the outside
        b.set_anchor("x0", Host::Ambient);
        assert!(b.validate().is_ok());
        let lens = b.topology().unwrap().face_of(&DartId::from("x0")).boundary.len();
        assert_eq!(lens, 2);
        // all four faces are bigons; swapping the unbounded face to a lune is
        // still isomorphic only if the structure is symmetric, which it is not
        // for coorientations all pointing inward
        assert!(!isomorphic(&a, &b));
    }
}
