//! Triangle moves on diagrams.

use std::collections::{BTreeMap, BTreeSet};

use crate::diagram::{Diagram, Host, Side, Topology};
use crate::error::{Error, Result};
use crate::ids::{DartId, VertexId};

/// A bounded triangular face whose three strands can slide across each other.
#[derive(Clone, Debug)]
pub struct Triangle {
    /// Boundary darts `a_0, a_1, a_2`; `a_i` leaves vertex `u_i` towards
    /// `u_{i+1}` with the triangle on its left.
    pub darts: [DartId; 3],
    pub vertices: [VertexId; 3],
}

/// Resolves a face given by any dart of its boundary and checks that it is
/// a movable triangle.
pub fn triangle(d: &Diagram, face: &DartId) -> Result<Triangle> {
    let topo = d.topology()?;
    triangle_in(d, &topo, face)
}

pub(crate) fn triangle_in(d: &Diagram, topo: &Topology, face: &DartId) -> Result<Triangle> {
    if !d.mates.contains_key(face) {
        return Err(Error::pre(format!("unknown face dart {face}")));
    }
    let f = topo.face_of(face);
    if f.boundary.len() != 3 {
        return Err(Error::pre(format!(
            "face {} has {} sides, not a triangle",
            f.id,
            f.boundary.len()
        )));
    }
    let darts: [DartId; 3] = f.boundary.clone().try_into().expect("three darts");
    let vertices = darts.clone().map(|x| topo.vertex_of(&x).clone());
    let distinct: BTreeSet<&VertexId> = vertices.iter().collect();
    if distinct.len() != 3 {
        return Err(Error::pre(format!("face {} is a degenerate triangle (repeated vertex)", f.id)));
    }
    let edges: BTreeSet<(DartId, DartId)> = darts
        .iter()
        .map(|a| {
            let b = d.mates[a].clone();
            if *a < b { (a.clone(), b) } else { (b, a.clone()) }
        })
        .collect();
    if edges.len() != 3 {
        return Err(Error::pre(format!("face {} repeats an edge", f.id)));
    }
    let fi = topo.face_index_of(face);
    let comp = topo.component_of(face);
    if let Some(anchor) = &topo.components[comp].anchor {
        if topo.face_index_of(anchor) == fi {
            return Err(Error::pre(format!("face {} is the outer face of its component", f.id)));
        }
    }
    let hosts_here = d
        .anchors
        .values()
        .chain(d.circles.values().map(|c| &c.host))
        .any(|h| matches!(h, Host::Face(x) if topo.face_index.get(x) == Some(&fi)));
    if hosts_here {
        return Err(Error::pre(format!("face {} contains nested components", f.id)));
    }
    Ok(Triangle { darts, vertices })
}

/// The triangle whose corners are exactly the given vertices.
pub fn find_triangle(d: &Diagram, vertices: &[VertexId; 3]) -> Result<DartId> {
    let topo = d.topology()?;
    let want: BTreeSet<&VertexId> = vertices.iter().collect();
    let mut hits = topo.faces.iter().filter(|f| {
        f.boundary.len() == 3 && f.boundary.iter().map(|x| topo.vertex_of(x)).collect::<BTreeSet<_>>() == want
    });
    let first = hits
        .next()
        .ok_or_else(|| Error::pre(format!("no triangle face on vertices {vertices:?}")))?;
    if hits.next().is_some() {
        return Err(Error::pre(format!("several triangle faces on vertices {vertices:?}")));
    }
    Ok(first.id.clone())
}

/// Number of boundary edges of the triangle whose coorientation points away
/// from it.
pub fn triangle_outward_count(d: &Diagram, face: &DartId) -> Result<u8> {
    let t = triangle(d, face)?;
    Ok(outward_count(d, &t))
}

pub(crate) fn outward_count(d: &Diagram, t: &Triangle) -> u8 {
    // the face is on the left of every a_i, so `Right` points out of it
    t.darts.iter().filter(|a| d.sides[*a] == Side::Right).count() as u8
}

/// Slides the three strands of a triangular face across one another.
///
/// Every dart keeps its vertex, slot and coorientation; only the pairing
/// changes. The new vanishing triangle is the left face of `opp(a_0)`.
pub fn apply_omega3(d: &Diagram, face: &DartId) -> Result<(Diagram, DartId)> {
    let topo = d.topology()?;
    let t = triangle_in(d, &topo, face)?;
    let a = &t.darts;
    let b: Vec<DartId> = a.iter().map(|x| d.mates[x].clone()).collect();
    let opp_a: Vec<DartId> = a.iter().map(|x| topo.opposite(d, x)).collect();
    let opp_b: Vec<DartId> = b.iter().map(|x| topo.opposite(d, x)).collect();
    let local: BTreeSet<DartId> = a.iter().chain(&b).chain(&opp_a).chain(&opp_b).cloned().collect();
    if local.len() != 12 {
        return Err(Error::Internal("triangle darts are not distinct".into()));
    }
    let ext_in: Vec<DartId> = opp_a.iter().map(|x| d.mates[x].clone()).collect();
    let ext_out: Vec<DartId> = opp_b.iter().map(|x| d.mates[x].clone()).collect();
    if ext_in.iter().chain(&ext_out).any(|x| local.contains(x)) {
        return Err(Error::pre(format!(
            "face {face}: an outside edge joins two corners of the triangle"
        )));
    }

    let mut out = d.clone();
    for i in 0..3 {
        let next = (i + 1) % 3;
        // a_{i+1} now leaves towards where strand i+1 used to exit
        pair(&mut out, &a[next], &ext_out[next]);
        // b_i now points back to where strand i used to enter
        pair(&mut out, &b[i], &ext_in[i]);
        // inner edge of strand i, traversed backwards
        pair(&mut out, &opp_a[i], &opp_b[i]);
    }

    remap_hosts(d, &topo, &mut out, &local)?;
    Ok((out, opp_a[0].clone()))
}

fn pair(d: &mut Diagram, x: &DartId, y: &DartId) {
    d.mates.insert(x.clone(), y.clone());
    d.mates.insert(y.clone(), x.clone());
}

/// Moves host and anchor references off darts whose left face changed to a
/// dart of the same old face that was not touched.
pub(crate) fn remap_hosts(old: &Diagram, topo: &Topology, new: &mut Diagram, touched: &BTreeSet<DartId>) -> Result<()> {
    let pick = |x: &DartId| -> Result<DartId> {
        if !touched.contains(x) {
            return Ok(x.clone());
        }
        topo.face_of(x)
            .boundary
            .iter()
            .find(|y| !touched.contains(*y) && new.mates.contains_key(*y))
            .cloned()
            .ok_or_else(|| Error::pre(format!("face of {x} has no stable dart to keep its references")))
    };
    let mut anchors = BTreeMap::new();
    for (x, host) in &old.anchors {
        let key = pick(x)?;
        let host = match host {
            Host::Face(y) => Host::Face(pick(y)?),
            h => h.clone(),
        };
        anchors.insert(key, host);
    }
    new.anchors = anchors;
    for c in new.circles.values_mut() {
        if let Host::Face(y) = &c.host {
            c.host = Host::Face(pick(y)?);
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphic;
    use crate::constructions::{triangle_gadget, Ambient, GadgetSpec, Orientation};

    fn gadget(pattern: [Orientation; 3]) -> (Diagram, DartId) {
        let g = triangle_gadget(&GadgetSpec::omega3(pattern, Ambient::Venn)).unwrap();
        (g.before, g.face)
    }

    #[test]
    fn outward_count_matches_pattern() {
        use Orientation::*;
        assert_eq!(triangle_outward_count(&gadget([In, In, In]).0, &gadget([In, In, In]).1).unwrap(), 0);
        let (d, f) = gadget([Out, Out, Out]);
        assert_eq!(triangle_outward_count(&d, &f).unwrap(), 3);
        let (d, f) = gadget([Out, In, Out]);
        assert_eq!(triangle_outward_count(&d, &f).unwrap(), 2);
    }

    #[test]
    fn move_flips_outward_count_and_is_involutive() {
        use Orientation::*;
        for p in [[In, In, In], [Out, In, Out], [Out, In, In], [Out, Out, Out]] {
            let (d, f) = gadget(p);
            let j = triangle_outward_count(&d, &f).unwrap();
            let (after, f2) = apply_omega3(&d, &f).unwrap();
            assert!(after.validate().is_ok(), "{:?}", after.validate());
            assert_eq!(triangle_outward_count(&after, &f2).unwrap(), 3 - j);
            let (back, _) = apply_omega3(&after, &f2).unwrap();
            assert!(isomorphic(&back, &d));
            assert_eq!(back, d);
        }
    }

    #[test]
    fn non_triangle_is_rejected() {
        let d = crate::diagram::tests::two_circles();
        let err = apply_omega3(&d, &DartId::from("x0")).unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

}
