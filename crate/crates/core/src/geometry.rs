//! Diagrams of arrangements of round circles in the plane.
//!
//! Vertex `x{i}_{j}{p|m}` is the crossing of circles `i < j` lying to the
//! left (`p`) or right (`m`) of the line from centre `i` to centre `j`; its
//! darts are `<vertex>.0 ..= <vertex>.3` counterclockwise, slot 0 being the
//! counterclockwise tangent of circle `i`. Crossing-free circle `i` is free
//! circle `c{i}`.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use crate::diagram::{Coorient, Diagram, Host, Side};
use crate::error::{Error, Result};
use crate::ids::{CircleId, DartId, VertexId};

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Circle {
    pub cx: f64,
    pub cy: f64,
    pub r: f64,
    pub coorient: Coorient,
}

impl Circle {
    pub fn new(cx: f64, cy: f64, r: f64, coorient: Coorient) -> Self {
        Self { cx, cy, r, coorient }
    }

    fn contains(&self, x: f64, y: f64) -> bool {
        (x - self.cx).hypot(y - self.cy) < self.r
    }

    fn angle_of(&self, x: f64, y: f64) -> f64 {
        (y - self.cy).atan2(x - self.cx).rem_euclid(TAU)
    }
}

/// One crossing on a circle, seen from that circle.
#[derive(Clone, Debug)]
pub struct ArcPoint {
    pub angle: f64,
    pub vertex: VertexId,
    /// Dart leaving counterclockwise along the circle.
    pub forward: DartId,
    /// Dart leaving clockwise along the circle.
    pub backward: DartId,
}

/// Where a point of the plane lies relative to an arrangement.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Location {
    /// Left face of this dart.
    Face(DartId),
    InsideCircle(usize),
    /// Outside a free circle, i.e. in that circle's host region.
    OutsideCircle(usize),
    Ambient,
}

#[derive(Clone, Debug)]
pub struct Arrangement {
    pub circles: Vec<Circle>,
    pub diagram: Diagram,
    /// Crossings of each circle sorted by angle in `[0, 2π)`.
    pub arcs: Vec<Vec<ArcPoint>>,
    pub positions: BTreeMap<VertexId, (f64, f64)>,
    /// Map component (or free circle) index per circle.
    pub component: Vec<usize>,
    /// Minimum distance between distinct crossings and between circles and
    /// crossings; small values flag near-degenerate input.
    pub clearance: f64,
    /// Outer-face anchor dart per map component.
    pub anchor_of: BTreeMap<usize, DartId>,
}

pub fn vertex_name(i: usize, j: usize, left: bool) -> VertexId {
    VertexId::new(format!("x{i}_{j}{}", if left { 'p' } else { 'm' }))
}

pub fn circle_name(i: usize) -> CircleId {
    CircleId::new(format!("c{i}"))
}

fn dart(v: &VertexId, k: usize) -> DartId {
    DartId::new(format!("{v}.{k}"))
}

impl Arrangement {
    pub fn build(circles: &[Circle]) -> Result<Arrangement> {
        let n = circles.len();
        let mut arcs: Vec<Vec<ArcPoint>> = vec![Vec::new(); n];
        let mut positions = BTreeMap::new();
        let mut d = Diagram::new();
        let mut parent: Vec<usize> = (0..n).collect();
        let mut clearance = f64::INFINITY;

        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }

        for i in 0..n {
            for j in i + 1..n {
                let (a, b) = (circles[i], circles[j]);
                let dx = b.cx - a.cx;
                let dy = b.cy - a.cy;
                let dist = dx.hypot(dy);
                clearance = clearance
                    .min((dist - (a.r + b.r)).abs())
                    .min((dist - (a.r - b.r).abs()).abs());
                if dist >= a.r + b.r || dist <= (a.r - b.r).abs() {
                    continue;
                }
                let along = (a.r * a.r - b.r * b.r + dist * dist) / (2.0 * dist);
                let h = (a.r * a.r - along * along).max(0.0).sqrt();
                let (ux, uy) = (dx / dist, dy / dist);
                let (mx, my) = (a.cx + along * ux, a.cy + along * uy);
                for left in [true, false] {
                    let s = if left { 1.0 } else { -1.0 };
                    let (px, py) = (mx - s * h * uy, my + s * h * ux);
                    let v = vertex_name(i, j, left);
                    // counterclockwise tangents
                    let ta = (-(py - a.cy) / a.r, (px - a.cx) / a.r);
                    let tb = (-(py - b.cy) / b.r, (px - b.cx) / b.r);
                    let dirs = [
                        (0usize, ta.1.atan2(ta.0)),
                        (1, tb.1.atan2(tb.0)),
                        (2, (-ta.1).atan2(-ta.0)),
                        (3, (-tb.1).atan2(-tb.0)),
                    ];
                    let base = dirs[0].1;
                    let mut order: Vec<(usize, f64)> =
                        dirs.iter().map(|&(k, ang)| (k, (ang - base).rem_euclid(TAU))).collect();
                    order.sort_by(|x, y| x.1.total_cmp(&y.1));
                    // slot of each direction: 0 = a fwd, 1 = b fwd, 2 = a back, 3 = b back
                    let mut slot_of = [0usize; 4];
                    for (slot, (k, _)) in order.iter().enumerate() {
                        slot_of[*k] = slot;
                    }
                    let names: Vec<DartId> = (0..4).map(|k| dart(&v, k)).collect();
                    let darts: [String; 4] = names
                        .iter()
                        .map(|x| x.0.clone())
                        .collect::<Vec<_>>()
                        .try_into()
                        .expect("four");
                    d.vertices.insert(v.clone(), darts.map(DartId::from));
                    arcs[i].push(ArcPoint {
                        angle: a.angle_of(px, py),
                        vertex: v.clone(),
                        forward: names[slot_of[0]].clone(),
                        backward: names[slot_of[2]].clone(),
                    });
                    arcs[j].push(ArcPoint {
                        angle: b.angle_of(px, py),
                        vertex: v.clone(),
                        forward: names[slot_of[1]].clone(),
                        backward: names[slot_of[3]].clone(),
                    });
                    positions.insert(v, (px, py));
                }
                let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                parent[ri] = rj;
            }
        }
        let pts: Vec<(f64, f64)> = positions.values().copied().collect();
        for (k, p) in pts.iter().enumerate() {
            for q in &pts[k + 1..] {
                clearance = clearance.min((p.0 - q.0).hypot(p.1 - q.1));
            }
            for c in circles {
                let off = ((p.0 - c.cx).hypot(p.1 - c.cy) - c.r).abs();
                if off > 1e-9 {
                    clearance = clearance.min(off);
                }
            }
        }

        for (i, list) in arcs.iter_mut().enumerate() {
            list.sort_by(|x, y| x.angle.total_cmp(&y.angle));
            let side = match circles[i].coorient {
                // walking counterclockwise the inside is on the left
                Coorient::Inward => Side::Left,
                Coorient::Outward => Side::Right,
            };
            let m = list.len();
            for k in 0..m {
                let from = &list[k].forward;
                let to = &list[(k + 1) % m].backward;
                d.add_edge(from.as_str(), to.as_str(), side);
            }
        }

        let component: Vec<usize> = (0..n).map(|i| find(&mut parent, i)).collect();
        let mut arr = Arrangement {
            circles: circles.to_vec(),
            diagram: d,
            arcs,
            positions,
            component,
            clearance,
            anchor_of: BTreeMap::new(),
        };
        arr.place_components()?;
        Ok(arr)
    }

    fn members(&self, comp: usize) -> Vec<usize> {
        (0..self.circles.len()).filter(|&i| self.component[i] == comp).collect()
    }

    /// Rightmost point of a component and the circle it lies on.
    fn rightmost(&self, comp: usize) -> (usize, f64, f64) {
        let i = self
            .members(comp)
            .into_iter()
            .max_by(|&a, &b| {
                let (ca, cb) = (self.circles[a], self.circles[b]);
                (ca.cx + ca.r).total_cmp(&(cb.cx + cb.r))
            })
            .expect("non-empty component");
        let c = self.circles[i];
        (i, c.cx + c.r, c.cy)
    }

    /// The arc of circle `i` containing angle `theta`: `(forward dart of the
    /// arc start, backward dart of the arc end)`.
    pub(crate) fn arc_at(&self, i: usize, theta: f64) -> Option<(DartId, DartId)> {
        let list = &self.arcs[i];
        if list.is_empty() {
            return None;
        }
        let k = match list.iter().rposition(|p| p.angle <= theta) {
            Some(k) => k,
            None => list.len() - 1,
        };
        let next = (k + 1) % list.len();
        Some((list[k].forward.clone(), list[next].backward.clone()))
    }

    /// Point location by casting a ray towards `+x`, ignoring the circles of
    /// component `skip`.
    pub fn locate(&self, x: f64, y: f64, skip: Option<usize>) -> Location {
        let mut best: Option<(f64, usize)> = None;
        for (i, c) in self.circles.iter().enumerate() {
            if Some(self.component[i]) == skip {
                continue;
            }
            let dy = y - c.cy;
            if dy.abs() >= c.r {
                continue;
            }
            let w = (c.r * c.r - dy * dy).sqrt();
            for hx in [c.cx - w, c.cx + w] {
                let t = hx - x;
                if t > 1e-12 && best.map_or(true, |(bt, _)| t < bt) {
                    best = Some((t, i));
                }
            }
        }
        let Some((t, i)) = best else { return Location::Ambient };
        let c = self.circles[i];
        let inside = c.contains(x, y);
        match self.arc_at(i, c.angle_of(x + t, y)) {
            None if inside => Location::InsideCircle(i),
            None => Location::OutsideCircle(i),
            Some((fwd, back)) => Location::Face(if inside { fwd } else { back }),
        }
    }

    fn place_components(&mut self) -> Result<()> {
        let mut comps: Vec<usize> = self.component.clone();
        comps.sort();
        comps.dedup();
        // anchors first: the outer face of each map component
        let mut anchor_of: BTreeMap<usize, DartId> = BTreeMap::new();
        for &comp in &comps {
            let (i, _, _) = self.rightmost(comp);
            if let Some((_, back)) = self.arc_at(i, 0.0) {
                anchor_of.insert(comp, back);
            }
        }
        self.anchor_of = anchor_of.clone();
        for &comp in &comps {
            let (_, x, y) = self.rightmost(comp);
            let host = self.host_of(self.locate(x, y, Some(comp)), &anchor_of)?;
            match anchor_of.get(&comp) {
                Some(a) => {
                    self.diagram.anchors.insert(a.clone(), host);
                }
                None => {
                    let i = self.members(comp)[0];
                    self.diagram.circles.insert(
                        circle_name(i),
                        crate::diagram::FreeCircle { host, coorient: self.circles[i].coorient },
                    );
                }
            }
        }
        Ok(())
    }

    fn host_of(&self, loc: Location, anchor_of: &BTreeMap<usize, DartId>) -> Result<Host> {
        Ok(match loc {
            Location::Ambient => Host::Ambient,
            Location::InsideCircle(i) => Host::Circle(circle_name(i)),
            Location::OutsideCircle(i) => {
                let (_, x, y) = self.rightmost(self.component[i]);
                self.host_of(self.locate(x, y, Some(self.component[i])), anchor_of)?
            }
            Location::Face(dart) => {
                // the outer face of another component stands for that component's host
                let comp = anchor_of
                    .iter()
                    .find(|(_, a)| self.same_face(a, &dart))
                    .map(|(c, _)| *c);
                match comp {
                    Some(c) => {
                        let (_, x, y) = self.rightmost(c);
                        self.host_of(self.locate(x, y, Some(c)), anchor_of)?
                    }
                    None => Host::Face(dart),
                }
            }
        })
    }

    fn same_face(&self, a: &DartId, b: &DartId) -> bool {
        // faces are small; walk the orbit of `a` without building a topology
        let vertex_of = |x: &DartId| -> (VertexId, usize) {
            let (v, k) = x.0.rsplit_once('.').expect("geometric dart name");
            (VertexId::from(v), k.parse().expect("slot"))
        };
        let mut cur = a.clone();
        for _ in 0..=self.diagram.mates.len() {
            if &cur == b {
                return true;
            }
            let m = &self.diagram.mates[&cur];
            let (v, k) = vertex_of(m);
            cur = self.diagram.vertices[&v][(k + 3) % 4].clone();
            if &cur == a {
                return false;
            }
        }
        false
    }

    /// Region of a point expressed as a [`Host`] of the full arrangement.
    pub fn host_at(&self, x: f64, y: f64) -> Result<Host> {
        self.host_of(self.locate(x, y, None), &self.anchor_of)
    }

    pub fn require_clearance(&self, eps: f64) -> Result<()> {
        if self.clearance < eps {
            return Err(Error::Model(format!(
                "circle arrangement is nearly degenerate (clearance {:.3e})",
                self.clearance
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Coorient::*;

    pub(crate) fn venn(co: [Coorient; 3]) -> Vec<Circle> {
        let r = 1.0;
        (0..3)
            .map(|k| {
                let a = TAU * k as f64 / 3.0 + 0.3;
                Circle::new(0.6 * a.cos(), 0.6 * a.sin(), r, co[k])
            })
            .collect()
    }

    #[test]
    fn venn_is_valid_with_eight_faces() {
        let arr = Arrangement::build(&venn([Inward, Outward, Inward])).unwrap();
        let d = &arr.diagram;
        assert!(d.validate().is_ok(), "{:?}", d.validate());
        assert_eq!(d.vertex_count(), 6);
        assert_eq!(d.edge_count(), 12);
        assert_eq!(d.faces().unwrap().len(), 8);
        assert_eq!(d.regions().unwrap().len(), 8);
    }

    #[test]
    fn nested_and_disjoint_circles() {
        let circles = vec![
            Circle::new(0.0, 0.0, 5.0, Inward),
            Circle::new(0.0, 0.0, 1.0, Outward),
            Circle::new(0.5, 0.0, 1.0, Inward),
            Circle::new(10.0, 0.0, 1.0, Inward),
        ];
        let arr = Arrangement::build(&circles).unwrap();
        let d = &arr.diagram;
        assert!(d.validate().is_ok(), "{:?}", d.validate());
        assert_eq!(d.circles().len(), 2);
        assert_eq!(d.circles()[&circle_name(0)].host, Host::Ambient);
        assert_eq!(d.circles()[&circle_name(3)].host, Host::Ambient);
        assert_eq!(d.anchors().values().next().unwrap(), &Host::Circle(circle_name(0)));
        // outer, inside big circle, plus the 4 faces of the crossing pair minus its outer face
        assert_eq!(d.regions().unwrap().len(), 1 + 1 + 3 + 1);
    }

    #[test]
    fn component_inside_a_face() {
        // a small circle inside the lens of two crossing circles
        let circles = vec![
            Circle::new(-0.5, 0.0, 1.0, Inward),
            Circle::new(0.5, 0.0, 1.0, Inward),
            Circle::new(0.0, 0.0, 0.2, Outward),
        ];
        let arr = Arrangement::build(&circles).unwrap();
        let d = &arr.diagram;
        assert!(d.validate().is_ok());
        let topo = d.topology().unwrap();
        let host = &d.circles()[&circle_name(2)].host;
        let region = topo.region_of_host(d, host).unwrap();
        assert!(matches!(region, crate::diagram::RegionId::Face(_)));
        // the lens is bounded by two edges
        if let Host::Face(x) = host {
            assert_eq!(topo.face_of(x).boundary.len(), 2);
        }
    }
}
