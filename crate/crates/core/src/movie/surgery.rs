//! Elementary transitions between consecutive slices.

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Coorient, Diagram, FreeCircle, Host, RegionId, Side, Topology};
use crate::error::{Error, Result};
use crate::ids::{CircleId, DartId, VertexId};
use crate::omega3::{apply_omega3, find_triangle};

/// One side of a curve arc: an edge walked from its dart, or a free circle
/// seen from inside or outside. The named region is on the left.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ArcSite {
    Edge(DartId),
    Circle { circle: CircleId, inner: bool },
}

impl fmt::Display for ArcSite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArcSite::Edge(x) => write!(f, "edge:{x}"),
            ArcSite::Circle { circle, inner } => {
                write!(f, "circle:{circle}:{}", if *inner { "inner" } else { "outer" })
            }
        }
    }
}

impl ArcSite {
    pub fn parse(s: &str) -> Option<ArcSite> {
        if let Some(x) = s.strip_prefix("edge:") {
            return (!x.is_empty()).then(|| ArcSite::Edge(x.into()));
        }
        let rest = s.strip_prefix("circle:")?;
        let (c, side) = rest.rsplit_once(':')?;
        let inner = match side {
            "inner" => true,
            "outer" => false,
            _ => return None,
        };
        (!c.is_empty()).then(|| ArcSite::Circle { circle: c.into(), inner })
    }
}

fn host_of(r: RegionId) -> Host {
    match r {
        RegionId::Ambient => Host::Ambient,
        RegionId::Face(x) => Host::Face(x),
        RegionId::Inner(c) => Host::Circle(c),
    }
}

/// Rewrites every host so that it names a bounded face, a circle or the
/// ambient region, never an outer face.
pub(crate) fn normalize_hosts(d: &Diagram) -> Result<Diagram> {
    let topo = d.topology()?;
    let mut out = d.clone();
    for (x, h) in &d.anchors {
        out.anchors.insert(x.clone(), host_of(topo.region_of_host(d, h)?));
    }
    for (c, circle) in &d.circles {
        out.circles.get_mut(c).expect("same keys").host = host_of(topo.region_of_host(d, &circle.host)?);
    }
    Ok(out)
}

fn link(d: &mut Diagram, x: &DartId, y: &DartId, side_x: Side) {
    d.mates.insert(x.clone(), y.clone());
    d.mates.insert(y.clone(), x.clone());
    d.sides.insert(x.clone(), side_x);
    d.sides.insert(y.clone(), side_x.flip());
}

/// Something that sits in a region: a map component (named by its anchor)
/// or a free circle.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
enum Item {
    Comp(DartId),
    Circle(CircleId),
}

fn items(d: &Diagram) -> Vec<(Item, Host)> {
    let mut out: Vec<(Item, Host)> = d.anchors.iter().map(|(x, h)| (Item::Comp(x.clone()), h.clone())).collect();
    out.extend(d.circles.iter().map(|(c, fc)| (Item::Circle(c.clone()), fc.host.clone())));
    out
}

fn set_host(d: &mut Diagram, item: &Item, host: Host) {
    match item {
        Item::Comp(x) => {
            d.anchors.insert(x.clone(), host);
        }
        Item::Circle(c) => {
            if let Some(fc) = d.circles.get_mut(c) {
                fc.host = host;
            }
        }
    }
}

/// Resolves names in a `split` list. `outer` is reported separately.
fn resolve_split(d: &Diagram, topo: &Topology, names: &[String]) -> Result<(BTreeSet<Item>, bool)> {
    let mut moved = BTreeSet::new();
    let mut outer = false;
    for n in names {
        if n == "outer" {
            outer = true;
            continue;
        }
        let c = CircleId::from(n.as_str());
        if d.circles.contains_key(&c) {
            moved.insert(Item::Circle(c));
            continue;
        }
        let x = DartId::from(n.as_str());
        if d.mates.contains_key(&x) {
            let comp = topo.component_of(&x);
            let anchor = topo.components[comp]
                .anchor
                .clone()
                .ok_or_else(|| Error::structure(format!("component of {x} has no outer face")))?;
            moved.insert(Item::Comp(anchor));
            continue;
        }
        return Err(Error::pre(format!("split names unknown item `{n}`")));
    }
    Ok((moved, outer))
}

fn is_outer_orbit(topo: &Topology, x: &DartId) -> bool {
    let comp = topo.component_of(x);
    topo.components[comp]
        .anchor
        .as_ref()
        .is_some_and(|a| topo.face_index_of(a) == topo.face_index_of(x))
}

fn anchor_host(d: &Diagram, topo: &Topology, comp: usize) -> Result<(DartId, Host)> {
    let a = topo.components[comp]
        .anchor
        .clone()
        .ok_or_else(|| Error::structure("component without outer face"))?;
    let h = d.anchors[&a].clone();
    Ok((a, h))
}

struct ArcInfo {
    dart: Option<DartId>,
    circle: Option<CircleId>,
    region: RegionId,
    side: Side,
    comp: Option<usize>,
    /// The region on the left lies outside the curve carrying the arc.
    outer_side: bool,
}

fn arc_info(d: &Diagram, topo: &Topology, site: &ArcSite) -> Result<ArcInfo> {
    match site {
        ArcSite::Edge(p) => {
            if !d.mates.contains_key(p) {
                return Err(Error::pre(format!("unknown dart {p}")));
            }
            Ok(ArcInfo {
                dart: Some(p.clone()),
                circle: None,
                region: topo.region_of_dart(d, p)?,
                side: d.sides[p],
                comp: Some(topo.component_of(p)),
                outer_side: is_outer_orbit(topo, p),
            })
        }
        ArcSite::Circle { circle, inner } => {
            let fc = d.circles.get(circle).ok_or_else(|| Error::pre(format!("unknown circle {circle}")))?;
            let region = if *inner { RegionId::Inner(circle.clone()) } else { topo.region_outside_circle(d, circle)? };
            // walking with the named side on the left: inside-left is counterclockwise
            let towards_inside = if *inner { Side::Left } else { Side::Right };
            let side = if fc.coorient == Coorient::Inward { towards_inside } else { towards_inside.flip() };
            Ok(ArcInfo { dart: None, circle: Some(circle.clone()), region, side, comp: None, outer_side: !inner })
        }
    }
}

/// Coorientation side of an arc walked with its named region on the left.
pub(crate) fn arc_side(d: &Diagram, site: &ArcSite) -> Result<Side> {
    let topo = d.topology()?;
    Ok(arc_info(d, &topo, site)?.side)
}

fn check_new_vertex(d: &Diagram, v: &VertexId) -> Result<[DartId; 4]> {
    if d.vertices.contains_key(v) {
        return Err(Error::pre(format!("vertex {v} already exists")));
    }
    let darts: [DartId; 4] = std::array::from_fn(|k| DartId::from(format!("{v}.{k}")));
    if let Some(x) = darts.iter().find(|x| d.mates.contains_key(*x)) {
        return Err(Error::pre(format!("dart {x} already exists")));
    }
    Ok(darts)
}

fn finish(out: Diagram) -> Result<Diagram> {
    match out.validate().into_result() {
        Ok(()) => Ok(out),
        Err(e) => Err(Error::Internal(format!("transition produced an invalid slice: {e}"))),
    }
}

pub fn birth(d: &Diagram, c: &CircleId, host: &Host, coorient: Coorient) -> Result<Diagram> {
    if d.circles.contains_key(c) {
        return Err(Error::pre(format!("circle {c} already exists")));
    }
    let topo = d.topology()?;
    let region = topo.region_of_host(d, host).map_err(|e| Error::pre(format!("birth host: {e}")))?;
    let mut out = d.clone();
    out.circles.insert(c.clone(), FreeCircle { host: host_of(region), coorient });
    finish(out)
}

pub fn death(d: &Diagram, c: &CircleId) -> Result<Diagram> {
    if !d.circles.contains_key(c) {
        return Err(Error::pre(format!("unknown circle {c}")));
    }
    let n = normalize_hosts(d)?;
    if let Some((item, _)) = items(&n).into_iter().find(|(_, h)| *h == Host::Circle(c.clone())) {
        return Err(Error::pre(format!("circle {c} is not empty: it contains {item:?}")));
    }
    let mut out = n;
    out.circles.remove(c);
    finish(out)
}

pub fn triple(d: &Diagram, vertices: &[VertexId; 3]) -> Result<Diagram> {
    let n = normalize_hosts(d)?;
    let face = find_triangle(&n, vertices)?;
    Ok(apply_omega3(&n, &face)?.0)
}

/// Pushes arc `a` across arc `b`, creating the crossings `v[0]` and `v[1]`
/// and a bigon between them. `declared` must repeat the coorientation sides
/// of the two arcs.
pub fn crossing_birth(
    d0: &Diagram,
    a: &ArcSite,
    b: &ArcSite,
    v: &[VertexId; 2],
    declared: [Side; 2],
    split: &[String],
) -> Result<Diagram> {
    let d = normalize_hosts(d0)?;
    let topo = d.topology()?;
    if a == b {
        return Err(Error::pre("the two arcs coincide"));
    }
    let pa = arc_info(&d, &topo, a)?;
    let pb = arc_info(&d, &topo, b)?;
    if pa.region != pb.region {
        return Err(Error::pre(format!("arcs {a} and {b} do not bound a common region")));
    }
    if pa.circle.is_some() && pa.circle == pb.circle {
        return Err(Error::pre(format!("both arcs lie on circle {}", pa.circle.as_ref().unwrap())));
    }
    if [pa.side, pb.side] != declared {
        return Err(Error::pre(format!(
            "declared coorientation {} {} does not match the arcs ({} {})",
            declared[0].keyword(),
            declared[1].keyword(),
            pa.side.keyword(),
            pb.side.keyword()
        )));
    }
    if v[0] == v[1] {
        return Err(Error::pre("the two new vertices need distinct names"));
    }
    let n1 = check_new_vertex(&d, &v[0])?;
    let n2 = check_new_vertex(&d, &v[1])?;
    let (moved, outer_b) = resolve_split(&d, &topo, split)?;

    let mut out = d.clone();
    out.vertices.insert(v[0].clone(), n1.clone());
    out.vertices.insert(v[1].clone(), n2.clone());
    let (sp, sr) = (pa.side, pb.side);
    link(&mut out, &n1[0], &n2[2], sp);
    match &pa.dart {
        Some(p) => {
            let q = d.mates[p].clone();
            link(&mut out, p, &n1[2], sp);
            link(&mut out, &n2[0], &q, sp);
        }
        None => link(&mut out, &n2[0], &n1[2], sp),
    }
    link(&mut out, &n2[3], &n1[3], sr);
    match &pb.dart {
        Some(r) => {
            let s = d.mates[r].clone();
            link(&mut out, r, &n2[1], sr);
            link(&mut out, &n1[1], &s, sr);
        }
        None => link(&mut out, &n1[1], &n2[1], sr),
    }
    for c in [&pa.circle, &pb.circle].into_iter().flatten() {
        out.circles.remove(c);
    }
    // darts whose left face is the common region, and darts on the far side
    let left_a = pa.dart.clone().unwrap_or_else(|| n2[0].clone());
    let left_b = pb.dart.clone().unwrap_or_else(|| n1[1].clone());
    let back_a = n1[2].clone();
    let back_b = n2[1].clone();

    let owners: BTreeSet<Item> = [&pa, &pb]
        .iter()
        .filter_map(|p| match (&p.comp, &p.circle) {
            (Some(c), _) => topo.components[*c].anchor.clone().map(Item::Comp),
            (_, Some(c)) => Some(Item::Circle(c.clone())),
            _ => None,
        })
        .collect();
    let in_region: Vec<Item> = items(&d)
        .into_iter()
        .filter(|(it, h)| !owners.contains(it) && topo.region_of_host(&d, h).ok().as_ref() == Some(&pa.region))
        .map(|(it, _)| it)
        .collect();
    if let Some(it) = moved.iter().find(|it| !in_region.contains(it)) {
        return Err(Error::pre(format!("split item {it:?} does not lie in the common region")));
    }

    match (pa.comp, pb.comp) {
        (Some(ca), Some(cb)) if ca == cb => {
            let (p, r) = (pa.dart.clone().unwrap(), pb.dart.clone().unwrap());
            if topo.face_index_of(&p) != topo.face_index_of(&r) {
                return Err(Error::Internal("arcs of one component in one region but different faces".into()));
            }
            let (anchor, host) = anchor_host(&d, &topo, ca)?;
            if pa.outer_side {
                out.anchors.remove(&anchor);
                let (outer_dart, inner_dart) = if outer_b { (r.clone(), p.clone()) } else { (p.clone(), r.clone()) };
                out.anchors.insert(outer_dart.clone(), host);
                for it in &in_region {
                    let part = if moved.contains(it) { &r } else { &p };
                    if *part != outer_dart {
                        set_host(&mut out, it, Host::Face(inner_dart.clone()));
                    }
                }
            } else {
                if outer_b {
                    return Err(Error::pre("`outer` in split needs the common region to be an outer face"));
                }
                for it in &in_region {
                    let part = if moved.contains(it) { &r } else { &p };
                    set_host(&mut out, it, Host::Face(part.clone()));
                }
            }
        }
        _ => {
            if !moved.is_empty() || outer_b {
                return Err(Error::pre("split only applies when the arcs share a face"));
            }
            for p in [&pa, &pb] {
                if let Some(c) = p.comp {
                    let (anchor, _) = anchor_host(&d, &topo, c)?;
                    out.anchors.remove(&anchor);
                }
            }
            let outside = |p: &ArcInfo, back: &DartId| -> Result<(DartId, Host)> {
                match (&p.comp, &p.circle) {
                    (Some(c), _) => anchor_host(&d, &topo, *c),
                    (_, Some(c)) => Ok((back.clone(), d.circles[c].host.clone())),
                    _ => unreachable!(),
                }
            };
            match (pa.outer_side, pb.outer_side) {
                (true, true) => {
                    out.anchors.insert(left_a.clone(), host_of(pa.region.clone()));
                }
                (true, false) => {
                    let (x, h) = outside(&pb, &back_b)?;
                    out.anchors.insert(x, h);
                    for it in &in_region {
                        set_host(&mut out, it, Host::Face(left_b.clone()));
                    }
                }
                (false, true) => {
                    let (x, h) = outside(&pa, &back_a)?;
                    out.anchors.insert(x, h);
                    for it in &in_region {
                        set_host(&mut out, it, Host::Face(left_a.clone()));
                    }
                }
                (false, false) => {
                    return Err(Error::Internal("common region is inside both arcs".into()));
                }
            }
            // the old inside of a circle touched from outside
            for (p, back) in [(&pa, &back_a), (&pb, &back_b)] {
                if let (Some(c), true) = (&p.circle, p.outer_side) {
                    for (it, h) in items(&d) {
                        if h == Host::Circle(c.clone()) {
                            set_host(&mut out, &it, Host::Face(back.clone()));
                        }
                    }
                }
            }
        }
    }
    finish(out)
}

/// Union-find over old face orbits.
struct Keys(Vec<usize>);

impl Keys {
    fn new(n: usize) -> Self {
        Keys((0..n).collect())
    }

    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let n = self.0[y];
            self.0[y] = r;
            y = n;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

struct FreedLoop {
    id: CircleId,
    /// A dart of the loop whose edge lies away from the moving part.
    far: DartId,
    edges: BTreeSet<(DartId, DartId)>,
}

struct SplitSpec {
    key: usize,
    a: DartId,
    b: DartId,
    moved: BTreeSet<Item>,
    outer_b: bool,
}

fn edge_key(x: &DartId, y: &DartId) -> (DartId, DartId) {
    if x < y {
        (x.clone(), y.clone())
    } else {
        (y.clone(), x.clone())
    }
}

/// Recomputes outer faces and hosts after the darts of some components were
/// rewired. Every old face orbit keeps its region unless merged through
/// `keys`; `vanished` regions must be empty.
struct Rehost<'a> {
    old: &'a Diagram,
    topo: &'a Topology,
    involved: BTreeSet<usize>,
    keys: Keys,
    vanished: Option<usize>,
    split: Option<SplitSpec>,
    loops: Vec<FreedLoop>,
}

impl Rehost<'_> {
    fn key_of(&mut self, x: &DartId) -> usize {
        let f = self.topo.face_index_of(x);
        self.keys.find(f)
    }

    fn run(mut self, mut out: Diagram) -> Result<Diagram> {
        let old = self.old;
        let topo = self.topo;
        let old_darts: BTreeSet<DartId> =
            self.involved.iter().flat_map(|c| topo.components[*c].darts.iter().cloned()).collect();
        for c in &self.involved {
            if let Some(a) = &topo.components[*c].anchor {
                out.anchors.remove(a);
            }
        }
        let nt = out.topology()?;
        let pieces: BTreeSet<usize> =
            old_darts.iter().filter_map(|x| nt.component_of.get(x).copied()).collect();
        if let Some(x) = pieces.iter().flat_map(|p| &nt.components[*p].darts).find(|x| !old_darts.contains(*x)) {
            return Err(Error::Internal(format!("new dart {x} in a rewired component")));
        }

        // keys carried by each new orbit
        let mut orbit_keys: BTreeMap<usize, BTreeSet<usize>> = BTreeMap::new();
        for p in &pieces {
            for g in &nt.components[*p].faces {
                let ks = nt.faces[*g].boundary.iter().map(|x| self.key_of(x)).collect();
                orbit_keys.insert(*g, ks);
            }
        }
        let piece_of_orbit = |g: usize| nt.component_of(&nt.faces[g].boundary[0]);

        // the outermost involved components and the region around them
        let involved_faces: BTreeSet<DartId> = self
            .involved
            .iter()
            .flat_map(|c| topo.components[*c].faces.iter().map(|f| topo.faces[*f].id.clone()))
            .collect();
        let mut ok_keys = BTreeSet::new();
        let mut outer_host: Option<Host> = None;
        for c in self.involved.clone() {
            let (a, h) = anchor_host(old, topo, c)?;
            let inside = matches!(&h, Host::Face(x) if involved_faces.contains(&topo.face_of(x).id));
            if inside {
                continue;
            }
            if outer_host.as_ref().is_some_and(|o| *o != h) {
                return Err(Error::pre("rewired components lie in different regions"));
            }
            outer_host = Some(h);
            let k = self.key_of(&a);
            ok_keys.insert(k);
        }
        let outer_host = outer_host.ok_or_else(|| Error::Internal("no outermost component".into()))?;

        // sides of freed loops
        let mut loop_inner: BTreeMap<usize, usize> = BTreeMap::new();
        let mut loop_outer: Vec<usize> = Vec::new();
        let mut loop_coorient = Vec::new();
        for (li, l) in self.loops.iter().enumerate() {
            let mut adj: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
            for x in &old_darts {
                let y = &old.mates[x];
                if l.edges.contains(&edge_key(x, y)) {
                    continue;
                }
                let (kx, ky) = (self.keys.find(topo.face_index_of(x)), self.keys.find(topo.face_index_of(y)));
                adj.entry(kx).or_default().push(ky);
            }
            let left = self.keys.find(topo.face_index_of(&l.far));
            let right = self.keys.find(topo.face_index_of(&old.mates[&l.far]));
            if left == right {
                return Err(Error::Internal(format!("freed circle {} has one region on both sides", l.id)));
            }
            let mut seen = BTreeSet::from([left]);
            let mut queue = VecDeque::from([left]);
            while let Some(k) = queue.pop_front() {
                for n in adj.get(&k).into_iter().flatten() {
                    if seen.insert(*n) {
                        queue.push_back(*n);
                    }
                }
            }
            let left_outside = seen.iter().any(|k| ok_keys.contains(k));
            let (outside, inside) = if left_outside { (left, right) } else { (right, left) };
            let arrow_left = old.sides[&l.far] == Side::Left;
            let coorient = if arrow_left == left_outside { Coorient::Outward } else { Coorient::Inward };
            if loop_inner.insert(inside, li).is_some() {
                return Err(Error::pre("two freed circles enclose the same region"));
            }
            loop_outer.push(outside);
            loop_coorient.push(coorient);
        }

        // outer orbit of every piece
        let mut outer_of: BTreeMap<usize, usize> = BTreeMap::new();
        let mut nested: Vec<(usize, usize)> = Vec::new();
        for p in &pieces {
            let faces = &nt.components[*p].faces;
            let cand: Vec<usize> =
                faces.iter().copied().filter(|g| orbit_keys[g].iter().any(|k| ok_keys.contains(k))).collect();
            let chosen = match cand.len() {
                1 => cand[0],
                0 => {
                    let shared: Vec<usize> = faces
                        .iter()
                        .copied()
                        .filter(|g| {
                            orbit_keys[g].iter().any(|k| {
                                loop_inner.contains_key(k)
                                    || loop_outer.contains(k)
                                    || orbit_keys.iter().any(|(h, ks)| piece_of_orbit(*h) != *p && ks.contains(k))
                            })
                        })
                        .collect();
                    if shared.len() != 1 {
                        return Err(Error::pre("cannot tell which face of a split-off component is outside"));
                    }
                    let k = *orbit_keys[&shared[0]].iter().next().expect("nonempty");
                    let k = orbit_keys[&shared[0]]
                        .iter()
                        .copied()
                        .find(|k| {
                            loop_inner.contains_key(k)
                                || loop_outer.contains(k)
                                || orbit_keys.iter().any(|(h, ks)| piece_of_orbit(*h) != *p && ks.contains(k))
                        })
                        .unwrap_or(k);
                    nested.push((*p, k));
                    shared[0]
                }
                _ => {
                    let sp = self
                        .split
                        .as_ref()
                        .filter(|s| cand.contains(&nt.face_index_of(&s.a)) && cand.contains(&nt.face_index_of(&s.b)));
                    match sp {
                        Some(s) if cand.len() == 2 => {
                            nt.face_index_of(if s.outer_b { &s.b } else { &s.a })
                        }
                        _ => return Err(Error::pre("cannot tell which face of the rewired component is outside")),
                    }
                }
            };
            outer_of.insert(*p, chosen);
        }
        let outer_orbits: BTreeSet<usize> = outer_of.values().copied().collect();
        let mut piece_host: BTreeMap<usize, Host> = BTreeMap::new();
        for p in &pieces {
            if !nested.iter().any(|(q, _)| q == p) {
                piece_host.insert(*p, outer_host.clone());
            }
        }

        let loops_ids: Vec<CircleId> = self.loops.iter().map(|l| l.id.clone()).collect();
        let rmap = |key: usize, exclude: Option<usize>, item: Option<&Item>, piece_host: &BTreeMap<usize, Host>| -> Result<Host> {
            if Some(key) == self.vanished {
                return Err(Error::pre("a vanishing region still contains something"));
            }
            if let Some(s) = &self.split {
                if s.key == key && !ok_keys.contains(&key) {
                    let dart = if item.is_some_and(|it| s.moved.contains(it)) { &s.b } else { &s.a };
                    let g = nt.face_index_of(dart);
                    if outer_orbits.contains(&g) {
                        return piece_host
                            .get(&piece_of_orbit(g))
                            .cloned()
                            .ok_or_else(|| Error::pre("ambiguous nesting after split"));
                    }
                    return Ok(Host::Face(dart.clone()));
                }
            }
            if ok_keys.contains(&key) {
                return Ok(outer_host.clone());
            }
            if let Some(li) = loop_inner.get(&key) {
                return Ok(Host::Circle(loops_ids[*li].clone()));
            }
            let hits: Vec<usize> = orbit_keys
                .iter()
                .filter(|(g, ks)| ks.contains(&key) && Some(piece_of_orbit(**g)) != exclude && !outer_orbits.contains(g))
                .map(|(g, _)| *g)
                .collect();
            match hits.as_slice() {
                [g] => Ok(Host::Face(nt.faces[*g].id.clone())),
                [] => Err(Error::pre("a region lost all of its boundary")),
                _ => Err(Error::pre("a region is bounded by several faces after the move")),
            }
        };

        for (p, k) in &nested {
            let h = rmap(*k, Some(*p), None, &piece_host)?;
            piece_host.insert(*p, h);
        }
        for (p, g) in &outer_of {
            out.anchors.insert(nt.faces[*g].id.clone(), piece_host[p].clone());
        }
        for (li, l) in self.loops.iter().enumerate() {
            let host = rmap(loop_outer[li], None, None, &piece_host)?;
            out.circles.insert(l.id.clone(), FreeCircle { host, coorient: loop_coorient[li] });
        }
        let new_loops: BTreeSet<&CircleId> = loops_ids.iter().collect();
        for (it, h) in items(&out) {
            if let Item::Circle(c) = &it {
                if new_loops.contains(c) {
                    continue;
                }
            }
            if let Item::Comp(x) = &it {
                if !old.anchors.contains_key(x) || old_darts.contains(x) {
                    continue;
                }
            }
            if let Host::Face(x) = &h {
                if old_darts.contains(x) {
                    let k = self.keys.find(topo.face_index_of(x));
                    let nh = rmap(k, None, Some(&it), &piece_host)?;
                    set_host(&mut out, &it, nh);
                }
            }
        }
        finish(out)
    }
}

/// Removes the bigon between `v[0]` and `v[1]`. `via` names a dart of the
/// bigon when the two vertices bound several. Strands left without vertices
/// become free circles named by `created`, ordered by their slot at `v[0]`.
pub fn crossing_death(d0: &Diagram, v: &[VertexId; 2], via: Option<&DartId>, created: &[CircleId]) -> Result<Diagram> {
    let d = normalize_hosts(d0)?;
    let topo = d.topology()?;
    for x in v {
        if !d.vertices.contains_key(x) {
            return Err(Error::pre(format!("unknown vertex {x}")));
        }
    }
    if v[0] == v[1] {
        return Err(Error::pre("a bigon needs two distinct vertices"));
    }
    let want: BTreeSet<&VertexId> = v.iter().collect();
    let bigons: Vec<usize> = (0..topo.faces.len())
        .filter(|i| {
            let b = &topo.faces[*i].boundary;
            b.len() == 2 && b.iter().map(|x| topo.vertex_of(x)).collect::<BTreeSet<_>>() == want
        })
        .collect();
    let bigon = match via {
        Some(x) => {
            let i = *topo.face_index.get(x).ok_or_else(|| Error::pre(format!("unknown dart {x}")))?;
            if !bigons.contains(&i) {
                return Err(Error::pre(format!("face of {x} is not a bigon on {} {}", v[0], v[1])));
            }
            i
        }
        None => match bigons.as_slice() {
            [i] => *i,
            [] => return Err(Error::pre(format!("no bigon on vertices {} {}", v[0], v[1]))),
            _ => return Err(Error::pre(format!("several bigons on {} {}; name one with `via`", v[0], v[1]))),
        },
    };
    let e = topo.faces[bigon].boundary[0].clone();
    let f = topo.faces[bigon].boundary[1].clone();
    if is_outer_orbit(&topo, &e) {
        return Err(Error::pre("the bigon is the outer face of its component"));
    }
    let comp = topo.component_of(&e);
    let removed: BTreeSet<DartId> = v.iter().flat_map(|x| d.vertices[x].iter().cloned()).collect();

    let mut out = d.clone();
    for x in v {
        out.vertices.remove(x);
    }
    for x in &removed {
        out.mates.remove(x);
        out.sides.remove(x);
    }
    let mut visited: BTreeSet<DartId> = BTreeSet::new();
    let entry: Vec<DartId> = topo.components[comp]
        .darts
        .iter()
        .filter(|z| !removed.contains(*z) && removed.contains(&d.mates[*z]))
        .cloned()
        .collect();
    let mut done = BTreeSet::new();
    for z in entry {
        if done.contains(&z) {
            continue;
        }
        let mut y = d.mates[&z].clone();
        loop {
            let o = topo.opposite(&d, &y);
            visited.insert(y.clone());
            visited.insert(o.clone());
            let w = d.mates[&o].clone();
            if !removed.contains(&w) {
                link(&mut out, &z, &w, d.sides[&z]);
                done.insert(z.clone());
                done.insert(w);
                break;
            }
            y = w;
        }
    }
    // strands that never leave the two vertices
    let bigon_edges: BTreeSet<(DartId, DartId)> = [&e, &f].iter().map(|x| edge_key(x, &d.mates[*x])).collect();
    let first = &d.vertices[&v[0]];
    let mut loops: Vec<(usize, DartId, BTreeSet<(DartId, DartId)>)> = Vec::new();
    for (slot, start) in first.iter().enumerate() {
        if visited.contains(start) {
            continue;
        }
        let mut edges = BTreeSet::new();
        let mut far = None;
        let mut y = start.clone();
        loop {
            let o = topo.opposite(&d, &y);
            visited.insert(y.clone());
            visited.insert(o.clone());
            let w = d.mates[&o].clone();
            let k = edge_key(&o, &w);
            if far.is_none() && !bigon_edges.contains(&k) {
                far = Some(o.clone());
            }
            edges.insert(k);
            if w == *start {
                break;
            }
            y = w;
        }
        let far = far.ok_or_else(|| Error::Internal("freed strand has no outer edge".into()))?;
        loops.push((slot, far, edges));
    }
    if loops.len() != created.len() {
        return Err(Error::pre(format!(
            "the move frees {} circle(s); name them after `->` ({} given)",
            loops.len(),
            created.len()
        )));
    }
    for c in created {
        if d.circles.contains_key(c) {
            return Err(Error::pre(format!("circle {c} already exists")));
        }
    }
    let bigon_hosts = items(&d)
        .into_iter()
        .any(|(_, h)| matches!(&h, Host::Face(x) if topo.face_index.get(x) == Some(&bigon)));
    if bigon_hosts {
        return Err(Error::pre("the bigon is not empty"));
    }

    let mut keys = Keys::new(topo.faces.len());
    keys.union(topo.face_index_of(&topo.opposite(&d, &f)), topo.face_index_of(&topo.opposite(&d, &e)));
    let vanished = Some(keys.find(bigon));
    let engine = Rehost {
        old: &d,
        topo: &topo,
        involved: BTreeSet::from([comp]),
        keys,
        vanished,
        split: None,
        loops: loops
            .into_iter()
            .zip(created)
            .map(|((_, far, edges), id)| FreedLoop { id: id.clone(), far, edges })
            .collect(),
    };
    engine.run(out)
}

/// Joins two arcs across the region they share by a band.
pub fn saddle(d0: &Diagram, a: &ArcSite, b: &ArcSite, created: Option<&CircleId>, split: &[String]) -> Result<Diagram> {
    let d = normalize_hosts(d0)?;
    let topo = d.topology()?;
    let pa = arc_info(&d, &topo, a)?;
    let pb = arc_info(&d, &topo, b)?;
    if pa.region != pb.region {
        return Err(Error::pre(format!("arcs {a} and {b} do not bound a common region")));
    }
    if pa.side != pb.side {
        return Err(Error::pre(format!(
            "coorientation mismatch: {a} points {} but {b} points {}",
            pa.side.keyword(),
            pb.side.keyword()
        )));
    }
    let (moved, outer_b) = resolve_split(&d, &topo, split)?;
    match (&pa.dart, &pb.dart) {
        (Some(p), Some(r)) => {
            if p == r {
                return Err(Error::pre("a saddle needs two distinct arcs"));
            }
            if created.is_some() {
                return Err(Error::pre("a saddle between edges creates no circle"));
            }
            let q = d.mates[p].clone();
            let s = d.mates[r].clone();
            if q == *r {
                return Err(Error::Internal("edge with one region on both sides".into()));
            }
            let mut out = d.clone();
            link(&mut out, p, &s, d.sides[p]);
            link(&mut out, r, &q, d.sides[r]);
            let mut keys = Keys::new(topo.faces.len());
            let (fp, fr) = (topo.face_index_of(p), topo.face_index_of(r));
            keys.union(fp, fr);
            keys.union(topo.face_index_of(&q), topo.face_index_of(&s));
            let split = if fp == fr {
                Some(SplitSpec { key: keys.find(fp), a: p.clone(), b: r.clone(), moved, outer_b })
            } else {
                if !moved.is_empty() || outer_b {
                    return Err(Error::pre("split only applies when the arcs share a face"));
                }
                None
            };
            let comps = BTreeSet::from([topo.component_of(p), topo.component_of(r)]);
            let engine =
                Rehost { old: &d, topo: &topo, involved: comps, keys, vanished: None, split, loops: Vec::new() };
            engine.run(out)
        }
        (None, None) => circle_saddle(&d, &topo, &pa, &pb, created, &moved, outer_b),
        _ => {
            let (circle, edge) = if pa.circle.is_some() { (&pa, &pb) } else { (&pb, &pa) };
            if created.is_some() || !moved.is_empty() || outer_b {
                return Err(Error::pre("a saddle between a circle and an edge takes no extra names"));
            }
            if !circle.outer_side {
                return Err(Error::pre("a saddle from the inside of a circle to an edge is not supported"));
            }
            let c = circle.circle.clone().unwrap();
            let p = edge.dart.clone().unwrap();
            let beyond = topo.region_of_dart(&d, &d.mates[&p])?;
            let mut out = d.clone();
            out.circles.remove(&c);
            for (it, h) in items(&d) {
                if h == Host::Circle(c.clone()) {
                    set_host(&mut out, &it, host_of(beyond.clone()));
                }
            }
            finish(out)
        }
    }
}

fn circle_saddle(
    d: &Diagram,
    topo: &Topology,
    pa: &ArcInfo,
    pb: &ArcInfo,
    created: Option<&CircleId>,
    moved: &BTreeSet<Item>,
    outer_b: bool,
) -> Result<Diagram> {
    let ca = pa.circle.clone().unwrap();
    let cb = pb.circle.clone().unwrap();
    let mut out = d.clone();
    let inside = |c: &CircleId| -> Vec<Item> {
        items(d).into_iter().filter(|(_, h)| *h == Host::Circle(c.clone())).map(|(it, _)| it).collect()
    };
    if outer_b {
        return Err(Error::pre("`outer` does not apply to circle saddles"));
    }
    if ca == cb {
        // pinching one circle into two
        let c2 = created.ok_or_else(|| Error::pre("pinching a circle creates one; name it after `->`"))?;
        if d.circles.contains_key(c2) {
            return Err(Error::pre(format!("circle {c2} already exists")));
        }
        let fc = d.circles[&ca].clone();
        if pa.outer_side {
            // band outside: the new circle cuts a piece off the outside
            let outside_items: Vec<Item> = items(d)
                .into_iter()
                .filter(|(it, h)| {
                    *it != Item::Circle(ca.clone()) && topo.region_of_host(d, h).ok() == Some(pa.region.clone())
                })
                .map(|(it, _)| it)
                .collect();
            if let Some(it) = moved.iter().find(|it| !outside_items.contains(it)) {
                return Err(Error::pre(format!("split item {it:?} is not outside circle {ca}")));
            }
            out.circles.insert(c2.clone(), FreeCircle { host: Host::Circle(ca.clone()), coorient: fc.coorient.flip() });
            for it in moved {
                set_host(&mut out, it, Host::Circle(c2.clone()));
            }
        } else {
            let ins = inside(&ca);
            if let Some(it) = moved.iter().find(|it| !ins.contains(it)) {
                return Err(Error::pre(format!("split item {it:?} is not inside circle {ca}")));
            }
            out.circles.insert(c2.clone(), FreeCircle { host: fc.host.clone(), coorient: fc.coorient });
            for it in moved {
                set_host(&mut out, it, Host::Circle(c2.clone()));
            }
        }
        return finish(out);
    }
    if created.is_some() || !moved.is_empty() {
        return Err(Error::pre("a saddle joining two circles takes no extra names"));
    }
    match (pa.outer_side, pb.outer_side) {
        (true, true) => {
            out.circles.remove(&cb);
            for it in inside(&cb) {
                set_host(&mut out, &it, Host::Circle(ca.clone()));
            }
        }
        (false, true) | (true, false) => {
            let (big, small) = if pa.outer_side { (&cb, &ca) } else { (&ca, &cb) };
            let host = d.circles[big].host.clone();
            out.circles.remove(small);
            for it in inside(small) {
                set_host(&mut out, &it, host.clone());
            }
        }
        (false, false) => return Err(Error::Internal("two circles share an inside".into())),
    }
    finish(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::canon::isomorphic;
    use crate::diagram::tests::two_circles;

    fn circles_side_by_side() -> Diagram {
        let mut d = Diagram::new();
        d.add_circle("a", Host::Ambient, Coorient::Inward);
        d.add_circle("b", Host::Ambient, Coorient::Inward);
        d
    }

    fn site(s: &str) -> ArcSite {
        ArcSite::parse(s).unwrap()
    }

    #[test]
    fn arc_sites_round_trip() {
        for s in ["edge:x0", "circle:c1:inner", "circle:c:outer"] {
            assert_eq!(site(s).to_string(), s);
        }
        assert!(ArcSite::parse("circle:c1").is_none());
        assert!(ArcSite::parse("edge:").is_none());
    }

    #[test]
    fn outside_tangency_gives_two_crossing_circles() {
        let d = circles_side_by_side();
        let a = site("circle:a:outer");
        let b = site("circle:b:outer");
        let out = crossing_birth(&d, &a, &b, &["u".into(), "w".into()], [Side::Right, Side::Right], &[]).unwrap();
        assert!(isomorphic(&out, &two_circles()));
        let back = crossing_death(&out, &["u".into(), "w".into()], None, &["a".into(), "b".into()]);
        assert!(back.is_err(), "two bigons qualify without `via`");
    }

    #[test]
    fn lens_and_lune_deaths_separate_or_nest() {
        let d = two_circles();
        let topo = d.topology().unwrap();
        let mut seen = BTreeSet::new();
        for f in &topo.faces {
            let via = f.boundary[0].clone();
            let r = crossing_death(&d, &["x".into(), "y".into()], Some(&via), &["p".into(), "q".into()]);
            match r {
                Ok(out) => {
                    assert_eq!(out.circles.len(), 2);
                    let nested = out.circles.values().any(|c| matches!(c.host, Host::Circle(_)));
                    seen.insert(nested);
                    assert!(crate::numbering::alexander_numbering(&out, crate::rational::int(-1)).is_ok());
                }
                Err(e) => assert!(matches!(e, Error::Precondition(_)), "{e}"),
            }
        }
        assert_eq!(seen, BTreeSet::from([false, true]));
    }

    #[test]
    fn birth_and_death_of_inner_tangency() {
        let mut d = Diagram::new();
        d.add_circle("big", Host::Ambient, Coorient::Inward);
        d.add_circle("small", Host::Circle("big".into()), Coorient::Outward);
        let a = site("circle:big:inner");
        let b = site("circle:small:outer");
        let s = [Side::Left, Side::Left];
        let out = crossing_birth(&d, &a, &b, &["u".into(), "w".into()], s, &[]).unwrap();
        assert_eq!(out.vertex_count(), 2);
        let topo = out.topology().unwrap();
        let mut back_ok = 0;
        for f in &topo.faces {
            if let Ok(back) =
                crossing_death(&out, &["u".into(), "w".into()], Some(&f.boundary[0]), &["big".into(), "small".into()])
            {
                if isomorphic(&back, &d) {
                    back_ok += 1;
                }
            }
        }
        assert!(back_ok >= 1);
    }

    #[test]
    fn coorientation_must_match() {
        let mut d = circles_side_by_side();
        d.circles.get_mut(&CircleId::from("b")).unwrap().coorient = Coorient::Outward;
        let err = saddle(&d, &site("circle:a:outer"), &site("circle:b:outer"), None, &[]).unwrap_err();
        assert!(err.to_string().contains("coorientation mismatch"));
        let err = crossing_birth(
            &d,
            &site("circle:a:outer"),
            &site("circle:b:outer"),
            &["u".into(), "w".into()],
            [Side::Right, Side::Right],
            &[],
        )
        .unwrap_err();
        assert!(matches!(err, Error::Precondition(_)));
    }

    #[test]
    fn circle_saddles() {
        let d = circles_side_by_side();
        let out = saddle(&d, &site("circle:a:outer"), &site("circle:b:outer"), None, &[]).unwrap();
        assert_eq!(out.circles.len(), 1);
        let back = saddle(&out, &site("circle:a:inner"), &site("circle:a:inner"), Some(&"b".into()), &[]).unwrap();
        assert!(isomorphic(&back, &d));
    }

    #[test]
    fn edge_saddle_splits_and_rejoins() {
        // saddle across the lens of two crossing circles joins the two
        // outer arcs on the far sides; undoing it restores the diagram
        let d = two_circles();
        let topo = d.topology().unwrap();
        for x in d.mates.keys() {
            for y in d.mates.keys() {
                if x >= y || topo.face_index_of(x) != topo.face_index_of(y) || d.sides[x] != d.sides[y] {
                    continue;
                }
                let out = saddle(&d, &ArcSite::Edge(x.clone()), &ArcSite::Edge(y.clone()), None, &[]).unwrap();
                assert!(crate::numbering::alexander_numbering(&out, crate::rational::int(-1)).is_ok());
            }
        }
    }
}
