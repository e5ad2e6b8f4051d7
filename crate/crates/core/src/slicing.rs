//! Movies of unions of round spheres, read off horizontal slices.
//!
//! Each horizontal plane cuts the spheres in round circles. Between two
//! critical heights the slice diagram is constant; at a critical height one
//! elementary transition happens. The transition is recovered by trying the
//! candidates suggested by the geometry on the symbolic slice and keeping the
//! one whose result is isomorphic to the next geometric slice.

use crate::canon::{canonical, isomorphism_of, Isomorphism};
use crate::diagram::{Coorient, Diagram, Host};
use crate::error::{Error, Result};
use crate::geometry::{circle_name, vertex_name, Arrangement, Circle};
use crate::ids::{CircleId, DartId, VertexId};
use crate::movie::{arc_side, normalize_hosts, ArcSite, Movie, Transition};

pub(crate) type V3 = [f64; 3];

fn sub(a: V3, b: V3) -> V3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn add(a: V3, b: V3) -> V3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub(crate) fn scale(a: V3, s: f64) -> V3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub(crate) fn dot(a: V3, b: V3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn cross(a: V3, b: V3) -> V3 {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

pub(crate) fn unit(a: V3) -> V3 {
    scale(a, 1.0 / dot(a, a).sqrt())
}

#[derive(Clone, Copy, Debug)]
pub(crate) struct Sphere {
    pub center: V3,
    pub r: f64,
    pub coorient: Coorient,
}

#[derive(Clone, Copy, Debug)]
enum Event {
    Birth(usize),
    Death(usize),
    /// Lowest point of the intersection circle of two spheres.
    CrossingBirth(usize, usize, V3),
    CrossingDeath(usize, usize),
    Triple([usize; 3], V3),
}

/// Centre, radius and axis of the intersection circle of two spheres.
fn pair_circle(a: &Sphere, b: &Sphere) -> Option<(V3, f64, V3)> {
    let d = sub(b.center, a.center);
    let dist = dot(d, d).sqrt();
    if dist >= a.r + b.r || dist <= (a.r - b.r).abs() {
        return None;
    }
    let along = (a.r * a.r - b.r * b.r + dist * dist) / (2.0 * dist);
    let u = scale(d, 1.0 / dist);
    Some((add(a.center, scale(u, along)), (a.r * a.r - along * along).sqrt(), u))
}

/// Radical plane of two spheres as `n·x = k`.
fn radical(a: &Sphere, b: &Sphere) -> (V3, f64) {
    let n = scale(sub(b.center, a.center), 2.0);
    let k = dot(b.center, b.center) - dot(a.center, a.center) - b.r * b.r + a.r * a.r;
    (n, k)
}

fn triple_points(a: &Sphere, b: &Sphere, c: &Sphere) -> Vec<V3> {
    let (n1, k1) = radical(a, b);
    let (n2, k2) = radical(a, c);
    let dir = cross(n1, n2);
    let dd = dot(dir, dir);
    if dd < 1e-18 {
        return Vec::new();
    }
    let p0 = scale(add(scale(cross(n2, dir), k1), scale(cross(dir, n1), k2)), 1.0 / dd);
    let w = sub(p0, a.center);
    let (qa, qb, qc) = (dd, 2.0 * dot(dir, w), dot(w, w) - a.r * a.r);
    let disc = qb * qb - 4.0 * qa * qc;
    if disc <= 0.0 {
        return Vec::new();
    }
    let s = disc.sqrt();
    [(-qb - s) / (2.0 * qa), (-qb + s) / (2.0 * qa)].iter().map(|t| add(p0, scale(dir, *t))).collect()
}

fn events(s: &[Sphere]) -> Result<Vec<(f64, Event)>> {
    let mut out = Vec::new();
    for (i, a) in s.iter().enumerate() {
        out.push((a.center[2] - a.r, Event::Birth(i)));
        out.push((a.center[2] + a.r, Event::Death(i)));
    }
    for i in 0..s.len() {
        for j in i + 1..s.len() {
            let Some((m, rho, u)) = pair_circle(&s[i], &s[j]) else { continue };
            let up = sub([0.0, 0.0, 1.0], scale(u, u[2]));
            if dot(up, up) < 1e-12 {
                return Err(Error::Model(format!("spheres {i} and {j} meet in a horizontal circle")));
            }
            let w = scale(unit(up), rho);
            let (lo, hi) = (sub(m, w), add(m, w));
            out.push((lo[2], Event::CrossingBirth(i, j, lo)));
            out.push((hi[2], Event::CrossingDeath(i, j)));
            for k in j + 1..s.len() {
                for p in triple_points(&s[i], &s[j], &s[k]) {
                    out.push((p[2], Event::Triple([i, j, k], p)));
                }
            }
        }
    }
    out.sort_by(|a, b| a.0.total_cmp(&b.0));
    Ok(out)
}

/// Geometric slice at one height.
struct Slice {
    arr: Arrangement,
    diagram: Diagram,
    /// Sphere of each circle of the arrangement.
    alive: Vec<usize>,
}

impl Slice {
    fn at(s: &[Sphere], z: f64) -> Result<Slice> {
        let mut circles = Vec::new();
        let mut alive = Vec::new();
        for (i, sp) in s.iter().enumerate() {
            let dz = z - sp.center[2];
            if dz.abs() < sp.r {
                circles.push(Circle::new(sp.center[0], sp.center[1], (sp.r * sp.r - dz * dz).sqrt(), sp.coorient));
                alive.push(i);
            }
        }
        let arr = Arrangement::build(&circles)?;
        arr.require_clearance(1e-9)?;
        let diagram = normalize_hosts(&arr.diagram)?;
        Ok(Slice { arr, diagram, alive })
    }

    fn pos(&self, sphere: usize) -> Result<usize> {
        self.alive
            .iter()
            .position(|&i| i == sphere)
            .ok_or_else(|| Error::Internal(format!("sphere {sphere} is not cut by the slice")))
    }
}

fn vertex_of(x: &DartId) -> VertexId {
    VertexId::from(x.0.rsplit_once('.').map_or(x.0.as_str(), |(v, _)| v))
}

struct Names(usize);

impl Names {
    fn circle(&mut self) -> CircleId {
        self.0 += 1;
        CircleId::new(format!("s{}", self.0))
    }

    fn vertex(&mut self) -> VertexId {
        self.0 += 1;
        VertexId::new(format!("t{}", self.0))
    }
}

fn map_dart(phi: &Isomorphism, x: &DartId) -> Result<DartId> {
    phi.darts.get(x).cloned().ok_or_else(|| Error::Internal(format!("dart {x} has no image")))
}

fn map_circle(phi: &Isomorphism, c: &CircleId) -> Result<CircleId> {
    phi.circles.get(c).cloned().ok_or_else(|| Error::Internal(format!("circle {c} has no image")))
}

fn map_vertex(phi: &Isomorphism, v: &VertexId) -> Result<VertexId> {
    Ok(vertex_of(&map_dart(phi, &DartId::new(format!("{v}.0")))?))
}

fn map_host(phi: &Isomorphism, h: &Host) -> Result<Host> {
    Ok(match h {
        Host::Ambient => Host::Ambient,
        Host::Face(x) => Host::Face(map_dart(phi, x)?),
        Host::Circle(c) => Host::Circle(map_circle(phi, c)?),
    })
}

/// The arc of circle `a` nearest to the point `(x, y)`, named from the side
/// containing `(qx, qy)`.
fn arc_site(g: &Slice, phi: &Isomorphism, a: usize, near: (f64, f64), q: (f64, f64)) -> Result<ArcSite> {
    let c = g.arr.circles[a];
    let inside = (q.0 - c.cx).hypot(q.1 - c.cy) < c.r;
    if g.arr.arcs[a].is_empty() {
        return Ok(ArcSite::Circle { circle: map_circle(phi, &circle_name(a))?, inner: inside });
    }
    let theta = (near.1 - c.cy).atan2(near.0 - c.cx).rem_euclid(std::f64::consts::TAU);
    let (fwd, back) = g.arr.arc_at(a, theta).expect("circle has crossings");
    Ok(ArcSite::Edge(map_dart(phi, if inside { &fwd } else { &back })?))
}

fn nearest_on(c: &Circle, p: (f64, f64)) -> (f64, f64) {
    let (dx, dy) = (p.0 - c.cx, p.1 - c.cy);
    let l = dx.hypot(dy);
    (c.cx + c.r * dx / l, c.cy + c.r * dy / l)
}

fn split_lists(s: &Diagram) -> Vec<Vec<String>> {
    let mut items: Vec<String> = s.anchors().keys().map(|x| x.to_string()).collect();
    items.extend(s.circles().keys().map(|c| c.to_string()));
    let mut base: Vec<Vec<String>> = vec![Vec::new()];
    base.extend(items.iter().map(|x| vec![x.clone()]));
    for (i, x) in items.iter().enumerate() {
        for y in &items[i + 1..] {
            base.push(vec![x.clone(), y.clone()]);
        }
    }
    let mut out = Vec::new();
    for b in base {
        let mut with_outer = b.clone();
        with_outer.insert(0, "outer".to_owned());
        out.push(b);
        out.push(with_outer);
    }
    out
}

fn candidates(ev: &Event, sp: &[Sphere], g: &Slice, phi: &Isomorphism, s: &Diagram, names: &mut Names) -> Result<Vec<Transition>> {
    let mut out = Vec::new();
    match *ev {
        Event::Birth(i) => {
            let circle = names.circle();
            let coorient = sp[i].coorient;
            let hint = map_host(phi, &g.arr.host_at(sp[i].center[0], sp[i].center[1])?)?;
            let mut hosts = vec![hint, Host::Ambient];
            hosts.extend(s.circles().keys().map(|c| Host::Circle(c.clone())));
            hosts.extend(s.faces()?.into_iter().map(|f| Host::Face(f.id)));
            for host in hosts {
                out.push(Transition::Birth { circle: circle.clone(), host, coorient });
            }
        }
        Event::Death(i) => {
            out.push(Transition::Death { circle: map_circle(phi, &circle_name(g.pos(i)?))? });
        }
        Event::CrossingBirth(i, j, p) => {
            let (a, b) = (g.pos(i)?, g.pos(j)?);
            let pa = nearest_on(&g.arr.circles[a], (p[0], p[1]));
            let pb = nearest_on(&g.arr.circles[b], (p[0], p[1]));
            let q = ((pa.0 + pb.0) / 2.0, (pa.1 + pb.1) / 2.0);
            let sa = arc_site(g, phi, a, pa, q)?;
            let sb = arc_site(g, phi, b, pb, q)?;
            let sides = [arc_side(s, &sa)?, arc_side(s, &sb)?];
            let vertices = [names.vertex(), names.vertex()];
            for split in split_lists(s) {
                out.push(Transition::CrossingBirth {
                    a: sa.clone(),
                    b: sb.clone(),
                    vertices: vertices.clone(),
                    sides,
                    split,
                });
            }
        }
        Event::CrossingDeath(i, j) => {
            let (a, b) = (g.pos(i)?, g.pos(j)?);
            let (lo, hi) = (a.min(b), a.max(b));
            let vertices = [map_vertex(phi, &vertex_name(lo, hi, true))?, map_vertex(phi, &vertex_name(lo, hi, false))?];
            let fresh = [names.circle(), names.circle()];
            let mut vias = vec![None];
            for v in &vertices {
                vias.extend((0..4).map(|k| Some(DartId::new(format!("{v}.{k}")))));
            }
            for n in 0..=2 {
                for via in &vias {
                    out.push(Transition::CrossingDeath {
                        vertices: vertices.clone(),
                        via: via.clone(),
                        created: fresh[..n].to_vec(),
                    });
                }
            }
        }
        Event::Triple(t, p) => {
            let pos = [g.pos(t[0])?, g.pos(t[1])?, g.pos(t[2])?];
            let mut vs = Vec::new();
            for (x, y) in [(0, 1), (0, 2), (1, 2)] {
                let (lo, hi) = (pos[x].min(pos[y]), pos[x].max(pos[y]));
                let near = [true, false]
                    .into_iter()
                    .map(|left| vertex_name(lo, hi, left))
                    .filter_map(|v| g.arr.positions.get(&v).map(|q| ((q.0 - p[0]).hypot(q.1 - p[1]), v)))
                    .min_by(|a, b| a.0.total_cmp(&b.0))
                    .ok_or_else(|| Error::Internal(format!("circles {lo} and {hi} do not cross before a triple point")))?;
                vs.push(map_vertex(phi, &near.1)?);
            }
            out.push(Transition::Triple { vertices: [vs[0].clone(), vs[1].clone(), vs[2].clone()] });
        }
    }
    Ok(out)
}

fn describe(ev: &Event) -> String {
    match ev {
        Event::Birth(i) => format!("birth of sphere {i}"),
        Event::Death(i) => format!("death of sphere {i}"),
        Event::CrossingBirth(i, j, _) => format!("crossing birth of spheres {i}, {j}"),
        Event::CrossingDeath(i, j) => format!("crossing death of spheres {i}, {j}"),
        Event::Triple(t, _) => format!("triple point of spheres {t:?}"),
    }
}

/// Minimal separation of critical heights accepted as generic.
const GAP: f64 = 1e-6;

/// The movie of the spheres between heights `window`, or the closed movie of
/// the whole union when `window` is `None`.
pub(crate) fn sphere_movie(sp: &[Sphere], window: Option<(f64, f64)>) -> Result<Movie> {
    let all = events(sp)?;
    let (lo, hi) = match window {
        Some(w) => w,
        None => (all.first().map_or(0.0, |e| e.0) - 1.0, all.last().map_or(0.0, |e| e.0) + 1.0),
    };
    let evs: Vec<(f64, Event)> = all.into_iter().filter(|e| e.0 > lo && e.0 < hi).collect();
    let mut marks = vec![lo];
    marks.extend(evs.iter().map(|e| e.0));
    marks.push(hi);
    if let Some(w) = marks.windows(2).find(|w| w[1] - w[0] < GAP) {
        return Err(Error::Model(format!("critical heights {} and {} are too close", w[0], w[1])));
    }
    let heights: Vec<f64> = (0..=evs.len())
        .map(|k| match (k, window) {
            (0, Some(_)) => lo,
            (k, Some(_)) if k == evs.len() => hi,
            _ => (marks[k] + marks[k + 1]) / 2.0,
        })
        .collect();
    let mut g = Slice::at(sp, heights[0])?;
    let initial = if window.is_some() { g.diagram.clone() } else { Diagram::new() };
    let mut s = initial.clone();
    let mut g_can = canonical(&g.diagram)?;
    let mut s_can = canonical(&s)?;
    let mut steps = Vec::new();
    let mut names = Names(0);
    for (k, (z, ev)) in evs.iter().enumerate() {
        let next = Slice::at(sp, heights[k + 1])?;
        let next_can = canonical(&next.diagram)?;
        let phi = isomorphism_of(&g_can, &s_can)
            .ok_or_else(|| Error::Internal(format!("symbolic slice lost track of the geometry before height {z}")))?;
        let mut chosen = None;
        for t in candidates(ev, sp, &g, &phi, &s, &mut names)? {
            if let Ok(n) = t.apply(&s) {
                match canonical(&n) {
                    Ok(c) if c.code == next_can.code => {
                        chosen = Some((t, n, c));
                        break;
                    }
                    _ => {}
                }
            }
        }
        let (t, n, c) = chosen
            .ok_or_else(|| Error::Internal(format!("no transition realizes the {} at height {z}", describe(ev))))?;
        steps.push(t);
        s = n;
        s_can = c;
        g = next;
        g_can = next_can;
    }
    Ok(match window {
        Some(_) => Movie::open(initial, steps),
        None => Movie::closed(steps),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::movie::{run, st2};
    use crate::rational;

    fn ball(c: V3, r: f64, co: Coorient) -> Sphere {
        Sphere { center: c, r, coorient: co }
    }

    #[test]
    fn triple_points_lie_on_all_spheres() {
        let s = [
            ball([0.0, 0.0, 0.0], 1.0, Coorient::Outward),
            ball([1.1, 0.1, 0.2], 1.0, Coorient::Outward),
            ball([0.4, 0.9, -0.1], 1.0, Coorient::Outward),
        ];
        let pts = triple_points(&s[0], &s[1], &s[2]);
        assert_eq!(pts.len(), 2);
        for p in pts {
            for b in &s {
                let d = sub(p, b.center);
                assert!((dot(d, d).sqrt() - b.r).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn single_sphere_is_birth_then_death() {
        let m = sphere_movie(&[ball([0.0, 0.0, 0.0], 1.0, Coorient::Outward)], None).unwrap();
        let kinds: Vec<&str> = m.steps.iter().map(|t| t.kind()).collect();
        assert_eq!(kinds, ["birth", "death"]);
    }

    #[test]
    fn three_spheres_give_two_triple_points() {
        let s = [
            ball([0.0, 0.0, 0.0], 1.0, Coorient::Outward),
            ball([1.1, 0.13, 0.21], 1.05, Coorient::Inward),
            ball([0.43, 0.91, -0.17], 0.95, Coorient::Outward),
        ];
        let m = sphere_movie(&s, None).unwrap();
        assert_eq!(m.steps.iter().filter(|t| t.kind() == "triple").count(), 2);
        run(&m).unwrap();
        let v = st2(&m).unwrap();
        assert!(rational::is_integer(&v));
    }
}
