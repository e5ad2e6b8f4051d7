//! Generators for triangle gadgets, local quadruple-point movie pairs, the
//! repeated `Q³` braid and even-valued realizations.

use std::f64::consts::TAU;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::diagram::{Coorient, Diagram};
use crate::error::{Error, Result};
use crate::geometry::{Arrangement, Circle};
use crate::diagram::Host;
use crate::ids::DartId;
use crate::movie::{InducedSite, Movie};
use crate::slicing::{cross, dot, scale, sphere_movie, unit, Sphere, V3};
use crate::omega3::{apply_omega3, triangle_outward_count};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    In,
    Out,
}

impl Orientation {
    pub fn keyword(self) -> &'static str {
        match self {
            Orientation::In => "in",
            Orientation::Out => "out",
        }
    }

    pub fn parse(s: &str) -> Option<Orientation> {
        match s {
            "in" => Some(Orientation::In),
            "out" => Some(Orientation::Out),
            _ => None,
        }
    }
}

/// Parses a comma-separated pattern such as `in,out,in`.
pub fn parse_pattern(s: &str) -> Result<Vec<Orientation>> {
    s.split(',')
        .map(|t| Orientation::parse(t.trim()).ok_or_else(|| Error::pre(format!("bad pattern entry `{t}`"))))
        .collect()
}

pub fn format_pattern(p: &[Orientation]) -> String {
    p.iter().map(|o| o.keyword()).collect::<Vec<_>>().join(",")
}

pub fn outward(p: &[Orientation]) -> usize {
    p.iter().filter(|o| **o == Orientation::Out).count()
}

/// Every pattern of length `n`, in lexicographic order with `in < out`.
pub fn all_patterns(n: usize) -> Vec<Vec<Orientation>> {
    (0..1usize << n)
        .map(|bits| {
            (0..n)
                .map(|k| if bits >> (n - 1 - k) & 1 == 1 { Orientation::Out } else { Orientation::In })
                .collect()
        })
        .collect()
}

/// Closed-curve context of a triangle gadget.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Ambient {
    /// Three circles in Venn position.
    Venn,
    /// The Venn circles inside an extra outward-cooriented circle.
    Nested,
}

impl Ambient {
    pub const ALL: [Ambient; 2] = [Ambient::Venn, Ambient::Nested];

    pub fn keyword(self) -> &'static str {
        match self {
            Ambient::Venn => "venn",
            Ambient::Nested => "nested",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Upward,
    Downward,
}

impl Direction {
    pub fn reverse(self) -> Direction {
        match self {
            Direction::Upward => Direction::Downward,
            Direction::Downward => Direction::Upward,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            Direction::Upward => "up",
            Direction::Downward => "down",
        }
    }

    pub fn parse(s: &str) -> Option<Direction> {
        match s {
            "up" | "upward" => Some(Direction::Upward),
            "down" | "downward" => Some(Direction::Downward),
            _ => None,
        }
    }
}

impl fmt::Display for Direction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GadgetSpec {
    pub pattern: Vec<Orientation>,
    pub ambient: Ambient,
    pub direction: Direction,
}

impl GadgetSpec {
    pub fn omega3(pattern: [Orientation; 3], ambient: Ambient) -> Self {
        Self { pattern: pattern.to_vec(), ambient, direction: Direction::Upward }
    }

    pub fn q(pattern: [Orientation; 4], direction: Direction) -> Self {
        Self { pattern: pattern.to_vec(), ambient: Ambient::Venn, direction }
    }
}

fn coorient(o: Orientation) -> Coorient {
    match o {
        Orientation::In => Coorient::Inward,
        Orientation::Out => Coorient::Outward,
    }
}

#[derive(Clone, Debug)]
pub struct TriangleGadget {
    pub before: Diagram,
    /// A dart of the central triangle of `before`.
    pub face: DartId,
    pub after: Diagram,
    /// A dart of the new triangle of `after`.
    pub after_face: DartId,
}

/// Venn circles whose common part is the vanishing triangle; `pattern[k]`
/// says whether circle `k` points into or out of it.
pub fn triangle_gadget(spec: &GadgetSpec) -> Result<TriangleGadget> {
    if spec.pattern.len() != 3 {
        return Err(Error::pre(format!("triangle gadget needs 3 orientations, got {}", spec.pattern.len())));
    }
    let mut circles: Vec<Circle> = (0..3)
        .map(|k| {
            let a = TAU * k as f64 / 3.0 + 0.3;
            Circle::new(0.6 * a.cos(), 0.6 * a.sin(), 1.0, coorient(spec.pattern[k]))
        })
        .collect();
    if spec.ambient == Ambient::Nested {
        circles.push(Circle::new(0.1, -0.2, 3.0, Coorient::Outward));
    }
    let arr = Arrangement::build(&circles)?;
    arr.require_clearance(1e-3)?;
    let before = arr.diagram.clone();
    let face = match arr.host_at(0.0, 0.0)? {
        Host::Face(x) => x,
        h => return Err(Error::Internal(format!("gadget centre lies in {h}, not in a face"))),
    };
    let j = triangle_outward_count(&before, &face)?;
    if j as usize != outward(&spec.pattern) {
        return Err(Error::Internal(format!("gadget triangle has {j} outward edges")));
    }
    let (after, after_face) = apply_omega3(&before, &face)?;
    Ok(TriangleGadget { before, face, after, after_face })
}

/// Sheet normals of the local quadruple-point model.
const NORMALS: [V3; 4] = [[0.09, 1.0, -0.01], [0.99, 0.13, 0.06], [0.74, -0.41, -0.53], [-0.25, 0.8, -0.54]];
/// Radius of the spheres standing in for the planes.
const BIG: f64 = 20.0;
/// Offset of the moving sheet before and after the event.
const SHIFT: f64 = 0.05;
/// Half-height of the slab of an open Q movie.
const SLAB: f64 = 1.0;

/// Four nearly flat sheets through the origin; the moving one is shifted
/// by `delta` along its normal.
#[derive(Clone, Debug)]
struct QModel {
    normals: [V3; 4],
    /// +1 when sheet `i` points along its normal.
    arrows: [f64; 4],
    mover: usize,
    mover_out: bool,
    j: usize,
}

impl QModel {
    fn new(pattern: &[Orientation], direction: Direction) -> Result<QModel> {
        if pattern.len() != 4 {
            return Err(Error::pre(format!("Q event needs 4 orientations, got {}", pattern.len())));
        }
        let want = match direction {
            Direction::Upward => Orientation::In,
            Direction::Downward => Orientation::Out,
        };
        let mover = pattern.iter().position(|o| *o == want).ok_or_else(|| {
            Error::pre(format!(
                "a {} Q event needs a sheet cooriented {}, pattern is {}",
                direction.keyword(),
                want.keyword(),
                format_pattern(pattern)
            ))
        })?;
        let normals = NORMALS.map(unit);
        // the vanishing tetrahedron before the event: the origin and the
        // three points where the moving sheet meets the other double lines
        let delta = -SHIFT;
        let rest: Vec<usize> = (0..4).filter(|&i| i != mover).collect();
        let mut centroid = [0.0; 3];
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            let dir = cross(normals[rest[x]], normals[rest[y]]);
            let p = scale(dir, delta / dot(normals[mover], dir));
            centroid = [centroid[0] + p[0] / 4.0, centroid[1] + p[1] / 4.0, centroid[2] + p[2] / 4.0];
        }
        let mut arrows = [1.0; 4];
        for i in 0..4 {
            let level = dot(normals[i], centroid) - if i == mover { delta } else { 0.0 };
            // outward: the arrow points away from the tetrahedron
            let away = -level.signum();
            arrows[i] = if pattern[i] == Orientation::Out { away } else { -away };
        }
        Ok(QModel { normals, arrows, mover, mover_out: want == Orientation::Out, j: outward(pattern) })
    }

    fn coorient(&self, i: usize) -> Coorient {
        if self.arrows[i] > 0.0 {
            Coorient::Outward
        } else {
            Coorient::Inward
        }
    }

    fn spheres(&self, offset: V3, after: bool) -> Vec<Sphere> {
        let delta = if after { SHIFT } else { -SHIFT };
        (0..4)
            .map(|i| {
                let n = self.normals[i];
                let shift = if i == self.mover { delta } else { 0.0 };
                let c = scale(n, shift - BIG);
                Sphere { center: [c[0] + offset[0], c[1] + offset[1], c[2] + offset[2]], r: BIG, coorient: self.coorient(i) }
            })
            .collect()
    }

    /// The triangle the other three sheets cut on the moving one before the
    /// event, drawn with big circles in the moving plane.
    fn induced(&self) -> Result<InducedSite> {
        let m = self.normals[self.mover];
        let e1 = unit(cross(m, if m[0].abs() < 0.9 { [1.0, 0.0, 0.0] } else { [0.0, 1.0, 0.0] }));
        let e2 = cross(m, e1);
        let p0 = scale(m, -SHIFT);
        let mut circles = Vec::new();
        let mut lines = Vec::new();
        for i in (0..4).filter(|&i| i != self.mover) {
            let n = self.normals[i];
            let g = (dot(n, e1), dot(n, e2));
            let k = -dot(n, p0);
            let len = g.0.hypot(g.1);
            let (gx, gy) = (g.0 / len, g.1 / len);
            let foot = (gx * k / len, gy * k / len);
            circles.push(Circle::new(foot.0 - BIG * gx, foot.1 - BIG * gy, BIG, self.coorient(i)));
            lines.push((g, k));
        }
        let mut corner = (0.0, 0.0);
        for (x, y) in [(0, 1), (0, 2), (1, 2)] {
            let ((a, k1), (b, k2)) = (lines[x], lines[y]);
            let det = a.0 * b.1 - a.1 * b.0;
            corner.0 += (k1 * b.1 - k2 * a.1) / det / 3.0;
            corner.1 += (a.0 * k2 - b.0 * k1) / det / 3.0;
        }
        let arr = Arrangement::build(&circles)?;
        arr.require_clearance(1e-9)?;
        let face = match arr.host_at(corner.0, corner.1)? {
            Host::Face(x) => x,
            h => return Err(Error::Internal(format!("induced triangle lies in {h}"))),
        };
        let j3 = triangle_outward_count(&arr.diagram, &face)? as usize;
        if j3 + usize::from(self.mover_out) != self.j {
            return Err(Error::Internal(format!("induced triangle has {j3} outward edges for j = {}", self.j)));
        }
        Ok(InducedSite { slice: arr.diagram, face })
    }
}

/// Open movies of the same four sheets with the moving sheet just below and
/// just above the triple point of the other three.
#[derive(Clone, Debug)]
pub struct QLocalPair {
    pub before: Movie,
    pub after: Movie,
    pub induced: InducedSite,
    pub direction: Direction,
    /// Outward sheets of the vanishing tetrahedron before the event.
    pub j: usize,
}

pub fn q_local_pair(spec: &GadgetSpec) -> Result<QLocalPair> {
    let model = QModel::new(&spec.pattern, spec.direction)?;
    let window = Some((-SLAB, SLAB));
    let before = sphere_movie(&model.spheres([0.0; 3], false), window)?;
    let after = sphere_movie(&model.spheres([0.0; 3], true), window)?;
    for m in [&before, &after] {
        let triples = m.steps.iter().filter(|t| t.kind() == "triple").count();
        if triples != 4 || m.steps.len() != 4 {
            return Err(Error::Internal(format!("local Q movie has {} steps, {triples} of them triple points", m.steps.len())));
        }
    }
    Ok(QLocalPair { before, after, induced: model.induced()?, direction: spec.direction, j: model.j })
}

/// Two closed movies of the same surface, before and after a homotopy.
#[derive(Clone, Debug)]
pub struct MoviePair {
    pub before: Movie,
    pub after: Movie,
}

/// Spacing of the disjoint copies of the `Q³` configuration.
const COPY_STEP: V3 = [150.0, 0.0, 0.2718];

fn q3_model() -> Result<QModel> {
    QModel::new(&[Orientation::Out, Orientation::In, Orientation::In, Orientation::In], Direction::Upward)
}

/// `copies` translated `Q³` configurations, the first `passed` of them
/// with the moving sheet past the triple point.
fn braid_movie(model: &QModel, copies: usize, passed: usize) -> Result<Movie> {
    let mut spheres = Vec::new();
    for t in 0..copies {
        spheres.extend(model.spheres(scale(COPY_STEP, t as f64), t < passed));
    }
    sphere_movie(&spheres, None)
}

/// `k` successive `Q³` events on disjoint closed pieces; `reversed` runs the
/// motion backwards.
pub fn q3_braid(k: usize, reversed: bool) -> Result<MoviePair> {
    if k == 0 {
        return Err(Error::pre("q3_braid needs k >= 1"));
    }
    let model = q3_model()?;
    let start = braid_movie(&model, k, 0)?;
    let end = braid_movie(&model, k, k)?;
    Ok(if reversed { MoviePair { before: end, after: start } } else { MoviePair { before: start, after: end } })
}

/// A chain of single `Q³` events whose changes of `St(2)` add up to `n`.
pub fn even_realization(n: i64) -> Result<Vec<MoviePair>> {
    if n % 2 != 0 {
        return Err(Error::pre(format!("only even values are realizable, got {n}")));
    }
    let m = (n.unsigned_abs() / 2) as usize;
    let model = q3_model()?;
    let states: Vec<Movie> = (0..=m).map(|p| braid_movie(&model, m, p)).collect::<Result<_>>()?;
    let mut pairs: Vec<MoviePair> =
        states.windows(2).map(|w| MoviePair { before: w[0].clone(), after: w[1].clone() }).collect();
    if n > 0 {
        pairs = pairs.into_iter().rev().map(|p| MoviePair { before: p.after, after: p.before }).collect();
    }
    Ok(pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numbering::dst1_omega3;
    use crate::rational;

    #[test]
    fn gadgets_realize_every_pattern() {
        for amb in Ambient::ALL {
            for p in all_patterns(3) {
                let g = triangle_gadget(&GadgetSpec::omega3(p.clone().try_into().unwrap(), amb)).unwrap();
                assert!(g.before.validate().is_ok());
                assert!(g.after.validate().is_ok());
                let j = outward(&p) as i64;
                let d = dst1_omega3(&g.before, &g.face, rational::int(-1)).unwrap();
                assert_eq!(d, rational::int(2 * j - 3), "{p:?} {amb:?}");
            }
        }
    }

    #[test]
    fn q_pairs_follow_2j_minus_4() {
        use crate::movie::{dst2_pair, theorem37_check};
        for p in all_patterns(4) {
            for dir in [Direction::Upward, Direction::Downward] {
                let spec = GadgetSpec::q(p.clone().try_into().unwrap(), dir);
                if QModel::new(&p, dir).is_err() {
                    continue;
                }
                let q = q_local_pair(&spec).unwrap_or_else(|e| panic!("{p:?} {dir:?}: {e}"));
                let j = outward(&p) as i64;
                assert_eq!(dst2_pair(&q.before, &q.after).unwrap(), rational::int(2 * j - 4), "{p:?} {dir:?}");
                let t = theorem37_check(&q.before, &q.after, &q.induced, dir).unwrap();
                assert!(t.holds, "{p:?} {dir:?} {t:?}");
            }
        }
    }

    #[test]
    fn braid_and_even_values() {
        use crate::movie::dst2_pair;
        for (k, rev) in [(1, false), (2, true), (5, false)] {
            let t = std::time::Instant::now();
            let b = q3_braid(k, rev).unwrap();
            let d = dst2_pair(&b.before, &b.after).unwrap();
            eprintln!("k={k} {:?}", t.elapsed());
            assert_eq!(d, rational::int(if rev { 2 * k as i64 } else { -2 * k as i64 }));
        }
        assert!(even_realization(0).unwrap().is_empty());
        assert!(even_realization(3).is_err());
    }

    #[test]
    fn pattern_text() {
        let p = parse_pattern("in,out, in").unwrap();
        assert_eq!(format_pattern(&p), "in,out,in");
        assert!(parse_pattern("in,sideways").is_err());
        assert_eq!(all_patterns(4).len(), 16);
    }
}
