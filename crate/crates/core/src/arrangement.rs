//! Local models of up to four cooriented sheets in a ball, as complexes of
//! sign-vector cells.
//!
//! Linear sheets are enumerated exactly by rational elimination; quadric
//! sheets by dense sampling. The index of a cell is
//! `base + #plus + #zeros/2`, where `plus` means "on the arrow side".

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::constructions::{format_pattern, outward, Orientation};
use crate::error::{Error, Result};
use crate::rational::{self, Rational};
use crate::text::syntax;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `z = x² + y² − t`
    E,
    /// `z = x² − y² − t`
    H,
    /// `z = y + x² − t`
    T,
}

impl Family {
    pub fn keyword(self) -> &'static str {
        match self {
            Family::E => "E",
            Family::H => "H",
            Family::T => "T",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SheetKind {
    /// `a x + b y + c z + d`
    Plane { a: Rational, b: Rational, c: Rational, d: Rational },
    /// `z − q(x, y) + t` for the family's graph `z = q(x, y) − t`.
    Quadric { family: Family, t: Rational },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Sheet {
    pub kind: SheetKind,
    /// `+1`: the arrow points to the positive side of the model function.
    pub coorient: i8,
}

fn f(q: &Rational) -> f64 {
    *q.numer() as f64 / *q.denom() as f64
}

impl Sheet {
    pub fn plane(a: i64, b: i64, c: i64, d: i64, coorient: i8) -> Sheet {
        let r = rational::int;
        Sheet { kind: SheetKind::Plane { a: r(a), b: r(b), c: r(c), d: r(d) }, coorient }
    }

    pub fn quadric(family: Family, t: Rational, coorient: i8) -> Sheet {
        Sheet { kind: SheetKind::Quadric { family, t }, coorient }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self.kind, SheetKind::Plane { .. })
    }

    pub fn value(&self, p: [f64; 3]) -> f64 {
        let [x, y, z] = p;
        match &self.kind {
            SheetKind::Plane { a, b, c, d } => f(a) * x + f(b) * y + f(c) * z + f(d),
            SheetKind::Quadric { family, t } => {
                let q = match family {
                    Family::E => x * x + y * y,
                    Family::H => x * x - y * y,
                    Family::T => y + x * x,
                };
                z - q + f(t)
            }
        }
    }

    fn value_exact(&self, p: &[Rational; 3]) -> Rational {
        match &self.kind {
            SheetKind::Plane { a, b, c, d } => a * p[0] + b * p[1] + c * p[2] + d,
            SheetKind::Quadric { family, t } => {
                let (x, y, z) = (p[0], p[1], p[2]);
                let q = match family {
                    Family::E => x * x + y * y,
                    Family::H => x * x - y * y,
                    Family::T => y + x * x,
                };
                z - q + t
            }
        }
    }
}

/// One entry per sheet: `-1`, `0` or `+1` for the side of the model function.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct SignVector(pub Vec<i8>);

impl SignVector {
    pub fn zeros(&self) -> usize {
        self.0.iter().filter(|s| **s == 0).count()
    }

    pub fn dim(&self) -> usize {
        3usize.saturating_sub(self.zeros())
    }

    /// All sign vectors obtained by replacing each zero with `±1`.
    pub fn resolutions(&self) -> Vec<SignVector> {
        let mut out = vec![self.0.clone()];
        for (i, s) in self.0.iter().enumerate() {
            if *s != 0 {
                continue;
            }
            out = out
                .into_iter()
                .flat_map(|v| {
                    [-1, 1].map(|e| {
                        let mut w = v.clone();
                        w[i] = e;
                        w
                    })
                })
                .collect();
        }
        out.into_iter().map(SignVector).collect()
    }
}

impl fmt::Display for SignVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for s in &self.0 {
            f.write_str(match s {
                -1 => "-",
                0 => "0",
                _ => "+",
            })?;
        }
        Ok(())
    }
}

impl FromStr for SignVector {
    type Err = Error;

    fn from_str(s: &str) -> Result<SignVector> {
        s.chars()
            .map(|c| match c {
                '-' | '−' => Ok(-1),
                '0' => Ok(0),
                '+' => Ok(1),
                other => Err(Error::pre(format!("bad sign `{other}`"))),
            })
            .collect::<Result<Vec<i8>>>()
            .map(SignVector)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Cell {
    pub signs: SignVector,
    pub point: [f64; 3],
    /// Exact representative, for linear models.
    pub exact: Option<[Rational; 3]>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CellComplex {
    pub sheets: Vec<Sheet>,
    pub radius: f64,
    /// One entry per connected cell.
    pub cells: Vec<Cell>,
    /// Sampling margin, for sampled complexes.
    pub margin: Option<f64>,
}

/// `base + #plus + #zeros/2`, `plus` counted along the coorientations.
pub fn cell_index(sheets: &[Sheet], signs: &SignVector, base: Rational) -> Rational {
    let plus = signs.0.iter().zip(sheets).filter(|(s, sh)| **s != 0 && **s == sh.coorient).count();
    base + rational::int(plus as i64) + Rational::new(signs.zeros() as i64, 2)
}

impl CellComplex {
    pub fn of_dim(&self, k: usize) -> impl Iterator<Item = &Cell> {
        self.cells.iter().filter(move |c| c.signs.dim() == k)
    }

    pub fn count(&self, k: usize) -> usize {
        self.of_dim(k).count()
    }

    pub fn sigma(&self, k: usize, base: Rational) -> Rational {
        self.of_dim(k).map(|c| cell_index(&self.sheets, &c.signs, base)).sum()
    }

    pub fn sign_vectors(&self) -> BTreeSet<SignVector> {
        self.cells.iter().map(|c| c.signs.clone()).collect()
    }
}

// ---------------------------------------------------------------------------
// exact enumeration

/// `a·x + c` compared with zero.
#[derive(Clone, Debug)]
struct Lin {
    a: Vec<Rational>,
    c: Rational,
    eq: bool,
}

/// A point satisfying every constraint (`> 0` or `= 0`), by Fourier–Motzkin
/// elimination of the last variable and back-substitution.
fn solve(cons: &[Lin], n: usize) -> Option<Vec<Rational>> {
    if n == 0 {
        let ok = cons.iter().all(|l| if l.eq { l.c.is_zero() } else { l.c > Rational::zero() });
        return ok.then(Vec::new);
    }
    let v = n - 1;
    let drop = |l: &Lin| Lin { a: l.a[..v].to_vec(), c: l.c, eq: l.eq };
    if let Some(e) = cons.iter().find(|l| l.eq && !l.a[v].is_zero()) {
        // x_v = −(a'·x + c)/a_v
        let k = e.a[v];
        let sub = |l: &Lin| {
            let r = l.a[v] / k;
            Lin { a: (0..v).map(|i| l.a[i] - r * e.a[i]).collect(), c: l.c - r * e.c, eq: l.eq }
        };
        let rest: Vec<Lin> = cons.iter().filter(|l| !std::ptr::eq(*l, e)).map(sub).collect();
        let mut x = solve(&rest, v)?;
        let partial: Rational = (0..v).map(|i| e.a[i] * x[i]).sum::<Rational>() + e.c;
        x.push(-partial / k);
        return Some(x);
    }
    let mut rest = Vec::new();
    let (mut lower, mut upper) = (Vec::new(), Vec::new());
    for l in cons {
        let a = l.a[v];
        if a.is_zero() {
            rest.push(drop(l));
        } else if a.is_positive() {
            lower.push(l);
        } else {
            upper.push(l);
        }
    }
    for lo in &lower {
        for up in &upper {
            // lo: a x_v + p > 0, up: −b x_v + q > 0  ⇒  b p + a q > 0
            let (a, b) = (lo.a[v], -up.a[v]);
            rest.push(Lin {
                a: (0..v).map(|i| b * lo.a[i] + a * up.a[i]).collect(),
                c: b * lo.c + a * up.c,
                eq: false,
            });
        }
    }
    let mut x = solve(&rest, v)?;
    let bound = |l: &Lin| -((0..v).map(|i| l.a[i] * x[i]).sum::<Rational>() + l.c) / l.a[v];
    let lmax = lower.iter().map(|l| bound(l)).max();
    let umin = upper.iter().map(|l| bound(l)).min();
    let zero = Rational::zero();
    let one = rational::int(1);
    let val = match (lmax, umin) {
        (None, None) => zero,
        (Some(l), None) => if l < zero { zero } else { l + one },
        (None, Some(u)) => if u > zero { zero } else { u - one },
        (Some(l), Some(u)) => if l < zero && zero < u { zero } else { (l + u) / 2 },
    };
    x.push(val);
    Some(x)
}

fn plane_coeffs(s: &Sheet) -> Result<([Rational; 3], Rational)> {
    match &s.kind {
        SheetKind::Plane { a, b, c, d } => Ok(([*a, *b, *c], *d)),
        SheetKind::Quadric { .. } => Err(Error::pre("exact enumeration handles planes only")),
    }
}

fn all_sign_vectors(n: usize) -> Vec<SignVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i8>| [-1, 0, 1].map(|s| [v.clone(), vec![s]].concat())).collect();
    }
    out.into_iter().map(SignVector).collect()
}

fn check_planes(sheets: &[Sheet]) -> Result<Vec<([Rational; 3], Rational)>> {
    if sheets.len() > 4 {
        return Err(Error::pre(format!("at most 4 sheets, got {}", sheets.len())));
    }
    let planes: Vec<([Rational; 3], Rational)> = sheets.iter().map(plane_coeffs).collect::<Result<_>>()?;
    for (i, (n, _)) in planes.iter().enumerate() {
        if n.iter().all(Zero::is_zero) {
            return Err(Error::pre(format!("sheet {i} has a zero normal")));
        }
        for (j, (m, _)) in planes.iter().enumerate().skip(i + 1) {
            let cr = [n[1] * m[2] - n[2] * m[1], n[2] * m[0] - n[0] * m[2], n[0] * m[1] - n[1] * m[0]];
            if cr.iter().all(Zero::is_zero) {
                return Err(Error::Model(format!("sheets {i} and {j} are parallel")));
            }
        }
    }
    Ok(planes)
}

fn box_constraints(half: Rational) -> Vec<Lin> {
    let z = Rational::zero();
    let mut out = Vec::new();
    for i in 0..3 {
        for s in [1, -1] {
            let mut a = vec![z; 3];
            a[i] = rational::int(s);
            out.push(Lin { a, c: half, eq: false });
        }
    }
    out
}

/// Exact cells of at most four planes inside the open ball of `radius`.
///
/// A sign vector is feasible when its system has a solution in the cube
/// `|x_i| < radius`; the representative must then lie in the ball, or the
/// system must be feasible in the inscribed cube `|x_i| < 4/7 radius`.
pub fn enumerate_cells_linear(sheets: &[Sheet], radius: Rational) -> Result<CellComplex> {
    let planes = check_planes(sheets)?;
    let r2 = radius * radius;
    let mut cells = Vec::new();
    for sv in all_sign_vectors(sheets.len()) {
        let mut cons: Vec<Lin> = planes
            .iter()
            .zip(&sv.0)
            .map(|((n, d), s)| {
                let k = rational::int(if *s == 0 { 1 } else { *s as i64 });
                Lin { a: n.iter().map(|x| x * k).collect(), c: d * k, eq: *s == 0 }
            })
            .collect();
        let base = cons.len();
        cons.extend(box_constraints(radius));
        let mut found = solve(&cons, 3).filter(|p| p.iter().map(|x| x * x).sum::<Rational>() < r2);
        if found.is_none() {
            cons.truncate(base);
            cons.extend(box_constraints(radius * Rational::new(4, 7)));
            found = solve(&cons, 3);
        }
        if let Some(p) = found {
            let exact = [p[0], p[1], p[2]];
            debug_assert!(sheets.iter().zip(&sv.0).all(|(sh, s)| {
                let v = sh.value_exact(&exact);
                if *s == 0 { v.is_zero() } else { v.signum() == rational::int(*s as i64) }
            }));
            cells.push(Cell { signs: sv, point: exact.map(|q| f(&q)), exact: Some(exact) });
        }
    }
    Ok(CellComplex { sheets: sheets.to_vec(), radius: f(&radius), cells, margin: None })
}

// ---------------------------------------------------------------------------
// sampled enumeration

/// Even, so that no sample lies on a coordinate plane.
pub const DEFAULT_RESOLUTION: usize = 60;
/// Side of the sample blocks that witness lower cells.
const BLOCK: usize = 4;

struct Grid {
    n: usize,
    step: f64,
    radius: f64,
}

impl Grid {
    fn point(&self, i: usize, j: usize, k: usize) -> [f64; 3] {
        [i, j, k].map(|u| -self.radius + u as f64 * self.step)
    }

    fn id(&self, i: usize, j: usize, k: usize) -> usize {
        (i * self.n + j) * self.n + k
    }
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    let mut c = x;
    while p[c] != r {
        let n = p[c];
        p[c] = r;
        c = n;
    }
    r
}

fn union(p: &mut [usize], a: usize, b: usize) {
    let (ra, rb) = (find(p, a), find(p, b));
    if ra != rb {
        p[ra.max(rb)] = ra.min(rb);
    }
}

/// Cells by sampling a grid of `resolution³` points of the cube around the
/// ball. Regions are connected classes of samples; a vector with zeros is a
/// cell where a small block of samples shows all its resolutions.
pub fn enumerate_cells_sampled(sheets: &[Sheet], radius: f64, resolution: usize) -> Result<CellComplex> {
    if sheets.is_empty() || sheets.len() > 4 {
        return Err(Error::pre(format!("need 1 to 4 sheets, got {}", sheets.len())));
    }
    if resolution < 5 {
        return Err(Error::Resolution { resolution, reason: "at least 5 samples per axis".into() });
    }
    let g = Grid { n: resolution, step: 2.0 * radius / (resolution - 1) as f64, radius };
    let n = g.n;
    let mut signs: Vec<Option<SignVector>> = vec![None; n * n * n];
    let mut margin = f64::INFINITY;
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let p = g.point(i, j, k);
                if p.iter().map(|x| x * x).sum::<f64>() >= radius * radius {
                    continue;
                }
                let vals: Vec<f64> = sheets.iter().map(|s| s.value(p)).collect();
                let m = vals.iter().fold(f64::INFINITY, |a, v| a.min(v.abs()));
                if m < 1e-12 {
                    continue;
                }
                margin = margin.min(m);
                signs[g.id(i, j, k)] = Some(SignVector(vals.iter().map(|v| if *v > 0.0 { 1 } else { -1 }).collect()));
            }
        }
    }
    // regions: 6-connected classes of equal sign vectors
    let mut parent: Vec<usize> = (0..signs.len()).collect();
    let nb = |i: usize, j: usize, k: usize| -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        if i + 1 < n {
            out.push((i + 1, j, k));
        }
        if j + 1 < n {
            out.push((i, j + 1, k));
        }
        if k + 1 < n {
            out.push((i, j, k + 1));
        }
        out
    };
    let mut two_step: BTreeSet<SignVector> = BTreeSet::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let a = g.id(i, j, k);
                let Some(sa) = &signs[a] else { continue };
                for (x, y, z) in nb(i, j, k) {
                    let b = g.id(x, y, z);
                    let Some(sb) = &signs[b] else { continue };
                    if sa == sb {
                        union(&mut parent, a, b);
                    } else {
                        let diff: Vec<usize> = (0..sheets.len()).filter(|&q| sa.0[q] != sb.0[q]).collect();
                        if diff.len() >= 2 {
                            let mut w = sa.0.clone();
                            for q in diff {
                                w[q] = 0;
                            }
                            two_step.insert(SignVector(w));
                        }
                    }
                }
            }
        }
    }
    let mut cells = Vec::new();
    let mut seen = BTreeSet::new();
    for idx in 0..signs.len() {
        let Some(s) = &signs[idx] else { continue };
        let r = find(&mut parent, idx);
        if seen.insert(r) {
            let (i, rem) = (r / (n * n), r % (n * n));
            cells.push(Cell { signs: s.clone(), point: g.point(i, rem / n, rem % n), exact: None });
        }
    }
    // lower cells: witnesses in blocks, clustered by block adjacency
    let mut witnesses: BTreeMap<SignVector, Vec<(usize, usize, usize)>> = BTreeMap::new();
    let last = n.saturating_sub(BLOCK - 1);
    for i in 0..last {
        for j in 0..last {
            for k in 0..last {
                let mut here: BTreeSet<&SignVector> = BTreeSet::new();
                for di in 0..BLOCK {
                    for dj in 0..BLOCK {
                        for dk in 0..BLOCK {
                            if let Some(s) = &signs[g.id(i + di, j + dj, k + dk)] {
                                here.insert(s);
                            }
                        }
                    }
                }
                if here.len() < 2 {
                    continue;
                }
                let mut found = BTreeSet::new();
                for v in &here {
                    for mask in 1u32..(1 << sheets.len()) {
                        if mask.count_ones() > 3 {
                            continue;
                        }
                        let mut w = v.0.clone();
                        for (q, e) in w.iter_mut().enumerate() {
                            if mask >> q & 1 == 1 {
                                *e = 0;
                            }
                        }
                        let w = SignVector(w);
                        if !found.contains(&w) && w.resolutions().iter().all(|r| here.contains(r)) {
                            found.insert(w);
                        }
                    }
                }
                for w in found {
                    witnesses.entry(w).or_default().push((i, j, k));
                }
            }
        }
    }
    for (w, blocks) in &witnesses {
        let index: BTreeMap<(usize, usize, usize), usize> = blocks.iter().enumerate().map(|(a, b)| (*b, a)).collect();
        let mut p: Vec<usize> = (0..blocks.len()).collect();
        for (a, &(i, j, k)) in blocks.iter().enumerate() {
            for (di, dj, dk) in [(1, 0, 0), (0, 1, 0), (0, 0, 1), (1, 1, 0), (1, 0, 1), (0, 1, 1), (1, 1, 1), (1, -1, 0), (1, 0, -1), (0, 1, -1), (1, 1, -1), (1, -1, 1), (-1, 1, 1)] {
                let q = (i as i64 + di, j as i64 + dj, k as i64 + dk);
                if q.0 < 0 || q.1 < 0 || q.2 < 0 {
                    continue;
                }
                if let Some(&b) = index.get(&(q.0 as usize, q.1 as usize, q.2 as usize)) {
                    union(&mut p, a, b);
                }
            }
        }
        let mut roots = BTreeSet::new();
        for a in 0..blocks.len() {
            if roots.insert(find(&mut p, a)) {
                let (i, j, k) = blocks[a];
                cells.push(Cell { signs: w.clone(), point: g.point(i + BLOCK / 2, j + BLOCK / 2, k + BLOCK / 2), exact: None });
            }
        }
    }
    // two sheets crossed between neighbouring samples with no witnessed cell
    let accepted: BTreeSet<&SignVector> = witnesses.keys().collect();
    if let Some(w) = two_step.iter().find(|w| !accepted.contains(w)) {
        return Err(Error::Resolution {
            resolution,
            reason: format!("neighbouring samples jump across the cell {w} without resolving it"),
        });
    }
    cells.sort_by(|a, b| a.signs.cmp(&b.signs));
    Ok(CellComplex { sheets: sheets.to_vec(), radius, cells, margin: Some(margin / 2.0) })
}

// ---------------------------------------------------------------------------
// event models

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventKind {
    E,
    H,
    T,
    Q,
}

impl EventKind {
    pub const ALL: [EventKind; 4] = [EventKind::E, EventKind::H, EventKind::T, EventKind::Q];

    pub fn sheets(self) -> usize {
        match self {
            EventKind::E | EventKind::H => 2,
            EventKind::T => 3,
            EventKind::Q => 4,
        }
    }

    pub fn keyword(self) -> &'static str {
        match self {
            EventKind::E => "E",
            EventKind::H => "H",
            EventKind::T => "T",
            EventKind::Q => "Q",
        }
    }

    pub fn parse(s: &str) -> Option<EventKind> {
        EventKind::ALL.into_iter().find(|k| k.keyword().eq_ignore_ascii_case(s))
    }
}

/// The twelve cooriented event types of the table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EventType {
    E0,
    E1,
    E2,
    T0,
    T1,
    T2,
    T3,
    HPlus,
    HMinus,
    Q4,
    Q3,
    Q2,
}

impl EventType {
    pub const ALL: [EventType; 12] = [
        EventType::E0,
        EventType::E1,
        EventType::E2,
        EventType::T0,
        EventType::T1,
        EventType::T2,
        EventType::T3,
        EventType::HPlus,
        EventType::HMinus,
        EventType::Q4,
        EventType::Q3,
        EventType::Q2,
    ];

    pub fn label(self) -> &'static str {
        match self {
            EventType::E0 => "E0",
            EventType::E1 => "E1",
            EventType::E2 => "E2",
            EventType::T0 => "T0",
            EventType::T1 => "T1",
            EventType::T2 => "T2",
            EventType::T3 => "T3",
            EventType::HPlus => "H+",
            EventType::HMinus => "H-",
            EventType::Q4 => "Q4",
            EventType::Q3 => "Q3",
            EventType::Q2 => "Q2",
        }
    }

    pub fn parse(s: &str) -> Option<EventType> {
        let t: String = s.chars().filter(|c| !matches!(c, '^' | '{' | '}')).collect();
        let t = t.replace('⁺', "+").replace('⁻', "-").replace('−', "-");
        let t = t
            .chars()
            .map(|c| match c {
                '⁰' => '0',
                '¹' => '1',
                '²' => '2',
                '³' => '3',
                '⁴' => '4',
                c => c,
            })
            .collect::<String>();
        EventType::ALL.into_iter().find(|e| e.label().eq_ignore_ascii_case(&t))
    }

    pub fn kind(self) -> EventKind {
        match self {
            EventType::E0 | EventType::E1 | EventType::E2 => EventKind::E,
            EventType::T0 | EventType::T1 | EventType::T2 | EventType::T3 => EventKind::T,
            EventType::HPlus | EventType::HMinus => EventKind::H,
            EventType::Q4 | EventType::Q3 | EventType::Q2 => EventKind::Q,
        }
    }

    /// A coorientation pattern of this type.
    pub fn pattern(self) -> Vec<Orientation> {
        use Orientation::{In, Out};
        let first_out = |n: usize, j: usize| (0..n).map(|k| if k < j { Out } else { In }).collect();
        match self {
            EventType::E0 => first_out(2, 0),
            EventType::E1 => first_out(2, 1),
            EventType::E2 => first_out(2, 2),
            EventType::T0 => first_out(3, 0),
            EventType::T1 => first_out(3, 1),
            EventType::T2 => first_out(3, 2),
            EventType::T3 => first_out(3, 3),
            EventType::HPlus => vec![Out, Out],
            EventType::HMinus => vec![In, Out],
            EventType::Q4 => first_out(4, 0),
            EventType::Q3 => first_out(4, 1),
            EventType::Q2 => first_out(4, 2),
        }
    }
}

impl fmt::Display for EventType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// The printed row of the table at parameter `i`.
pub fn table1(event: EventType, i: i64) -> [i64; 4] {
    let t = |m: i64| [m, 3 * m, 3 * m, m];
    match event {
        EventType::E0 => [0, i + 1, 2 * i + 3, i + 2],
        EventType::E1 => [0, i, 2 * i, i],
        EventType::E2 => [0, i - 1, 2 * i - 3, i - 2],
        EventType::T0 => t(2 * i + 3),
        EventType::T1 => t(2 * i + 1),
        EventType::T2 => t(2 * i - 1),
        EventType::T3 => t(2 * i - 3),
        EventType::HPlus => [0, 0, 0, 0],
        EventType::HMinus => [0, 0, 0, -2],
        EventType::Q4 => [-4, -12, -12, -4],
        EventType::Q3 => [-2, -6, -6, -2],
        EventType::Q2 => [0, 0, 0, 0],
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EventModel {
    pub kind: EventKind,
    pub pattern: Vec<Orientation>,
    /// Outward sheets with respect to the vanishing or appearing cell.
    pub j: usize,
    pub label: String,
    pub before: CellComplex,
    pub after: CellComplex,
}

pub const MODEL_RADIUS: i64 = 4;

fn model_sheets(kind: EventKind, t: Rational) -> Vec<Sheet> {
    let one = rational::int(1);
    let z = Rational::zero();
    let plane = |a, b, c, d| Sheet { kind: SheetKind::Plane { a, b, c, d }, coorient: 1 };
    match kind {
        EventKind::E => vec![plane(z, z, one, z), Sheet::quadric(Family::E, t, 1)],
        EventKind::H => vec![plane(z, z, one, z), Sheet::quadric(Family::H, t, 1)],
        EventKind::T => vec![plane(z, z, one, z), plane(z, one, z, z), Sheet::quadric(Family::T, t, 1)],
        EventKind::Q => vec![plane(one, z, z, z), plane(z, one, z, z), plane(z, z, one, z), plane(one, one, one, -t)],
    }
}

/// A point of the cell that appears or vanishes, at the parameter where it
/// exists, or `None` for the hyperbolic tangency.
fn special_cell(kind: EventKind) -> Option<(Rational, [Rational; 3])> {
    let q = |n, d| Rational::new(n, d);
    match kind {
        EventKind::E => Some((rational::int(1), [q(0, 1), q(0, 1), q(-1, 2)])),
        EventKind::T => Some((rational::int(1), [q(0, 1), q(1, 2), q(-1, 4)])),
        EventKind::Q => Some((rational::int(-1), [q(-1, 4), q(-1, 4), q(-1, 4)])),
        EventKind::H => None,
    }
}

fn build_complex(sheets: &[Sheet], radius: Rational, resolution: usize) -> Result<CellComplex> {
    if sheets.iter().all(Sheet::is_linear) {
        enumerate_cells_linear(sheets, radius)
    } else {
        enumerate_cells_sampled(sheets, f(&radius), resolution)
    }
}

pub fn event_model(kind: EventKind, pattern: &[Orientation]) -> Result<EventModel> {
    event_model_in(kind, pattern, rational::int(MODEL_RADIUS), DEFAULT_RESOLUTION)
}

pub fn event_model_in(kind: EventKind, pattern: &[Orientation], radius: Rational, resolution: usize) -> Result<EventModel> {
    if pattern.len() != kind.sheets() {
        return Err(Error::pre(format!(
            "{} needs {} coorientations, got {}",
            kind.keyword(),
            kind.sheets(),
            pattern.len()
        )));
    }
    // arrows: outward means away from the special cell
    let arrows: Vec<i8> = match special_cell(kind) {
        Some((t, p)) => model_sheets(kind, t)
            .iter()
            .zip(pattern)
            .map(|(s, o)| {
                let side: i8 = if s.value_exact(&p).is_positive() { 1 } else { -1 };
                if *o == Orientation::Out { -side } else { side }
            })
            .collect(),
        None => pattern.iter().map(|o| if *o == Orientation::Out { 1 } else { -1 }).collect(),
    };
    let make = |t: i64| -> Result<CellComplex> {
        let mut sheets = model_sheets(kind, rational::int(t));
        for (s, a) in sheets.iter_mut().zip(&arrows) {
            s.coorient = *a;
        }
        build_complex(&sheets, radius, resolution)
    };
    let j = outward(pattern);
    let label = match kind {
        EventKind::E => format!("E{j}"),
        EventKind::T => format!("T{j}"),
        EventKind::H => if arrows[0] == arrows[1] { "H+".into() } else { "H-".into() },
        EventKind::Q => format!("Q{}", 4 - j),
    };
    Ok(EventModel { kind, pattern: pattern.to_vec(), j, label, before: make(-1)?, after: make(1)? })
}

/// Model of one of the twelve event types.
pub fn event_model_of(event: EventType) -> Result<EventModel> {
    event_model(event.kind(), &event.pattern())
}

pub fn delta_sigma(model: &EventModel, k: usize, base: Rational) -> Result<Rational> {
    if k > 3 {
        return Err(Error::pre(format!("cell dimension {k} out of range")));
    }
    Ok(model.after.sigma(k, base) - model.before.sigma(k, base))
}

pub fn delta_row(model: &EventModel, base: Rational) -> Result<[Rational; 4]> {
    Ok([delta_sigma(model, 0, base)?, delta_sigma(model, 1, base)?, delta_sigma(model, 2, base)?, delta_sigma(model, 3, base)?])
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TripleIndex {
    pub signs: SignVector,
    pub point: [f64; 3],
    pub index: Rational,
}

/// Indices of the triple points, by the closed form and by averaging the
/// eight adjacent regions.
pub fn triple_point_indices(complex: &CellComplex, base: Rational) -> Result<Vec<TripleIndex>> {
    let mut out = Vec::new();
    for c in complex.of_dim(0) {
        let closed = cell_index(&complex.sheets, &c.signs, base);
        let res = c.signs.resolutions();
        let avg: Rational =
            res.iter().map(|r| cell_index(&complex.sheets, r, base)).sum::<Rational>() / rational::int(res.len() as i64);
        if avg != closed {
            return Err(Error::Internal(format!("triple point {} averages to {avg}, formula gives {closed}", c.signs)));
        }
        out.push(TripleIndex { signs: c.signs.clone(), point: c.point, index: closed });
    }
    Ok(out)
}

/// Sum of triple-point indices after minus before.
pub fn triple_delta(model: &EventModel, base: Rational) -> Result<Rational> {
    let s = |c: &CellComplex| -> Result<Rational> { Ok(triple_point_indices(c, base)?.iter().map(|t| t.index).sum()) };
    Ok(s(&model.after)? - s(&model.before)?)
}

/// The same event run backwards: before and after swapped, with `j` and the
/// pattern taken with respect to the cell present before the reversed event.
pub fn reversed(model: &EventModel) -> EventModel {
    let flip: Vec<Orientation> = model
        .pattern
        .iter()
        .map(|o| if *o == Orientation::Out { Orientation::In } else { Orientation::Out })
        .collect();
    let j = outward(&flip);
    EventModel {
        kind: model.kind,
        pattern: flip,
        j,
        label: format!("{} reversed", model.label),
        before: model.after.clone(),
        after: model.before.clone(),
    }
}

/// Outward sheets of the tetrahedron present after a Q model.
pub fn q_outward_after(model: &EventModel) -> Result<usize> {
    if model.kind != EventKind::Q {
        return Err(Error::pre("not a Q model"));
    }
    let p = [Rational::new(1, 4); 3];
    Ok(model
        .after
        .sheets
        .iter()
        .filter(|s| {
            let side: i8 = if s.value_exact(&p).is_positive() { 1 } else { -1 };
            s.coorient == -side
        })
        .count())
}

// ---------------------------------------------------------------------------
// text format

/// `sheets { plane 1 0 0 0 coorient + ; quadric E t=-1 coorient - }`
pub fn parse_sheets(text: &str) -> Result<Vec<Sheet>> {
    let mut toks: Vec<(usize, usize, String)> = Vec::new();
    for (ln, line) in text.lines().enumerate() {
        let body = line.split('#').next().unwrap_or("");
        let mut cur = String::new();
        let mut start = 0;
        for (i, ch) in body.char_indices() {
            if ch.is_whitespace() || matches!(ch, ';' | '{' | '}') {
                if !cur.is_empty() {
                    toks.push((ln + 1, start + 1, std::mem::take(&mut cur)));
                }
                if !ch.is_whitespace() {
                    toks.push((ln + 1, i + 1, ch.to_string()));
                }
            } else {
                if cur.is_empty() {
                    start = i;
                }
                cur.push(ch);
            }
        }
        if !cur.is_empty() {
            toks.push((ln + 1, start + 1, cur));
        }
    }
    let mut it = toks.into_iter().peekable();
    let end = |what: &str| syntax(text.lines().count().max(1), 1, format!("unexpected end, expected {what}"));
    let (l, c, head) = it.next().ok_or_else(|| end("`sheets {`"))?;
    if head != "sheets" {
        return Err(syntax(l, c, format!("expected `sheets`, found `{head}`")));
    }
    let (l, c, brace) = it.next().ok_or_else(|| end("`{`"))?;
    if brace != "{" {
        return Err(syntax(l, c, "expected `{`"));
    }
    let mut sheets = Vec::new();
    loop {
        let (l, c, word) = it.next().ok_or_else(|| end("`}`"))?;
        let kind = match word.as_str() {
            "}" => break,
            ";" => continue,
            "plane" => {
                let mut k = Vec::new();
                for _ in 0..4 {
                    let (l, c, w) = it.next().ok_or_else(|| end("plane coefficient"))?;
                    k.push(rational::parse(&w).ok_or_else(|| syntax(l, c, format!("bad coefficient `{w}`")))?);
                }
                SheetKind::Plane { a: k[0], b: k[1], c: k[2], d: k[3] }
            }
            "quadric" => {
                let (l, c, w) = it.next().ok_or_else(|| end("quadric family"))?;
                let family = match w.as_str() {
                    "E" => Family::E,
                    "H" => Family::H,
                    "T" => Family::T,
                    _ => return Err(syntax(l, c, format!("unknown quadric family `{w}`"))),
                };
                let (l, c, w) = it.next().ok_or_else(|| end("`t=<value>`"))?;
                let t = w
                    .strip_prefix("t=")
                    .and_then(rational::parse)
                    .ok_or_else(|| syntax(l, c, format!("expected t=<value>, found `{w}`")))?;
                SheetKind::Quadric { family, t }
            }
            other => return Err(syntax(l, c, format!("unknown sheet `{other}`"))),
        };
        let mut coorient = 1;
        if it.peek().is_some_and(|t| t.2 == "coorient") {
            it.next();
            let (l, c, w) = it.next().ok_or_else(|| end("`+` or `-`"))?;
            coorient = match w.as_str() {
                "+" => 1,
                "-" => -1,
                _ => return Err(syntax(l, c, format!("coorient must be + or -, found `{w}`"))),
            };
        }
        let _ = (l, c);
        sheets.push(Sheet { kind, coorient });
    }
    if let Some((l, c, w)) = it.next() {
        return Err(syntax(l, c, format!("trailing `{w}`")));
    }
    Ok(sheets)
}

pub fn serialize_sheets(sheets: &[Sheet]) -> String {
    let mut s = String::from("sheets {\n");
    for sh in sheets {
        let co = if sh.coorient > 0 { "+" } else { "-" };
        match &sh.kind {
            SheetKind::Plane { a, b, c, d } => s.push_str(&format!(
                "  plane {} {} {} {} coorient {co} ;\n",
                rational::format(a),
                rational::format(b),
                rational::format(c),
                rational::format(d)
            )),
            SheetKind::Quadric { family, t } => {
                s.push_str(&format!("  quadric {} t={} coorient {co} ;\n", family.keyword(), rational::format(t)))
            }
        }
    }
    s.push_str("}\n");
    s
}

pub fn describe_pattern(p: &[Orientation]) -> String {
    format_pattern(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::constructions::all_patterns;

    fn r(n: i64) -> Rational {
        rational::int(n)
    }

    #[test]
    fn coordinate_planes_realize_everything() {
        let s = [Sheet::plane(1, 0, 0, 0, 1), Sheet::plane(0, 1, 0, 0, 1), Sheet::plane(0, 0, 1, 0, 1)];
        let c = enumerate_cells_linear(&s, r(4)).unwrap();
        assert_eq!(c.cells.len(), 27);
        assert_eq!([c.count(3), c.count(2), c.count(1), c.count(0)], [8, 12, 6, 1]);
        let t = triple_point_indices(&c, rational::half(-3)).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t[0].index, r(0));
    }

    #[test]
    fn four_planes_have_fifteen_regions() {
        for t in [-1, 1] {
            let s = model_sheets(EventKind::Q, r(t));
            let c = enumerate_cells_linear(&s, r(4)).unwrap();
            assert_eq!(c.count(3), 15);
            assert_eq!(c.count(0), 4);
        }
    }

    #[test]
    fn parallel_planes_are_rejected() {
        let s = [Sheet::plane(1, 0, 0, 0, 1), Sheet::plane(-1, 0, 0, 0, 1)];
        assert!(matches!(enumerate_cells_linear(&s, r(4)), Err(Error::Model(_))));
    }

    #[test]
    fn sampled_matches_exact_on_planes() {
        for t in [-1, 1] {
            let s = model_sheets(EventKind::Q, r(t));
            let exact = enumerate_cells_linear(&s, r(4)).unwrap();
            let sampled = enumerate_cells_sampled(&s, 4.0, DEFAULT_RESOLUTION).unwrap();
            assert_eq!(exact.sign_vectors(), sampled.sign_vectors());
            assert_eq!(exact.cells.len(), sampled.cells.len());
        }
    }

    #[test]
    fn quadric_models() {
        let e0 = enumerate_cells_sampled(&model_sheets(EventKind::E, r(-1)), 4.0, DEFAULT_RESOLUTION).unwrap();
        assert_eq!(e0.count(1), 0);
        let e1 = enumerate_cells_sampled(&model_sheets(EventKind::E, r(1)), 4.0, DEFAULT_RESOLUTION).unwrap();
        assert_eq!(e1.count(1), 1);
        let t1 = enumerate_cells_sampled(&model_sheets(EventKind::T, r(1)), 4.0, DEFAULT_RESOLUTION).unwrap();
        assert_eq!(t1.count(0), 2);
        let t0 = enumerate_cells_sampled(&model_sheets(EventKind::T, r(-1)), 4.0, DEFAULT_RESOLUTION).unwrap();
        assert_eq!(t0.count(0), 0);
    }

    #[test]
    fn labels() {
        use Orientation::*;
        assert_eq!(event_model(EventKind::Q, &[In, In, In, In]).unwrap().label, "Q4");
        assert_eq!(event_model(EventKind::H, &[Out, Out]).unwrap().label, "H+");
        assert_eq!(event_model(EventKind::H, &[In, Out]).unwrap().label, "H-");
        assert_eq!(event_model(EventKind::E, &[Out, In]).unwrap().label, "E1");
        assert!(event_model(EventKind::T, &[In, In]).is_err());
    }

    #[test]
    fn q_models_follow_2j_minus_4() {
        for p in all_patterns(4) {
            let m = event_model(EventKind::Q, &p).unwrap();
            for (n, d) in [(-3, 2), (-1, 2), (7, 2)] {
                let d = triple_delta(&m, Rational::new(n, d)).unwrap();
                assert_eq!(d, r(2 * m.j as i64 - 4), "{p:?}");
            }
            let back = reversed(&m);
            assert_eq!(back.j, q_outward_after(&m).unwrap());
            assert_eq!(triple_delta(&back, rational::half(-3)).unwrap(), r(2 * back.j as i64 - 4));
        }
    }

    #[test]
    fn table_rows() {
        assert_eq!(table1(EventType::HMinus, 7), [0, 0, 0, -2]);
        assert_eq!(table1(EventType::E2, 3), [0, 2, 3, 1]);
        assert_eq!(table1(EventType::T0, 0), [3, 9, 9, 3]);
        assert_eq!(EventType::parse("Q^4"), Some(EventType::Q4));
        assert_eq!(EventType::parse("H⁻"), Some(EventType::HMinus));
    }

    #[test]
    fn sheets_text() {
        let text = "sheets { plane 1 0 0 0 coorient + ; quadric E t=-1 coorient - ; plane 0 1 0 1/2 }";
        let s = parse_sheets(text).unwrap();
        assert_eq!(s.len(), 3);
        assert_eq!(s[1], Sheet::quadric(Family::E, r(-1), -1));
        assert_eq!(parse_sheets(&serialize_sheets(&s)).unwrap(), s);
        assert!(matches!(parse_sheets("sheets { cone 1 }"), Err(Error::Syntax { line: 1, .. })));
    }
}

