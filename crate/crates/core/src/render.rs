//! SVG 1.1 drawings of slice diagrams with region values as labels.
//!
//! A single simple 3-connected component is drawn by a barycentric (Tutte)
//! embedding with its outer face on a regular polygon. Anything else gets a
//! schematic layout: each component's vertices on a circle, free circles as
//! circles, and region labels in a legend.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use crate::diagram::{Diagram, RegionId, Side, Topology};
use crate::error::Result;
use crate::ids::VertexId;
use crate::numbering::{alexander_numbering, RegionNumbering};
use crate::rational::{self, Rational};

const SIZE: f64 = 500.0;
const CENTRE: f64 = 250.0;
const RADIUS: f64 = 200.0;

type P = (f64, f64);

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Layout {
    Tutte,
    Schematic,
}

pub fn render_svg(d: &Diagram, base: Rational) -> Result<String> {
    Ok(render_with_layout(d, base)?.0)
}

pub fn render_with_layout(d: &Diagram, base: Rational) -> Result<(String, Layout)> {
    d.validate().into_result()?;
    let topo = d.topology()?;
    let n = alexander_numbering(d, base)?;
    Ok(match tutte_positions(d, &topo) {
        Some(pos) => (draw_tutte(d, &topo, &n, &pos)?, Layout::Tutte),
        None => (draw_schematic(d, &topo, &n)?, Layout::Schematic),
    })
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

fn header(out: &mut String, height: f64) {
    let _ = writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE:.0}" height="{height:.0}" viewBox="0 0 {SIZE:.0} {height:.0}">"#
    );
    let _ = writeln!(out, r#"<rect x="0" y="0" width="{SIZE:.0}" height="{height:.0}" fill="white"/>"#);
}

fn label(out: &mut String, p: P, region: &RegionId, value: Rational) {
    let _ = writeln!(
        out,
        r#"<text class="region" x="{:.2}" y="{:.2}" font-size="12" text-anchor="middle" data-region="{}">{}</text>"#,
        p.0,
        p.1,
        escape(&region.to_string()),
        rational::format(&value)
    );
}

/// Short tick at the middle of segment `a`-`b` on the side the arrow points to.
fn arrow(out: &mut String, a: P, b: P, side: Side) {
    let (mx, my) = ((a.0 + b.0) / 2.0, (a.1 + b.1) / 2.0);
    let (dx, dy) = (b.0 - a.0, b.1 - a.1);
    let len = (dx * dx + dy * dy).sqrt().max(1e-9);
    // y grows downwards, so the left normal of (dx, dy) is (dy, -dx)
    let s = if side == Side::Left { 1.0 } else { -1.0 };
    let (nx, ny) = (s * dy / len * 8.0, -s * dx / len * 8.0);
    let _ = writeln!(
        out,
        r#"<line class="coorientation" x1="{mx:.2}" y1="{my:.2}" x2="{:.2}" y2="{:.2}" stroke="red" stroke-width="1.5"/>"#,
        mx + nx,
        my + ny
    );
}

fn edge_ends(d: &Diagram, topo: &Topology) -> Vec<(VertexId, VertexId, Side)> {
    d.edges().into_iter().map(|(a, b, side)| (topo.vertex_of(&a).clone(), topo.vertex_of(&b).clone(), side)).collect()
}

fn is_three_connected(vs: &[VertexId], adj: &BTreeMap<VertexId, BTreeSet<VertexId>>) -> bool {
    if vs.len() < 4 {
        return false;
    }
    let connected_without = |gone: &[&VertexId]| -> bool {
        let rest: Vec<&VertexId> = vs.iter().filter(|v| !gone.contains(v)).collect();
        let mut seen = BTreeSet::new();
        let mut stack = vec![rest[0]];
        seen.insert(rest[0]);
        while let Some(v) = stack.pop() {
            for w in &adj[v] {
                if !gone.contains(&w) && seen.insert(w) {
                    stack.push(w);
                }
            }
        }
        seen.len() == rest.len()
    };
    for (i, a) in vs.iter().enumerate() {
        for b in &vs[i + 1..] {
            if !connected_without(&[a, b]) {
                return false;
            }
        }
    }
    true
}

fn tutte_positions(d: &Diagram, topo: &Topology) -> Option<BTreeMap<VertexId, P>> {
    if topo.components.len() != 1 || !d.circles.is_empty() {
        return None;
    }
    let edges = edge_ends(d, topo);
    let mut adj: BTreeMap<VertexId, BTreeSet<VertexId>> = BTreeMap::new();
    for (a, b, _) in &edges {
        if a == b || !adj.entry(a.clone()).or_default().insert(b.clone()) {
            return None;
        }
        adj.entry(b.clone()).or_default().insert(a.clone());
    }
    let vs: Vec<VertexId> = adj.keys().cloned().collect();
    if !is_three_connected(&vs, &adj) {
        return None;
    }
    let comp = &topo.components[0];
    let outer = &topo.faces[topo.face_index_of(comp.anchor.as_ref()?)];
    let ring: Vec<VertexId> = outer.boundary.iter().map(|x| topo.vertex_of(x).clone()).collect();
    let mut pos: BTreeMap<VertexId, P> = BTreeMap::new();
    let k = ring.len() as f64;
    for (i, v) in ring.iter().enumerate() {
        let a = std::f64::consts::TAU * i as f64 / k - std::f64::consts::FRAC_PI_2;
        // face boundaries run clockwise on screen for the outer face
        pos.insert(v.clone(), (CENTRE + RADIUS * a.cos(), CENTRE - RADIUS * a.sin()));
    }
    let inner: Vec<VertexId> = vs.iter().filter(|v| !pos.contains_key(*v)).cloned().collect();
    let at: BTreeMap<&VertexId, usize> = inner.iter().enumerate().map(|(i, v)| (v, i)).collect();
    let m = inner.len();
    let mut mat = vec![vec![0.0; m + 2]; m];
    for (i, v) in inner.iter().enumerate() {
        mat[i][i] = adj[v].len() as f64;
        for w in &adj[v] {
            match at.get(w) {
                Some(&j) => mat[i][j] -= 1.0,
                None => {
                    mat[i][m] += pos[w].0;
                    mat[i][m + 1] += pos[w].1;
                }
            }
        }
    }
    for c in 0..m {
        let p = (c..m).max_by(|&a, &b| mat[a][c].abs().total_cmp(&mat[b][c].abs()))?;
        mat.swap(c, p);
        if mat[c][c].abs() < 1e-12 {
            return None;
        }
        for r in 0..m {
            if r != c {
                let f = mat[r][c] / mat[c][c];
                if f != 0.0 {
                    for col in c..m + 2 {
                        mat[r][col] -= f * mat[c][col];
                    }
                }
            }
        }
    }
    for (i, v) in inner.iter().enumerate() {
        pos.insert(v.clone(), (mat[i][m] / mat[i][i], mat[i][m + 1] / mat[i][i]));
    }
    Some(pos)
}

fn draw_tutte(d: &Diagram, topo: &Topology, n: &RegionNumbering, pos: &BTreeMap<VertexId, P>) -> Result<String> {
    let mut out = String::new();
    header(&mut out, SIZE);
    for (a, b, side) in edge_ends(d, topo) {
        let (p, q) = (pos[&a], pos[&b]);
        let _ = writeln!(
            out,
            r#"<line class="edge" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-width="2"/>"#,
            p.0, p.1, q.0, q.1
        );
        arrow(&mut out, p, q, side);
    }
    for (v, p) in pos {
        let _ = writeln!(out, r#"<circle class="vertex" cx="{:.2}" cy="{:.2}" r="3" fill="black"><title>{}</title></circle>"#, p.0, p.1, escape(&v.to_string()));
    }
    for i in 0..topo.faces.len() {
        let region = topo.region_of_face(d, i)?;
        let p = if region == RegionId::Ambient {
            (30.0, 20.0)
        } else {
            let b = &topo.faces[i].boundary;
            let (sx, sy) = b.iter().map(|x| pos[topo.vertex_of(x)]).fold((0.0, 0.0), |s, p| (s.0 + p.0, s.1 + p.1));
            (sx / b.len() as f64, sy / b.len() as f64 + 4.0)
        };
        label(&mut out, p, &region, n.value(&region)?);
    }
    out.push_str("</svg>\n");
    Ok(out)
}

fn draw_schematic(d: &Diagram, topo: &Topology, n: &RegionNumbering) -> Result<String> {
    let cells = topo.components.len() + d.circles.len();
    let cols = (cells as f64).sqrt().ceil().max(1.0) as usize;
    let rows = cells.div_ceil(cols).max(1);
    let cell = SIZE / cols as f64;
    let legend = 20.0 + 16.0 * n.values.len() as f64;
    let height = cell * rows as f64 + legend;
    let mut out = String::new();
    header(&mut out, height);
    let centre = |i: usize| -> P { ((i % cols) as f64 * cell + cell / 2.0, (i / cols) as f64 * cell + cell / 2.0) };
    let r = cell * 0.38;
    let mut pos: BTreeMap<VertexId, P> = BTreeMap::new();
    for (i, comp) in topo.components.iter().enumerate() {
        let c = centre(i);
        let k = comp.vertices.len() as f64;
        for (j, v) in comp.vertices.iter().enumerate() {
            let a = std::f64::consts::TAU * j as f64 / k;
            pos.insert(v.clone(), (c.0 + r * a.cos(), c.1 - r * a.sin()));
        }
    }
    // parallel edges and loops bow out by a growing amount
    let mut seen: BTreeMap<(VertexId, VertexId), usize> = BTreeMap::new();
    for (a, b, side) in edge_ends(d, topo) {
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        let nth = seen.entry(key).or_default();
        *nth += 1;
        let (p, q) = (pos[&a], pos[&b]);
        let bend = 18.0 * *nth as f64 * if *nth % 2 == 0 { -1.0 } else { 1.0 };
        let (dx, dy) = (q.0 - p.0, q.1 - p.1);
        let len = (dx * dx + dy * dy).sqrt();
        let (cx, cy) = if len < 1e-9 {
            (p.0 + bend, p.1 - 2.0 * bend.abs())
        } else {
            ((p.0 + q.0) / 2.0 + bend * dy / len, (p.1 + q.1) / 2.0 - bend * dx / len)
        };
        let _ = writeln!(
            out,
            r#"<path class="edge" d="M {:.2} {:.2} Q {cx:.2} {cy:.2} {:.2} {:.2}" fill="none" stroke="black" stroke-width="2"/>"#,
            p.0, p.1, q.0, q.1
        );
        let mid = ((p.0 + 2.0 * cx + q.0) / 4.0, (p.1 + 2.0 * cy + q.1) / 4.0);
        let tangent = (q.0 - p.0, q.1 - p.1);
        let tangent = if len < 1e-9 { (1.0, 0.0) } else { tangent };
        arrow(&mut out, (mid.0 - tangent.0 / 2.0, mid.1 - tangent.1 / 2.0), (mid.0 + tangent.0 / 2.0, mid.1 + tangent.1 / 2.0), side);
    }
    for (v, p) in &pos {
        let _ = writeln!(out, r#"<circle class="vertex" cx="{:.2}" cy="{:.2}" r="3" fill="black"><title>{}</title></circle>"#, p.0, p.1, escape(&v.to_string()));
    }
    for (i, (c, fc)) in d.circles.iter().enumerate() {
        let p = centre(topo.components.len() + i);
        let _ = writeln!(
            out,
            r#"<circle class="free-circle" cx="{:.2}" cy="{:.2}" r="{r:.2}" fill="none" stroke="black" stroke-width="2"><title>{} {}</title></circle>"#,
            p.0,
            p.1,
            escape(&c.to_string()),
            fc.coorient.keyword()
        );
        let tick = if fc.coorient == crate::diagram::Coorient::Inward { -8.0 } else { 8.0 };
        let _ = writeln!(
            out,
            r#"<line class="coorientation" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="red" stroke-width="1.5"/>"#,
            p.0 + r,
            p.1,
            p.0 + r + tick,
            p.1
        );
    }
    let mut y = cell * rows as f64 + 16.0;
    for (region, v) in &n.values {
        let _ = writeln!(
            out,
            r#"<text class="region" x="10" y="{y:.2}" font-size="12" data-region="{0}">{0}: {1}</text>"#,
            escape(&region.to_string()),
            rational::format(v)
        );
        y += 16.0;
    }
    out.push_str("</svg>\n");
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::{Coorient, Host};

    fn regions(svg: &str) -> usize {
        svg.matches(r#"class="region""#).count()
    }

    #[test]
    fn embedded_circle_has_two_regions() {
        let mut d = Diagram::new();
        d.add_circle("c1", Host::Ambient, Coorient::Inward);
        let (svg, layout) = render_with_layout(&d, rational::int(-1)).unwrap();
        assert_eq!(layout, Layout::Schematic);
        assert_eq!(regions(&svg), 2);
        assert!(svg.starts_with("<?xml"));
    }

    #[test]
    fn rendering_is_deterministic() {
        let d = crate::diagram::tests::two_circles();
        assert_eq!(render_svg(&d, rational::int(-1)).unwrap(), render_svg(&d, rational::int(-1)).unwrap());
    }

    #[test]
    fn gadget_uses_tutte_layout_with_eight_regions() {
        use crate::constructions::{triangle_gadget, Ambient, GadgetSpec, Orientation::*};
        let g = triangle_gadget(&GadgetSpec::omega3([Out, In, In], Ambient::Venn)).unwrap();
        let (svg, layout) = render_with_layout(&g.before, rational::int(-1)).unwrap();
        assert_eq!(layout, Layout::Tutte);
        assert_eq!(regions(&svg), 8);
    }
}
