//! Region values and double-point indices against a geometric oracle: for
//! round circles the value at a point is the base plus one for every
//! inward circle containing it and minus one for every outward one.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use proptest::prelude::*;
use strangeness_core::geometry::{Arrangement, Circle};
use strangeness_core::numbering::{alexander_numbering, double_point_index, st1};
use strangeness_core::rational::{self, Rational};
use strangeness_core::{Coorient, RegionId};

fn raster_value(circles: &[Circle], base: Rational, x: f64, y: f64) -> Rational {
    let mut v = base;
    for c in circles {
        if (x - c.cx).hypot(y - c.cy) < c.r {
            v += rational::int(if c.coorient == Coorient::Inward { 1 } else { -1 });
        }
    }
    v
}

fn near_a_circle(circles: &[Circle], x: f64, y: f64, eps: f64) -> bool {
    circles.iter().any(|c| ((x - c.cx).hypot(y - c.cy) - c.r).abs() < eps)
}

/// Region values seen on a grid, checked against the numbering; returns the
/// regions that were hit.
fn check_regions(circles: &[Circle], base: Rational, steps: usize) -> Result<usize, String> {
    let arr = Arrangement::build(circles).map_err(|e| e.to_string())?;
    let d = &arr.diagram;
    let topo = d.topology().unwrap();
    let n = alexander_numbering(d, base).unwrap();
    let mut seen: BTreeMap<RegionId, Rational> = BTreeMap::new();
    for i in 0..=steps {
        for j in 0..=steps {
            let x = -5.0 + 10.0 * i as f64 / steps as f64 + 1e-4;
            let y = -5.0 + 10.0 * j as f64 / steps as f64 + 2e-4;
            if near_a_circle(circles, x, y, 1e-3) {
                continue;
            }
            let region = topo.region_of_host(d, &arr.host_at(x, y).unwrap()).unwrap();
            let want = raster_value(circles, base, x, y);
            let got = n.value(&region).unwrap();
            if got != want {
                return Err(format!("{region} at ({x}, {y}): numbering {got}, oracle {want}"));
            }
            seen.insert(region, got);
        }
    }
    Ok(seen.len())
}

/// Double-point indices as the average of the four corner values next to
/// each crossing.
fn check_vertices(circles: &[Circle], base: Rational) -> Rational {
    let arr = Arrangement::build(circles).unwrap();
    let d = &arr.diagram;
    let n = alexander_numbering(d, base).unwrap();
    let eps = 1e-4;
    let mut total = rational::int(0);
    for (v, &(x, y)) in &arr.positions {
        let corners: Rational = [(eps, eps), (-eps, eps), (-eps, -eps), (eps, -eps)]
            .iter()
            .map(|(dx, dy)| raster_value(circles, base, x + dx, y + dy))
            .sum();
        let oracle = corners / rational::int(4);
        assert_eq!(double_point_index(d, &n, v).unwrap(), oracle, "vertex {v}");
        total += oracle;
    }
    assert_eq!(st1(d, base).unwrap(), total);
    total
}

fn venn(co: [Coorient; 3], nested: bool) -> Vec<Circle> {
    let mut cs: Vec<Circle> = (0..3)
        .map(|k| {
            let a = TAU * k as f64 / 3.0 + 0.3;
            Circle::new(0.6 * a.cos(), 0.6 * a.sin(), 1.0, co[k])
        })
        .collect();
    if nested {
        cs.push(Circle::new(0.1, -0.2, 3.0, Coorient::Outward));
    }
    cs
}

const IN: Coorient = Coorient::Inward;
const OUT: Coorient = Coorient::Outward;

#[test]
fn venn_regions_match_the_oracle() {
    for nested in [false, true] {
        for bits in 0..8 {
            let co = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { OUT } else { IN });
            let hit = check_regions(&venn(co, nested), rational::int(-1), 200).unwrap();
            assert_eq!(hit, if nested { 9 } else { 8 });
        }
    }
}

#[test]
fn central_triangle_counts_inward_circles() {
    for bits in 0..8 {
        let co = [0, 1, 2].map(|k| if bits >> k & 1 == 1 { OUT } else { IN });
        let inward = co.iter().filter(|c| **c == IN).count() as i64;
        let v = raster_value(&venn(co, false), rational::int(-1), 0.0, 0.0);
        assert_eq!(v, rational::int(-1 + inward - (3 - inward)));
    }
}

#[test]
fn all_inward_vertex_indices_match_the_oracle() {
    check_vertices(&venn([IN; 3], false), rational::int(-1));
}

#[test]
fn all_outward_st1_is_frozen() {
    // three outer crossings at -2, three inner ones at -3; the enclosing
    // outward circle lowers all six by one
    assert_eq!(check_vertices(&venn([OUT; 3], false), rational::int(-1)), rational::int(-15));
    assert_eq!(check_vertices(&venn([OUT; 3], true), rational::int(-1)), rational::int(-21));
}

fn circle() -> impl Strategy<Value = Circle> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.4..2.5f64, any::<bool>())
        .prop_map(|(x, y, r, out)| Circle::new(x, y, r, if out { OUT } else { IN }))
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 48, ..ProptestConfig::default() })]

    #[test]
    fn random_arrangements_match_the_oracle(cs in prop::collection::vec(circle(), 1..=4), b in -6i64..6) {
        let Ok(arr) = Arrangement::build(&cs) else { return Ok(()) };
        prop_assume!(arr.require_clearance(1e-3).is_ok());
        let base = rational::half(b);
        prop_assert!(check_regions(&cs, base, 60).is_ok(), "{:?}", check_regions(&cs, base, 60));
        check_vertices(&cs, base);
    }
}
