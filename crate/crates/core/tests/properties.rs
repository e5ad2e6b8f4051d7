use proptest::prelude::*;
use strangeness_core::arrangement::{event_model, triple_delta, EventKind};
use strangeness_core::canon::{isomorphic, relabel};
use strangeness_core::constructions::{outward, Orientation};
use strangeness_core::geometry::{Arrangement, Circle};
use strangeness_core::numbering::{alexander_numbering, dst1_omega3, st1};
use strangeness_core::omega3::{apply_omega3, triangle, triangle_outward_count};
use strangeness_core::rational::{self, Rational};
use strangeness_core::verify::{numbering_disagreements, numbering_oracle};
use strangeness_core::{parse_diagram, serialize_diagram, Coorient, Diagram, RegionId};

fn circle() -> impl Strategy<Value = Circle> {
    (-2.0..2.0f64, -2.0..2.0f64, 0.4..2.5f64, any::<bool>()).prop_map(|(x, y, r, out)| {
        Circle::new(x, y, r, if out { Coorient::Outward } else { Coorient::Inward })
    })
}

/// Generic circle arrangements; near-degenerate draws are discarded.
fn arrangement() -> impl Strategy<Value = Diagram> {
    prop::collection::vec(circle(), 1..=4).prop_filter_map("degenerate arrangement", |cs| {
        let arr = Arrangement::build(&cs).ok()?;
        arr.require_clearance(1e-3).ok()?;
        Some(arr.diagram)
    })
}

fn half_integer() -> impl Strategy<Value = Rational> {
    (-12i64..12).prop_map(rational::half)
}

fn triangle_faces(d: &Diagram) -> Vec<strangeness_core::DartId> {
    d.faces()
        .unwrap()
        .into_iter()
        .filter(|f| f.boundary.len() == 3 && triangle(d, &f.id).is_ok())
        .map(|f| f.id)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 96, ..ProptestConfig::default() })]

    #[test]
    fn text_round_trip(d in arrangement()) {
        let text = serialize_diagram(&d);
        let back = parse_diagram(&text).unwrap();
        prop_assert!(isomorphic(&back, &d));
        prop_assert_eq!(serialize_diagram(&back), text);
    }

    #[test]
    fn relabelling_preserves_the_canonical_form(d in arrangement()) {
        let r = relabel(&d).unwrap();
        prop_assert!(isomorphic(&r, &d));
    }

    #[test]
    fn oracle_agrees_with_numbering(d in arrangement(), base in half_integer()) {
        prop_assert!(numbering_disagreements(&d, base).unwrap().is_empty());
        let n = numbering_oracle(&d, base).unwrap();
        prop_assert_eq!(n.values[&RegionId::Ambient], base);
    }

    #[test]
    fn numbering_shifts_with_the_base(d in arrangement(), base in half_integer(), shift in half_integer()) {
        let a = alexander_numbering(&d, base).unwrap();
        let b = alexander_numbering(&d, base + shift).unwrap();
        prop_assert_eq!(a.shifted(shift), b);
        let v = rational::int(d.vertex_count() as i64);
        prop_assert_eq!(st1(&d, base + shift).unwrap(), st1(&d, base).unwrap() + shift * v);
    }

    #[test]
    fn neighbouring_regions_differ_by_one(d in arrangement(), base in half_integer()) {
        let n = alexander_numbering(&d, base).unwrap();
        let topo = d.topology().unwrap();
        for (a, b, _) in d.edges() {
            let l = n.value(&topo.region_of_dart(&d, &a).unwrap()).unwrap();
            let r = n.value(&topo.region_of_dart(&d, &b).unwrap()).unwrap();
            prop_assert!(l - r == rational::int(1) || r - l == rational::int(1));
        }
    }

    #[test]
    fn every_triangle_move_changes_st1_by_2j_minus_3(d in arrangement(), base in half_integer()) {
        for face in triangle_faces(&d) {
            let Ok((after, after_face)) = apply_omega3(&d, &face) else { continue };
            let j = triangle_outward_count(&d, &face).unwrap() as i64;
            let dst1 = dst1_omega3(&d, &face, base).unwrap();
            prop_assert_eq!(dst1, rational::int(2 * j - 3));
            prop_assert_eq!(st1(&after, base).unwrap() - st1(&d, base).unwrap(), dst1);
            // the move back has 3 - j outward edges and undoes the change
            let back_j = triangle_outward_count(&after, &after_face).unwrap() as i64;
            prop_assert_eq!(back_j, 3 - j);
            let (again, _) = apply_omega3(&after, &after_face).unwrap();
            prop_assert!(isomorphic(&again, &d));
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn quadruple_point_change_is_even_at_any_base(bits in 0u8..16, n in -9i64..9) {
        let p: Vec<Orientation> =
            (0..4).map(|k| if bits >> k & 1 == 1 { Orientation::Out } else { Orientation::In }).collect();
        let m = event_model(EventKind::Q, &p).unwrap();
        let d = triple_delta(&m, rational::half(2 * n + 1)).unwrap();
        prop_assert_eq!(d, rational::int(2 * outward(&p) as i64 - 4));
        prop_assert!(rational::is_integer(&(d / 2)));
    }

    #[test]
    fn rationals_print_and_parse(n in -1000i64..1000) {
        let q = rational::half(n);
        let s = rational::format(&q);
        prop_assert!(!s.contains('.'));
        prop_assert_eq!(rational::parse(&s), Some(q));
    }
}
