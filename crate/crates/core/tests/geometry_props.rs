use proptest::prelude::*;
use ramsey_core::algebra::{parse_value, TowerElem};
use ramsey_core::geometry::{
    contains_unit_chord, is_unit_ap, on_locus, orbit_of, sqdist, subset_locus, sweep_of, Locus, Point3, RotationGroup,
};

fn v(text: &str) -> TowerElem {
    parse_value(text).unwrap()
}

fn p(x: &str, y: &str, z: &str) -> Point3 {
    Point3::new(v(x), v(y), v(z))
}

fn coord() -> impl Strategy<Value = TowerElem> {
    let rat = (-8i64..=8, 1i64..=4).prop_map(|(n, d)| TowerElem::from_ratio(n, d));
    let root = prop::sample::select(vec!["0", "1", "sqrt(2)", "sqrt(3)", "-sqrt(7) / 2"]).prop_map(v);
    (rat, root).prop_map(|(a, b)| a + b)
}

fn point() -> impl Strategy<Value = Point3> {
    (coord(), coord(), coord()).prop_map(|(x, y, z)| Point3::new(x, y, z))
}

fn axis() -> impl Strategy<Value = RotationGroup> {
    (point(), point())
        .prop_filter("distinct", |(a, b)| !(a - b).is_zero())
        .prop_map(|(a, b)| RotationGroup::through(&a, &b).unwrap())
}

/// Points of a circle at rational cosines, from Pythagorean triples.
fn circle_samples(center: &Point3, u: &Point3, w: &Point3) -> Vec<Point3> {
    [(3, 4, 5), (5, 12, 13), (8, 15, 17), (0, 1, 1), (1, 0, 1), (-7, 24, 25)]
        .iter()
        .map(|&(a, b, c)| {
            let (cos, sin) = (TowerElem::from_ratio(a, c), TowerElem::from_ratio(b, c));
            center + &(&u.scale(&cos) + &w.scale(&sin))
        })
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn distance_is_symmetric(a in point(), b in point()) {
        prop_assert_eq!(sqdist(&a, &b), sqdist(&b, &a));
    }

    #[test]
    fn point_lies_on_its_orbit(x in point(), g in axis()) {
        prop_assert!(on_locus(&x, &orbit_of(&x, &g)));
    }

    #[test]
    fn sweep_contains_the_circle(d in 0i64..=5, r in 1i64..=4, h in -3i64..=3) {
        // axis: the x-axis; circle in the plane x = h, centred at (h, d, 0)
        // with radius r, spanned by (0, 1, 0) and (0, 0, 1)
        let g = RotationGroup::through(&Point3::origin(), &Point3::ints(1, 0, 0)).unwrap();
        let center = Point3::ints(h, d, 0);
        let circle = Locus::Circle { center: center.clone(), normal: Point3::ints(1, 0, 0), sq_radius: TowerElem::from_int(r * r) };
        let swept = sweep_of(&circle, &g).unwrap();
        let (u, w) = (Point3::ints(0, r, 0), Point3::ints(0, 0, r));
        for q in circle_samples(&center, &u, &w) {
            prop_assert!(on_locus(&q, &circle));
            prop_assert!(on_locus(&q, &swept), "{q} not in {swept:?}");
        }
    }

    #[test]
    fn subset_implies_membership(t in -4i64..=4, sq in 1i64..=9) {
        // circle in the plane x = t centred on the x-axis, inside the sphere
        // about the origin through it
        let center = Point3::ints(t, 0, 0);
        let circle = Locus::Circle { center: center.clone(), normal: Point3::ints(1, 0, 0), sq_radius: TowerElem::from_int(sq) };
        let sphere = Locus::Sphere { center: Point3::origin(), sq_radius: TowerElem::from_int(t * t + sq) };
        prop_assert!(subset_locus(&circle, &sphere).unwrap());
        let r = TowerElem::from_int(sq).sqrt().unwrap();
        let (u, w) = (Point3::new(TowerElem::zero(), r.clone(), TowerElem::zero()), Point3::new(TowerElem::zero(), TowerElem::zero(), r));
        for q in circle_samples(&center, &u, &w) {
            prop_assert!(on_locus(&q, &sphere));
        }
    }

    #[test]
    fn unit_progressions_reverse_and_break(start in point(), n in 3usize..=6, which in 0usize..3) {
        let step = [p("1", "0", "0"), p("1/2", "sqrt(3) / 2", "0"), p("3/5", "0", "4/5")][which].clone();
        let points: Vec<Point3> = (0..n).map(|i| &start + &step.scale(&TowerElem::from_int(i as i64))).collect();
        prop_assert!(is_unit_ap(&points));
        let reversed: Vec<Point3> = points.iter().rev().cloned().collect();
        prop_assert!(is_unit_ap(&reversed));
        let mut gapped = points.clone();
        gapped.remove(1);
        prop_assert!(!is_unit_ap(&gapped));
    }
}

#[test]
fn quoted_distances_and_loci() {
    assert_eq!(sqdist(&Point3::origin(), &Point3::ints(2, 0, 0)), TowerElem::from_int(4));
    let a = p("-sqrt(7) / 2", "0", "0");
    let p1 = p("-3 / sqrt(7)", "3 * sqrt(3) / (2 * sqrt(7))", "0");
    assert_eq!(sqdist(&a, &p1), TowerElem::one());

    let disk = Locus::Disk { center: Point3::origin(), normal: Point3::ints(0, 0, 1), sq_radius: v("3") };
    assert!(on_locus(&p("sqrt(6 + 3 * sqrt(3)) - 2", "0", "0"), &disk));
    let sphere = Locus::Sphere { center: Point3::origin(), sq_radius: v("4") };
    assert!(on_locus(&Point3::ints(2, 0, 0), &sphere));
    let annulus =
        Locus::Annulus { center: Point3::origin(), normal: Point3::ints(0, 0, 1), r_inner: v("1"), r_outer: v("2") };
    assert!(!on_locus(&Point3::origin(), &annulus));

    let small = Locus::Circle { center: p("-1/2", "0", "0"), normal: Point3::ints(1, 0, 0), sq_radius: v("3/4") };
    let unit = Locus::Sphere { center: Point3::origin(), sq_radius: v("1") };
    assert!(subset_locus(&small, &unit).unwrap());
    assert!(!subset_locus(&small, &sphere).unwrap());

    let x_axis = RotationGroup::through(&Point3::origin(), &Point3::ints(1, 0, 0)).unwrap();
    let orbit = orbit_of(&p("5 / sqrt(7)", "-5 * sqrt(3) / (2 * sqrt(7))", "0"), &x_axis);
    assert_eq!(
        orbit,
        Locus::Circle { center: p("5 / sqrt(7)", "0", "0"), normal: Point3::ints(1, 0, 0), sq_radius: v("75/28") }
    );
    assert!(matches!(orbit_of(&Point3::ints(3, 0, 0), &x_axis), Locus::Point(_)));

    let c = Locus::Circle { center: p("4", "-sqrt(3) / 2", "0"), normal: Point3::ints(1, 0, 0), sq_radius: v("3/4") };
    assert_eq!(
        sweep_of(&c, &x_axis).unwrap(),
        Locus::Disk { center: Point3::ints(4, 0, 0), normal: Point3::ints(1, 0, 0), sq_radius: v("3") }
    );
    let wide = Locus::Circle { center: p("5/2", "-sqrt(3)", "0"), normal: Point3::ints(1, 0, 0), sq_radius: v("55/4") };
    match sweep_of(&wide, &x_axis).unwrap() {
        Locus::Annulus { r_inner, r_outer, .. } => {
            assert_eq!(r_inner, v("sqrt(55) / 2 - sqrt(3)"));
            assert_eq!(r_outer, v("sqrt(55) / 2 + sqrt(3)"));
            assert_eq!(r_outer - r_inner, v("2 * sqrt(3)"));
        }
        other => panic!("{other:?}"),
    }

    for (sq, chord) in [("3/4", true), ("1/4", true), ("1/5", false)] {
        let circle = Locus::Circle { center: Point3::origin(), normal: Point3::ints(0, 0, 1), sq_radius: v(sq) };
        assert_eq!(contains_unit_chord(&circle), chord, "{sq}");
    }
}
