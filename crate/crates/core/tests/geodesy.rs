use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6, PI};

use lgl_core::geodesy::{
    h_discrete, h_of, heavy_disk_arc_test, light_diamond_shell_ray, shoot_two_point, snell_chain, snell_refract,
    trace_ray, weighted_length, Polyline, StopRule, TraceOptions,
};
use lgl_core::{Error, Point, WeightField};
use proptest::prelude::*;

#[test]
fn refraction_examples() {
    assert!((snell_refract(1.0, 2.0, FRAC_PI_6).unwrap() - 0.25f64.asin()).abs() < 1e-15);
    assert_eq!(snell_refract(1.7, 1.7, 0.4).unwrap(), 0.4);
    assert!(matches!(
        snell_refract(2.0, 1.0, FRAC_PI_3),
        Err(Error::TotalInternalReflection { .. })
    ));
    assert!((snell_chain(&[1.0, 1.3, 1.7, 2.0], FRAC_PI_6).unwrap() - 0.25f64.asin()).abs() < 1e-15);
    assert!((snell_chain(&[1.0; 4], 0.7).unwrap() - 0.7).abs() < 1e-15);
    assert!(snell_chain(&[2.0, 1.0], FRAC_PI_4).is_err());
}

proptest! {
    #[test]
    fn refraction_is_reciprocal(w1 in 0.2f64..5.0, w2 in 0.2f64..5.0, u in 0.0f64..0.999) {
        let crit = if w1 > w2 { (w2 / w1).asin() } else { FRAC_PI_2 };
        let t1 = u * crit;
        let t2 = snell_refract(w1, w2, t1).unwrap();
        prop_assert!((w1 * t1.sin() - w2 * t2.sin()).abs() < 1e-12);
        prop_assert!((snell_refract(w2, w1, t2).unwrap() - t1).abs() < 1e-9);
    }

    #[test]
    fn chain_depends_on_endpoints_only(ws in prop::collection::vec(0.5f64..3.0, 2..8), u in 0.0f64..0.999) {
        let wmin = ws.iter().cloned().fold(f64::INFINITY, f64::min);
        let t = u * (wmin / ws[0]).min(1.0).asin();
        let direct = snell_refract(ws[0], ws[ws.len() - 1], t).unwrap();
        prop_assert!((snell_chain(&ws, t).unwrap() - direct).abs() < 1e-12);
    }
}

#[test]
fn weighted_length_examples() {
    let c = WeightField::constant(1.0).unwrap();
    let seg = Polyline::segment(Point::ORIGIN, Point::new(3.0, 4.0)).unwrap();
    assert!((weighted_length(&seg, &c, 0.1).unwrap() - 5.0).abs() < 1e-14);

    let core = WeightField::lite_dmd_heavy_core();
    let straight = Polyline::segment(Point::new(-0.5, 0.0), Point::new(0.5, 0.0)).unwrap();
    assert!((weighted_length(&straight, &core, 1e-3).unwrap() - 0.625).abs() < 1e-12);
    let kinked = Polyline::new(vec![Point::new(-0.5, 0.0), Point::new(0.0, 0.2), Point::new(0.5, 0.0)]).unwrap();
    let expected = 0.575 * 1.16f64.sqrt();
    assert!((weighted_length(&kinked, &core, 1e-4).unwrap() - expected).abs() < 1e-12);
}

#[test]
fn weighted_length_bounds() {
    let w = WeightField::heavy_diamond(2.0).unwrap();
    let path = Polyline::new(vec![Point::new(-0.9, -0.2), Point::new(0.1, 0.3), Point::new(0.7, -0.4)]).unwrap();
    let l = weighted_length(&path, &w, 1e-3).unwrap();
    let e = path.euclidean_length();
    assert!(l >= e - 1e-12 && l <= 2.0 * e + 1e-12);
    assert!(weighted_length(&path, &w, 0.0).is_err());
}

#[test]
fn shooting_is_locally_minimal() {
    let w = WeightField::heavy_diamond(2.0).unwrap();
    for (a, b) in [
        (Point::new(-0.8, -0.5), Point::new(0.7, 0.6)),
        (Point::new(-0.9, 0.1), Point::new(0.9, 0.3)),
        (Point::new(-0.3, -0.9), Point::new(0.2, 0.9)),
    ] {
        let path = shoot_two_point(&w, a, b, 1e-12).unwrap();
        let base = path.cost(&w);
        assert!(base <= w.segment_cost(a, b) + 1e-12);
        let v = path.vertices().to_vec();
        for k in 1..v.len() - 1 {
            for d in [Point::new(1e-4, 0.0), Point::new(0.0, 1e-4), Point::new(-1e-4, 0.0), Point::new(0.0, -1e-4)] {
                let mut moved = v.clone();
                moved[k] = moved[k] + d;
                let c = Polyline::new(moved).unwrap().cost(&w);
                assert!(c >= base - 1e-8, "vertex {k} moved by {d}: {c} < {base}");
            }
        }
    }
}

#[test]
fn constant_weight_ray_is_straight() {
    let c = WeightField::constant(2.0).unwrap();
    for theta in [0.1, 0.7, 1.3] {
        let t = trace_ray(&c, Point::ORIGIN, Point::from_angle(theta), &StopRule::L1Radius(1.0), &TraceOptions::default())
            .unwrap();
        assert_eq!(t.path.vertices().len(), 2);
    }
}

#[test]
fn height_function() {
    let (a, b) = (h_of(0.25).unwrap(), h_of(0.75).unwrap());
    assert!(a > b && b > 0.0);
    assert!(h_of(1.0 - 1e-9).unwrap() < 1e-6);
    assert!(h_of(0.0).is_err() && h_of(1.0).is_err());
    let n = 100_000;
    assert!((h_of(0.5).unwrap() - h_discrete(n, n / 2)).abs() < 1e-3);
}

#[test]
fn shell_ray_obeys_snell_per_shell() {
    let (n, k0) = (1000, 300);
    let ray = light_diamond_shell_ray(0.5, n, k0).unwrap();
    let v = ray.vertices();
    let normal = Point::new(1.0, 1.0).normalized();
    let nf = n as f64;
    let mut checked = 0;
    for seg in v.windows(2) {
        let d = (seg[1] - seg[0]).normalized();
        let mid = seg[0].lerp(seg[1], 0.5);
        let k = (mid.l1_norm() * nf).ceil();
        // angle from the shell normal (1,1)/√2
        let sin = d.cross(normal).abs();
        let expected = (0.5f64).sqrt() * (nf + k0 as f64) / (nf + k);
        assert!((sin - expected).abs() < 1e-9, "shell {k}: {sin} vs {expected}");
        checked += 1;
    }
    assert!(checked > 600);
    let end = v[v.len() - 1];
    assert!((end.l1_norm() - 1.0).abs() < 1e-12);
}

#[test]
fn arc_test_examples() {
    assert!(heavy_disk_arc_test(FRAC_PI_2, PI));
    assert!(heavy_disk_arc_test(2.0, FRAC_PI_2));
    assert!(!heavy_disk_arc_test(1.0, FRAC_PI_2));
}
