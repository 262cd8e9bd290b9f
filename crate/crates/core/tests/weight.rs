use lgl_core::weight::{Region, CATALOG};
use lgl_core::{Point, WeightField};
use proptest::prelude::*;

fn catalog_weights() -> Vec<WeightField> {
    CATALOG
        .iter()
        .map(|e| WeightField::from_name(e.name, e.alpha_default).unwrap())
        .collect()
}

#[test]
fn documented_values() {
    let c = WeightField::constant(1.0).unwrap();
    assert_eq!(c.eval(Point::new(0.3, 0.7)), 1.0);
    let ldt = WeightField::light_diamond_tight(0.5).unwrap();
    assert_eq!(ldt.eval(Point::ORIGIN), 0.5);
    let core = WeightField::lite_dmd_heavy_core();
    assert!((core.eval(Point::new(0.25, 0.25)) - 0.5).abs() < 1e-15);
}

#[test]
fn documented_regions() {
    let core = WeightField::lite_dmd_heavy_core();
    assert_eq!(core.region_of(Point::ORIGIN), Region::KIn);
    assert_eq!(core.region_of(Point::new(0.6, 0.3)), Region::KAnn);
    let disk = WeightField::heavy_disk(2.0).unwrap();
    assert_eq!(disk.region_of(Point::new(0.9, 0.0)), Region::Outside);
}

#[test]
fn light_diamond_tight_formula() {
    let w = WeightField::light_diamond_tight(0.5).unwrap();
    for &(x, y) in &[(0.1, 0.2), (-0.3, 0.4), (0.5, -0.49), (0.0, -0.9)] {
        let r = f64::abs(x) + f64::abs(y);
        assert!((w.eval(Point::new(x, y)) - (0.5 + 0.5 * r)).abs() < 1e-14);
    }
    assert_eq!(w.eval(Point::new(0.9, 0.9)), 1.0);
}

#[test]
fn invalid_parameters_rejected() {
    assert!(WeightField::constant(0.0).is_err());
    assert!(WeightField::heavy_diamond(-1.0).is_err());
    assert!(WeightField::from_name("teapot", None).is_err());
}

proptest! {
    #[test]
    fn positive_and_symmetric(x in -1.2f64..1.2, y in -1.2f64..1.2) {
        let p = Point::new(x, y);
        for w in catalog_weights() {
            let v = w.eval(p);
            prop_assert!(v > 0.0 && v.is_finite(), "{} at {p}: {v}", w.name());
            if w.is_x_symmetric() {
                prop_assert_eq!(v, w.eval(p.mirror_x()), "{} x-mirror", w.name());
            }
            if w.is_y_symmetric() {
                prop_assert_eq!(v, w.eval(p.mirror_y()), "{} y-mirror", w.name());
            }
        }
    }

    #[test]
    fn lipschitz_where_continuous(x in -1.0f64..1.0, y in -1.0f64..1.0, dx in -0.05f64..0.05, dy in -0.05f64..0.05) {
        let p = Point::new(x, y);
        let q = Point::new(x + dx, y + dy);
        for w in catalog_weights() {
            if let Some(l) = w.lipschitz_bound() {
                prop_assert!(w.is_continuous());
                let diff = (w.eval(p) - w.eval(q)).abs();
                prop_assert!(diff <= l * p.dist(q) + 1e-12, "{}: {diff} > {l}·|p−q|", w.name());
            }
        }
    }

    #[test]
    fn segment_cost_is_symmetric_and_additive(ax in -0.9f64..0.9, ay in -0.9f64..0.9, bx in -0.9f64..0.9, by in -0.9f64..0.9, s in 0.05f64..0.95) {
        let (a, b) = (Point::new(ax, ay), Point::new(bx, by));
        let m = a.lerp(b, s);
        for w in catalog_weights() {
            let ab = w.segment_cost(a, b);
            prop_assert!((ab - w.segment_cost(b, a)).abs() <= 1e-12 * (1.0 + ab));
            let split = w.segment_cost(a, m) + w.segment_cost(m, b);
            prop_assert!((ab - split).abs() <= 1e-11 * (1.0 + ab), "{}: {ab} vs {split}", w.name());
        }
    }
}
