use std::f64::consts::PI;

use lgl_core::geodesy::Branch;
use lgl_core::stacker::{
    boundary_points, bv_energy, discrete_tv, jump_at, jump_set, level_curve, stack, trace_error, uniform_levels,
    BranchPolicy, SolutionStack, StackOptions,
};
use lgl_core::{Point, WeightField};

fn build(w: &WeightField, res: usize, levels: usize) -> SolutionStack {
    let opts = StackOptions {
        res,
        ..Default::default()
    };
    stack(w, &uniform_levels(levels), BranchPolicy::all_minimal(), &opts).unwrap()
}

fn assert_nested_and_monotone(s: &SolutionStack) {
    let curves = s.curves();
    for pair in curves.windows(2) {
        let (lo, hi) = (&pair[0], &pair[1]);
        for k in 0..=40 {
            let x = -1.0 + 2.0 * k as f64 / 40.0;
            if x.abs() < lo.half_width().min(hi.half_width()) {
                assert!(lo.eval(x) <= hi.eval(x) + 1e-12, "levels {} / {} at x={x}", lo.level(), hi.level());
            }
        }
    }
    let f = s.field();
    for i in 0..f.width() {
        let mut prev = f64::NEG_INFINITY;
        for j in 0..f.height() {
            if f.in_mask(i, j) {
                assert!(f.value(i, j) >= prev);
                prev = f.value(i, j);
            }
        }
    }
}

#[test]
fn boundary_point_examples() {
    let (a, b) = boundary_points(1.0).unwrap();
    assert!(a.dist(Point::new(-1.0, 0.0)) < 1e-15 && b.dist(Point::new(1.0, 0.0)) < 1e-15);
    let (a, b) = boundary_points(1.5).unwrap();
    let h = 0.75f64.sqrt();
    assert!(a.dist(Point::new(-h, 0.5)) < 1e-15 && b.dist(Point::new(h, 0.5)) < 1e-15);
    assert!(boundary_points(2.0).is_err());
}

#[test]
fn constant_stack_is_the_height_function() {
    let w = WeightField::constant(1.0).unwrap();
    let s = build(&w, 256, 401);
    let f = s.field();
    let mut worst = 0.0f64;
    for j in 0..f.height() {
        for i in 0..f.width() {
            if f.in_mask(i, j) {
                worst = worst.max((f.value(i, j) - (f.point(i, j).y + 1.0)).abs());
            }
        }
    }
    assert!(worst <= s.level_spacing() + 1e-12, "{worst}");
    // ∫₀² 2√(1 − (t−1)²) dt
    assert!((bv_energy(&s, &w) - PI).abs() < 1e-3);
    assert!(trace_error(&s, 64, 0.05, &[]).unwrap() <= 0.06);
    assert!(jump_set(&s, 0.1).unwrap().is_empty());
    assert!(jump_set(&s, s.level_spacing()).is_err());
    assert_nested_and_monotone(&s);
}

#[test]
fn heavy_diamond_curves_and_jumps() {
    let w = WeightField::heavy_diamond(2.0).unwrap();
    let low = level_curve(&w, 0.5, Branch::Minimal).unwrap();
    for p in low.points() {
        assert!((p.y + 0.5).abs() < 1e-9, "{p}");
    }
    let mid = level_curve(&w, 1.0, Branch::Minimal).unwrap();
    assert!(mid.polyline().distance_to(Point::new(0.0, 0.5)) < 1e-6);
    assert!((mid.cost(&w) - 5f64.sqrt()).abs() < 1e-6);

    let s = build(&w, 512, 201);
    assert_nested_and_monotone(&s);
    let h = s.field().spacing();
    let above = s.u_at(Point::new(0.0, 0.5 + 3.0 * h)).unwrap();
    let below = s.u_at(Point::new(0.0, 0.5 - 3.0 * h)).unwrap();
    assert!(above - below > 0.2, "{above} {below}");
    let jumps = jump_set(&s, 0.2).unwrap();
    assert!(!jumps.is_empty());
    assert!(jumps.iter().all(|p| (p.y.abs() - 0.5).abs() < 0.05), "{:?}", jumps);
    for tip in [Point::new(0.0, 0.5), Point::new(0.0, -0.5)] {
        assert!(jumps.iter().any(|p| p.dist(tip) < 0.02), "{tip}");
    }
    assert!(trace_error(&s, 64, 0.05, &[]).unwrap() <= 0.1);
    let e = bv_energy(&s, &w);
    assert!((e - discrete_tv(&s, &w)).abs() <= 0.05 * e);
}

#[test]
fn light_diamond_tight_trace_and_axis_jumps() {
    let w = WeightField::light_diamond_tight(0.5).unwrap();
    let s = build(&w, 256, 201);
    assert_nested_and_monotone(&s);
    let ends = [Point::new(-1.0, 0.0), Point::new(1.0, 0.0)];
    assert!(trace_error(&s, 64, 0.05, &ends).unwrap() <= 0.1);
    let mut last = f64::INFINITY;
    for t0 in [0.1, 0.3, 0.5, 0.7] {
        let j = jump_at(&s, Point::new(t0, 0.0)).unwrap();
        assert!(j > 2.0 * s.level_spacing(), "t0={t0}: {j}");
        assert!(j <= last + 2.0 * s.level_spacing());
        last = j;
    }
}

#[test]
fn branch_policies_choose_opposite_tips() {
    let w = WeightField::heavy_diamond(2.0).unwrap();
    let up = level_curve(&w, 1.0, Branch::Minimal).unwrap();
    let down = level_curve(&w, 1.0, Branch::Maximal).unwrap();
    assert!(up.eval(0.0) > 0.4 && down.eval(0.0) < -0.4);
    assert!((up.cost(&w) - down.cost(&w)).abs() < 1e-9);
}
