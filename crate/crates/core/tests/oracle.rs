use lgl_core::geodesy::{h_of, heavy_disk_mid_length, light_diamond_shell_ray, Polyline};
use lgl_core::oracle::{grid_shortest_path, refine_until, refine_until_with, GridGraph, Stencil};
use lgl_core::{Point, WeightField};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const LEFT: Point = Point { x: -1.0, y: 0.0 };
const RIGHT: Point = Point { x: 1.0, y: 0.0 };

#[test]
fn constant_chord_within_one_percent() {
    let c = WeightField::constant(1.0).unwrap();
    let g = grid_shortest_path(&c, 256, Stencil::Sixteen, Point::new(-0.9, 0.0), Point::new(0.9, 0.0)).unwrap();
    assert!((g.cost - 1.8).abs() <= 0.018);
    assert!(g.from.dist(Point::new(-0.9, 0.0)) <= 1.0 / 256.0);
}

#[test]
fn heavy_diamond_never_beats_the_exact_path() {
    let w = WeightField::heavy_diamond(2.0).unwrap();
    let g = grid_shortest_path(&w, 512, Stencil::Sixteen, LEFT, RIGHT).unwrap();
    let root5 = 5f64.sqrt();
    assert!(g.cost >= root5 - 1e-9);
    assert!((g.cost - root5) / root5 <= 0.015, "{}", g.cost);
    assert!((g.path.cost(&w) - g.cost).abs() < 1e-9);
}

#[test]
fn lite_core_corridor_gives_straight_length() {
    let w = WeightField::lite_dmd_heavy_core();
    let corridor = |p: Point| p.y == 0.0;
    let (a, b) = (Point::new(-0.5, 0.0), Point::new(0.5, 0.0));
    for res in [64, 128, 256] {
        let g = GridGraph::new(res, Stencil::Sixteen).unwrap().with_mask(&corridor);
        let cost = g.shortest_path(&w, a, b).unwrap().cost;
        assert!((cost - 0.625).abs() < 1e-12, "res {res}: {cost}");
    }
    // without the corridor the grid finds something cheaper than the axis
    let free = grid_shortest_path(&w, 256, Stencil::Sixteen, a, b).unwrap().cost;
    assert!(free < 0.625 - 1e-3);
}

#[test]
fn heavy_disk_refinement_approaches_arc_path() {
    let w = WeightField::heavy_disk(2.0).unwrap();
    let r = refine_until(&w, LEFT, RIGHT, 0.005).unwrap();
    let exact = heavy_disk_mid_length();
    assert!(r.converged, "{:?}", r.history);
    assert!(r.cost >= exact - 1e-9);
    assert!((r.cost - exact) / exact <= 0.015, "{} vs {exact}", r.cost);
    for pair in r.history.windows(2) {
        assert!(pair[1].1 <= pair[0].1 + 1e-3 * pair[0].1);
    }
}

#[test]
fn constant_refinement_converges_early() {
    let c = WeightField::constant(1.0).unwrap();
    let r = refine_until(&c, Point::new(-0.8, -0.3), Point::new(0.7, 0.5), 0.005).unwrap();
    assert!(r.converged && r.res <= 512);
    assert!(refine_until(&c, LEFT, RIGHT, 1e-4).is_err());
}

#[test]
fn light_diamond_ray_cost_matches_grid() {
    let w = WeightField::light_diamond_tight(0.5).unwrap();
    for t0 in [0.3, 0.6] {
        let n = 1000;
        let ray = light_diamond_shell_ray(0.5, n, (t0 * n as f64) as usize).unwrap();
        let end = ray.end();
        assert!((end.y - h_of(t0).unwrap()).abs() <= 0.02 * h_of(t0).unwrap() + 1e-3);
        let exact = ray.cost(&w);
        let g = grid_shortest_path(&w, 256, Stencil::Sixteen, ray.start(), end).unwrap();
        let seg = Polyline::segment(ray.start(), end).unwrap().cost(&w);
        assert!(exact <= seg + 1e-12);
        assert!((g.cost - exact).abs() / exact <= 0.02, "t0={t0}: {} vs {exact}", g.cost);
    }
}

#[test]
fn sixteen_stencil_beats_eight() {
    let c = WeightField::constant(1.0).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..20 {
        let mut pick = || loop {
            let p = Point::new(rng.gen_range(-0.9..0.9), rng.gen_range(-0.9..0.9));
            if p.norm() < 0.9 {
                return p;
            }
        };
        let (a, b) = (pick(), pick());
        let g8 = grid_shortest_path(&c, 128, Stencil::Eight, a, b).unwrap();
        let g16 = grid_shortest_path(&c, 128, Stencil::Sixteen, a, b).unwrap();
        let exact = g16.from.dist(g16.to);
        assert!(g16.cost - exact <= g8.cost - exact + 1e-12);
        assert!(g16.cost >= exact - 1e-12);
    }
}

#[test]
fn eight_stencil_refinement_stops_at_cap() {
    let c = WeightField::constant(1.0).unwrap();
    let r = refine_until_with(&c, Point::new(-0.7, -0.2), Point::new(0.6, 0.4), 0.002, Stencil::Eight, 256).unwrap();
    assert!(r.res <= 256);
    assert_eq!(r.history[0].0, 128);
}
