//! Named verification suites, each producing one report.

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{
    curvature_clearance, litedmdheavycore_checks, nonuniqueness_gap, rectangle_pairs_check, submodularity_check,
    three_diamonds_thresholds, Check, ExperimentReport,
};
use crate::error::{Error, Result};
use crate::geodesy::{
    golden_section, h_discrete, h_of, heavy_disk_arc_margin, heavy_disk_arc_test, heavy_disk_mid_length,
    shoot_two_point, snell_chain, snell_refract, Branch,
};
use crate::geometry::Point;
use crate::oracle::{grid_shortest_path, Stencil};
use crate::stacker::{bv_energy, discrete_tv, jump_at, level_curve, stack, uniform_levels, BranchPolicy, StackOptions};
use crate::weight::{Layer, WeightField};

pub const SUITES: &[&str] = &[
    "snell",
    "thresholds",
    "submodularity",
    "heavy_diamond",
    "heavy_disk",
    "lightdiamondtight",
    "three_diamonds",
    "litedmdheavycore",
    "structure",
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SuiteOptions {
    pub res: usize,
    pub levels: usize,
    pub seed: u64,
    pub trials: usize,
}

impl Default for SuiteOptions {
    fn default() -> Self {
        Self {
            res: 512,
            levels: 401,
            seed: 1,
            trials: 1000,
        }
    }
}

impl SuiteOptions {
    fn stack_options(&self) -> StackOptions {
        StackOptions {
            res: self.res,
            ..Default::default()
        }
    }
}

pub fn run_suite(name: &str, opts: &SuiteOptions) -> Result<ExperimentReport> {
    match name {
        "snell" => snell(opts),
        "thresholds" => thresholds(),
        "submodularity" => submodularity(opts),
        "heavy_diamond" => heavy_diamond(),
        "heavy_disk" => heavy_disk(),
        "lightdiamondtight" => light_diamond_tight(opts),
        "three_diamonds" => three_diamonds(opts),
        "litedmdheavycore" => litedmdheavycore(opts),
        "structure" => structure(opts),
        _ => Err(Error::invalid(format!("unknown suite '{name}'"))),
    }
}

pub fn snell(opts: &SuiteOptions) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("snell");
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let (mut law, mut recip, mut chain) = (0.0f64, 0.0f64, 0.0f64);
    for _ in 0..10_000 {
        let w1: f64 = rng.gen_range(0.5..3.0);
        let w2: f64 = rng.gen_range(0.5..3.0);
        let crit = if w1 > w2 { (w2 / w1).asin() } else { FRAC_PI_2 };
        let t1 = rng.gen_range(0.0..0.999 * crit);
        let t2 = snell_refract(w1, w2, t1)?;
        law = law.max((w1 * t1.sin() - w2 * t2.sin()).abs());
        recip = recip.max((snell_refract(w2, w1, t2)? - t1).abs());
        let n = rng.gen_range(3..=6);
        let ws: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..3.0)).collect();
        let wmin = ws.iter().cloned().fold(f64::INFINITY, f64::min);
        let t = rng.gen_range(0.0..0.999 * (wmin / ws[0]).min(1.0).asin());
        let collapsed = snell_refract(ws[0], ws[n - 1], t)?;
        chain = chain.max((snell_chain(&ws, t)? - collapsed).abs());
    }
    rep.push("snell_law_residual", law, 0.0, 1e-12, Check::AtMost);
    rep.push("reciprocity_error", recip, 0.0, 1e-12, Check::AtMost);
    rep.push("chain_collapse_error", chain, 0.0, 1e-12, Check::AtMost);
    let w = WeightField::layered_horizontal(vec![
        Layer { depth: 1.0, weight: 1.0 },
        Layer { depth: 2.0, weight: 2.0 },
    ])?;
    for x2 in [0.4, 1.0, 1.7, 2.5] {
        let path = shoot_two_point(&w, Point::ORIGIN, Point::new(x2, -2.0), 1e-12)?;
        let d = |x: f64| (x * x + 1.0).sqrt() + 2.0 * ((x2 - x).powi(2) + 1.0).sqrt();
        let (xmin, _) = golden_section(d, 0.0, x2, 1e-12);
        let kink = path.vertices().get(1).map_or(f64::NAN, |p| p.x);
        rep.push(format!("two_layer_kink_x2_{x2}"), kink, xmin, 1e-6, Check::Abs);
    }
    Ok(rep)
}

pub fn thresholds() -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("thresholds");
    let (t0, t1) = three_diamonds_thresholds(SQRT_2)?;
    rep.push("t0", t0, 1.017, 0.005, Check::Abs);
    rep.push("t1", t1, 1.127, 0.005, Check::Abs);
    rep.push_flag("ordered_in_regime", 0.75 < t0 && t0 < t1 && t1 < 1.375);
    for alpha in [2.0, 5.0] {
        let (a0, a1) = three_diamonds_thresholds(alpha)?;
        rep.push(format!("t0_alpha_{alpha}"), a0, t0, 2e-8, Check::Abs);
        rep.push(format!("t1_alpha_{alpha}"), a1, t1, 2e-8, Check::Abs);
    }
    Ok(rep)
}

pub fn submodularity(opts: &SuiteOptions) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("submodularity");
    let w = WeightField::constant(1.0)?;
    let out = submodularity_check(&w, 256, opts.trials, opts.seed)?;
    rep.push("random_pairs_passed", out.passed as f64, out.trials as f64, 0.0, Check::Abs);
    let rect = rectangle_pairs_check();
    rep.push("rectangle_pairs_passed", rect.passed as f64, rect.pairs as f64, 0.0, Check::Abs);
    Ok(rep)
}

pub fn heavy_diamond() -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("heavy_diamond");
    let w = WeightField::heavy_diamond(2.0)?;
    let curve = level_curve(&w, 1.0, Branch::Minimal)?;
    let path = curve.polyline();
    let root5 = 5f64.sqrt();
    rep.push("tip_distance", path.distance_to(Point::new(0.0, 0.5)), 0.0, 1e-6, Check::AtMost);
    rep.push("level_1_length", path.cost(&w), root5, 1e-6, Check::Abs);
    let grid = grid_shortest_path(&w, 512, Stencil::Sixteen, Point::new(-1.0, 0.0), Point::new(1.0, 0.0))?;
    rep.push("oracle_res512", grid.cost, root5, 0.015, Check::Rel);
    rep.push("oracle_not_below", grid.cost, root5, 1e-9, Check::AtLeast);
    Ok(rep)
}

pub fn heavy_disk() -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("heavy_disk");
    let w = WeightField::heavy_disk(2.0)?;
    let curve = level_curve(&w, 1.0, Branch::Minimal)?;
    let dev = curve
        .points()
        .iter()
        .filter(|p| p.x.abs() <= 0.24)
        .map(|p| (p.norm() - 0.5).abs())
        .fold(0.0, f64::max);
    rep.push("arc_deviation", dev, 0.0, 1e-3, Check::AtMost);
    rep.push("level_1_length", curve.cost(&w), heavy_disk_mid_length(), 1e-3, Check::Rel);
    let mut equal = Vec::new();
    let mut agree = true;
    let alphas: Vec<f64> = (0..=200).map(|k| 1.05 + 0.01 * k as f64).chain([FRAC_PI_2]).collect();
    for &alpha in &alphas {
        for k in 1..=400 {
            let theta = PI * k as f64 / 400.0;
            let m = heavy_disk_arc_margin(alpha, theta);
            agree &= heavy_disk_arc_test(alpha, theta) == (m >= -1e-9) || m.abs() <= 1e-9;
            if m.abs() <= 1e-9 {
                equal.push((alpha, theta));
            }
        }
    }
    rep.push_flag("arc_test_consistent", agree);
    rep.push("equality_cases", equal.len() as f64, 1.0, 0.0, Check::Abs);
    let at_corner = equal
        .iter()
        .all(|&(a, t)| (a - FRAC_PI_2).abs() <= 1e-9 && (t - PI).abs() <= 1e-9);
    rep.push_flag("equality_at_half_pi_pi", at_corner && !equal.is_empty());
    Ok(rep)
}

pub const LDT_SAMPLES: [f64; 5] = [0.1, 0.3, 0.5, 0.7, 0.9];

pub fn light_diamond_tight(opts: &SuiteOptions) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("lightdiamondtight");
    let n = 100_000;
    for t0 in LDT_SAMPLES {
        let h = h_of(t0)?;
        let hd = h_discrete(n, (t0 * n as f64).round() as usize);
        rep.push(format!("h_vs_discrete_t{t0}"), h, hd, 1e-3, Check::Abs);
        rep.push(format!("h_positive_t{t0}"), h, f64::MIN_POSITIVE, 0.0, Check::AtLeast);
    }
    let w = WeightField::light_diamond_tight(0.5)?;
    let s = stack(&w, &uniform_levels(opts.levels), BranchPolicy::all_minimal(), &opts.stack_options())?;
    for t0 in LDT_SAMPLES {
        let jump = jump_at(&s, Point::new(t0, 0.0)).unwrap_or(f64::NAN);
        rep.push(format!("jump_t{t0}"), jump, 2.0 * h_of(t0)?, 0.02, Check::AtLeast);
    }
    Ok(rep)
}

pub fn three_diamonds(opts: &SuiteOptions) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("three_diamonds");
    let (t0, t1) = three_diamonds_thresholds(SQRT_2)?;
    rep.push("t0", t0, 1.017, 0.005, Check::Abs);
    rep.push("t1", t1, 1.127, 0.005, Check::Abs);
    let w = WeightField::three_heavy_diamonds(SQRT_2)?;
    let gap = nonuniqueness_gap(
        &w,
        &uniform_levels(opts.levels),
        BranchPolicy::all_minimal(),
        BranchPolicy::all_maximal(),
        &opts.stack_options(),
    )?;
    let margin = 2.0 * gap.a.level_spacing();
    let band = gap.area_where(|a, b| a.min(b) >= t0 - margin && a.max(b) <= t1 + margin);
    let cell = gap.a.field().spacing().powi(2);
    rep.push("band_disagreement_area", band, cell, 0.0, Check::AtLeast);
    rep.push("energy_rel_diff", gap.energy_rel_diff(), 0.0, 0.005, Check::AtMost);
    Ok(rep)
}

pub fn litedmdheavycore(opts: &SuiteOptions) -> Result<ExperimentReport> {
    let mut rep = litedmdheavycore_checks()?;
    let w = WeightField::lite_dmd_heavy_core();
    let gap = nonuniqueness_gap(
        &w,
        &uniform_levels(opts.levels),
        BranchPolicy::all_minimal(),
        BranchPolicy::all_maximal(),
        &opts.stack_options(),
    )?;
    let cell = gap.a.field().spacing().powi(2);
    rep.push("policy_disagreement_area", gap.area, cell, 0.0, Check::AtLeast);
    rep.push("energy_rel_diff", gap.energy_rel_diff(), 0.0, 0.005, Check::AtMost);
    let (fmin, fmax) = (gap.a.field(), gap.b.field());
    let mut worst = 0.0f64;
    for j in 0..fmin.height() {
        for i in 0..fmin.width() {
            if fmin.in_mask(i, j) {
                let mirrored = 2.0 - fmin.value(i, fmin.height() - 1 - j);
                worst = worst.max((fmax.value(i, j) - mirrored).abs());
            }
        }
    }
    let spacing = gap.a.level_spacing();
    rep.push("reflection_symmetry", worst, 0.0, 2.0 * spacing, Check::AtMost);
    Ok(rep)
}

/// Weights whose stacks are checked for nesting, range and energy.
pub fn structure_weights() -> Result<Vec<WeightField>> {
    Ok(vec![
        WeightField::constant(1.0)?,
        WeightField::heavy_diamond(2.0)?,
        WeightField::heavy_disk(2.0)?,
        WeightField::light_diamond(0.5)?,
        WeightField::light_diamond_tight(0.5)?,
        WeightField::three_heavy_diamonds(SQRT_2)?,
        WeightField::lite_dmd_heavy_core(),
    ])
}

pub fn structure(opts: &SuiteOptions) -> Result<ExperimentReport> {
    let mut rep = ExperimentReport::new("structure");
    let levels = uniform_levels(opts.levels);
    for w in structure_weights()? {
        let name = w.name();
        match stack(&w, &levels, BranchPolicy::all_minimal(), &opts.stack_options()) {
            Ok(s) => {
                rep.push_flag(format!("{name}_nested"), true);
                let f = s.field();
                let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
                for j in 0..f.height() {
                    for i in 0..f.width() {
                        if f.in_mask(i, j) {
                            lo = lo.min(f.value(i, j));
                            hi = hi.max(f.value(i, j));
                        }
                    }
                }
                rep.push(format!("{name}_u_min"), lo, 0.0, 0.0, Check::AtLeast);
                rep.push(format!("{name}_u_max"), hi, 2.0, 0.0, Check::AtMost);
                rep.push(format!("{name}_energy_vs_tv"), bv_energy(&s, &w), discrete_tv(&s, &w), 0.05, Check::Rel);
            }
            Err(e @ Error::NestingViolation { .. }) => {
                rep.push_flag(format!("{name}_nested ({e})"), false);
            }
            Err(e) => return Err(e),
        }
    }
    let sub = submodularity(opts)?;
    rep.quantities.extend(sub.quantities);
    let c = WeightField::constant(1.0)?;
    let mut worst = 0.0f64;
    for k in 0..8 {
        let z = Point::from_angle(0.1 + 2.0 * PI * k as f64 / 8.0);
        for r in [0.1, 0.2, 0.3, 0.4] {
            worst = worst.max((curvature_clearance(&c, z, r)? - 0.5 * r * r).abs());
        }
    }
    rep.push("clearance_error_32_samples", worst, 0.0, 1e-6, Check::AtMost);
    Ok(rep)
}
