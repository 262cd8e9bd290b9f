//! Drivers that reproduce the named quantities of the catalog examples.

mod report;
mod submodularity;
pub mod suites;

pub use report::{Check, ExperimentReport, Quantity};
pub use submodularity::{rectangle_pairs_check, submodularity_check, Raster, RectangleOutcome, SubmodularityOutcome};

use crate::error::{Error, Result};
use crate::geodesy::{bisect, weighted_length, Branch, Polyline};
use crate::geometry::Point;
use crate::lattice::{disk_geodesic, GeodesicOptions};
use crate::stacker::{bv_energy, level_curve, stack, BranchPolicy, SolutionStack, StackOptions};
use crate::weight::WeightField;

/// The two points of `∂B(z, r) ∩ ∂Ω` for `z` on the unit circle.
pub fn ball_boundary_hits(z: Point, r: f64) -> Result<(Point, Point)> {
    if !((z.norm() - 1.0).abs() <= 1e-9) {
        return Err(Error::invalid(format!("{z} is not on the unit circle")));
    }
    if !(r > 0.0 && r < 2.0) {
        return Err(Error::invalid(format!("ball radius {r} gives no two boundary crossings")));
    }
    let phi = z.y.atan2(z.x);
    let psi = 2.0 * (0.5 * r).asin();
    Ok((Point::from_angle(phi - psi), Point::from_angle(phi + psi)))
}

/// Distance from `z` to the weighted geodesic joining the two boundary points
/// at distance `r` from `z`.
pub fn curvature_clearance(w: &WeightField, z: Point, r: f64) -> Result<f64> {
    if !(r < 1.0) {
        return Err(Error::invalid(format!("ball radius {r} must be below 1")));
    }
    let (a, b) = ball_boundary_hits(z, r)?;
    let path = disk_geodesic(w, a, b, &GeodesicOptions::default())?;
    Ok(path.distance_to(z))
}

fn left_boundary_point(y: f64) -> Point {
    Point::new(-(1.0 - y * y).max(0.0).sqrt(), y)
}

fn symmetric_path(y: f64, inner: &[Point]) -> Polyline {
    let start = left_boundary_point(y);
    let mut v = vec![start];
    v.extend_from_slice(inner);
    v.push(start.mirror_x());
    Polyline::new(v).expect("distinct vertices")
}

/// Path from the boundary at height `y` through the bottom tips of the large diamonds.
pub fn three_diamonds_bottom_path(y: f64) -> Polyline {
    symmetric_path(y, &[Point::new(-0.5, -0.25), Point::new(0.5, -0.25)])
}

/// Path from the boundary at height `y` through the top tips of all three diamonds.
pub fn three_diamonds_top_path(y: f64) -> Polyline {
    symmetric_path(y, &[Point::new(-0.5, 0.25), Point::new(0.0, 0.375), Point::new(0.5, 0.25)])
}

/// Levels `(t₀, t₁)` bounding the band where the three-diamond geodesic may
/// take either tip of the small diamond.
pub fn three_diamonds_thresholds(alpha: f64) -> Result<(f64, f64)> {
    if !(alpha >= std::f64::consts::SQRT_2) {
        return Err(Error::invalid(format!("alpha = {alpha} is below √2")));
    }
    let w = WeightField::three_heavy_diamonds(alpha)?;
    let (lo, hi) = (-0.25, 0.375);
    let bracket = |e: Error| match e {
        Error::NoRoot { .. } => Error::NoRoot { lo: 0.75, hi: 1.375 },
        e => e,
    };
    let y0 = bisect(
        |y| three_diamonds_bottom_path(y).cost(&w) - three_diamonds_top_path(y).cost(&w),
        lo,
        hi,
        1e-8,
    )
    .map_err(bracket)?;
    // Between t₀ and t₁ the direct segment to the small top tip cuts through a large
    // diamond and loses to the detour over its tip; above, they coincide or
    // the direct one wins.
    let small_top = Point::new(0.0, 0.375);
    let large_top = Point::new(-0.5, 0.25);
    let detour_wins = |y: f64| {
        let s = left_boundary_point(y);
        let direct = w.segment_cost(s, small_top);
        let detour = w.segment_cost(s, large_top) + w.segment_cost(large_top, small_top);
        if direct - detour > 1e-12 {
            1.0
        } else {
            -1.0
        }
    };
    let y1 = bisect(detour_wins, y0, hi, 1e-8).map_err(bracket)?;
    Ok((y0 + 1.0, y1 + 1.0))
}

/// Two stacks built under different branch policies and how much they disagree.
#[derive(Debug, Clone)]
pub struct NonUniqueness {
    pub a: SolutionStack,
    pub b: SolutionStack,
    pub energy_a: f64,
    pub energy_b: f64,
    /// Area of `{|u_A − u_B| > 2·level spacing}`.
    pub area: f64,
}

impl NonUniqueness {
    pub fn energy_rel_diff(&self) -> f64 {
        (self.energy_a - self.energy_b).abs() / self.energy_a.abs().max(self.energy_b.abs())
    }

    pub fn energies_match(&self) -> bool {
        self.energy_rel_diff() <= 0.005
    }

    /// Area of the disagreement set restricted to samples where `keep(u_A, u_B)`.
    pub fn area_where(&self, keep: impl Fn(f64, f64) -> bool) -> f64 {
        let fa = self.a.field();
        let fb = self.b.field();
        let gap = 2.0 * self.a.level_spacing().max(self.b.level_spacing());
        let cell = fa.spacing() * fa.spacing();
        let mut area = 0.0;
        for j in 0..fa.height() {
            for i in 0..fa.width() {
                if !fa.in_mask(i, j) {
                    continue;
                }
                let (ua, ub) = (fa.value(i, j), fb.value(i, j));
                if (ua - ub).abs() > gap && keep(ua, ub) {
                    area += cell;
                }
            }
        }
        area
    }
}

pub fn nonuniqueness_gap(
    w: &WeightField,
    levels: &[f64],
    policy_a: BranchPolicy,
    policy_b: BranchPolicy,
    opts: &StackOptions,
) -> Result<NonUniqueness> {
    if policy_a == policy_b {
        return Err(Error::invalid("the two branch policies coincide"));
    }
    let a = stack(w, levels, policy_a, opts)?;
    let b = stack(w, levels, policy_b, opts)?;
    let energy_a = bv_energy(&a, w);
    let energy_b = bv_energy(&b, w);
    let mut out = NonUniqueness {
        a,
        b,
        energy_a,
        energy_b,
        area: 0.0,
    };
    out.area = out.area_where(|_, _| true);
    Ok(out)
}

/// Weighted length of the segment leaving `(−ε, b)` at angle `ϑ` to the
/// horizontal, up to the y-axis, in the lite-diamond core.
pub fn ldhc_probe_length(eps: f64, b: f64, theta: f64) -> f64 {
    let w = WeightField::lite_dmd_heavy_core();
    let p = Point::new(-eps, b);
    let q = Point::new(0.0, b + eps * theta.tan());
    w.segment_cost(p, q)
}

/// `4I` for the probe segment, in closed form.
pub fn ldhc_probe_closed_form(eps: f64, b: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (3.0 - 2.0 * eps - 2.0 * b) * eps / c + (c - s) * eps * eps / (c * c)
}

/// `4cos²ϑ · dI/dϑ` in closed form.
pub fn ldhc_probe_derivative(eps: f64, b: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    (3.0 - 2.0 * eps - 2.0 * b) * eps * s + 2.0 * eps * eps * (c - s) * theta.tan() - eps * eps * (c + s)
}

pub const LDHC_STRAIGHT: f64 = 0.625;

/// `0.575 · √1.16`
pub fn ldhc_kinked_length() -> f64 {
    0.575 * 1.16f64.sqrt()
}

pub fn litedmdheavycore_checks() -> Result<ExperimentReport> {
    let w = WeightField::lite_dmd_heavy_core();
    let mut rep = ExperimentReport::new("litedmdheavycore");
    let (a, b) = (Point::new(-0.5, 0.0), Point::new(0.5, 0.0));
    let straight = weighted_length(&Polyline::segment(a, b)?, &w, 1e-3)?;
    let kinked = weighted_length(&Polyline::new(vec![a, Point::new(0.0, 0.2), b])?, &w, 1e-3)?;
    rep.push("straight_length", straight, LDHC_STRAIGHT, 1e-9, Check::Abs);
    rep.push("kinked_length", kinked, ldhc_kinked_length(), 1e-9, Check::Abs);
    rep.push("kinked_minus_straight", kinked - straight, 0.0, 0.0, Check::AtMost);
    for t in [0.9, 1.0, 1.1] {
        let curve = level_curve(&w, t, Branch::Minimal)?;
        let slope = curve
            .slope_right_of_axis()
            .ok_or_else(|| Error::invalid("level curve has too few vertices"))?;
        rep.push(format!("axis_slope_t{t}"), slope.abs(), 0.0, 0.02, Check::AtMost);
    }
    let (eps, bb, h) = (1e-3, 0.25, 1e-5);
    for theta in [-0.3, 0.3] {
        let fd = (ldhc_probe_length(eps, bb, theta + h) - ldhc_probe_length(eps, bb, theta - h)) / (2.0 * h);
        let scaled = 4.0 * theta.cos().powi(2) * fd;
        rep.push(
            format!("probe_4I_theta{theta}"),
            4.0 * ldhc_probe_length(eps, bb, theta),
            ldhc_probe_closed_form(eps, bb, theta),
            1e-12,
            Check::Abs,
        );
        rep.push(
            format!("probe_derivative_theta{theta}"),
            scaled,
            ldhc_probe_derivative(eps, bb, theta),
            1e-3,
            Check::Rel,
        );
        let check = if theta < 0.0 { Check::AtMost } else { Check::AtLeast };
        rep.push(format!("probe_derivative_sign_theta{theta}"), scaled, 0.0, 0.0, check);
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn boundary_hits_are_at_distance_r() {
        let z = Point::from_angle(0.7);
        let (a, b) = ball_boundary_hits(z, 0.3).unwrap();
        assert!((a.dist(z) - 0.3).abs() < 1e-14);
        assert!((b.dist(z) - 0.3).abs() < 1e-14);
        assert!(ball_boundary_hits(z, 2.5).is_err());
        assert!(ball_boundary_hits(Point::new(0.5, 0.0), 0.3).is_err());
    }

    #[test]
    fn constant_clearance_is_half_r_squared() {
        let w = WeightField::constant(1.0).unwrap();
        let c = curvature_clearance(&w, Point::new(0.0, -1.0), 0.2).unwrap();
        assert!((c - 0.02).abs() < 1e-9);
    }

    #[test]
    fn probe_closed_form_matches_definition() {
        for theta in [-0.4, 0.0, 0.2] {
            let direct = 4.0 * ldhc_probe_length(1e-2, 0.3, theta);
            assert!((direct - ldhc_probe_closed_form(1e-2, 0.3, theta)).abs() < 1e-12);
        }
    }

    #[test]
    fn thresholds_in_regime() {
        let (t0, t1) = three_diamonds_thresholds(2f64.sqrt()).unwrap();
        assert!(0.75 < t0 && t0 < t1 && t1 < 1.375);
        assert!(three_diamonds_thresholds(1.2).is_err());
    }
}
