//! Weighted length, Snell refraction, ray tracing through piecewise media,
//! two-point shooting and the closed-form quantities of the example catalog.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::weight::{l1_sphere_crossings, WeightField, DEFAULT_SHELLS};

/// Which of several equally short paths to prefer: `Minimal` picks the upper
/// one (smaller superlevel set), `Maximal` the lower one.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Minimal,
    Maximal,
}

impl Branch {
    /// +1 for the upper preference, −1 for the lower.
    pub fn sign(self) -> f64 {
        match self {
            Branch::Minimal => 1.0,
            Branch::Maximal => -1.0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Branch::Minimal => "minimal",
            Branch::Maximal => "maximal",
        }
    }
}

impl std::str::FromStr for Branch {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "minimal" | "upper" => Ok(Branch::Minimal),
            "maximal" | "lower" => Ok(Branch::Maximal),
            _ => Err(Error::invalid(format!("unknown branch '{s}'"))),
        }
    }
}

/// An ordered list of at least two plane points, consecutive points distinct.
#[derive(Debug, Clone, PartialEq)]
pub struct Polyline {
    vertices: Vec<Point>,
}

impl Polyline {
    /// Drops repeated consecutive vertices; fails if fewer than two remain.
    pub fn new(mut vertices: Vec<Point>) -> Result<Self> {
        if vertices.iter().any(|p| !p.is_finite()) {
            return Err(Error::DegeneratePath("non-finite vertex".into()));
        }
        vertices.dedup();
        if vertices.len() < 2 {
            return Err(Error::DegeneratePath(format!(
                "{} distinct vertices",
                vertices.len()
            )));
        }
        Ok(Self { vertices })
    }

    pub fn segment(a: Point, b: Point) -> Result<Self> {
        Self::new(vec![a, b])
    }

    pub fn vertices(&self) -> &[Point] {
        &self.vertices
    }

    pub fn into_vertices(self) -> Vec<Point> {
        self.vertices
    }

    pub fn start(&self) -> Point {
        self.vertices[0]
    }

    pub fn end(&self) -> Point {
        self.vertices[self.vertices.len() - 1]
    }

    pub fn euclidean_length(&self) -> f64 {
        self.vertices.windows(2).map(|s| s[0].dist(s[1])).sum()
    }

    /// Exact weighted length for the piecewise-affine weights of this crate.
    pub fn cost(&self, w: &WeightField) -> f64 {
        self.vertices
            .windows(2)
            .map(|s| w.segment_cost(s[0], s[1]))
            .sum()
    }

    /// Signed area between the path and its chord, positive when the path
    /// bulges to the left of the direction start → end.
    pub fn bulge(&self) -> f64 {
        let a = self.start();
        self.vertices
            .windows(2)
            .map(|s| 0.5 * (s[0] - a).cross(s[1] - a))
            .sum::<f64>()
            * -1.0
    }

    /// Smallest distance from `p` to the path.
    pub fn distance_to(&self, p: Point) -> f64 {
        self.vertices
            .windows(2)
            .map(|s| crate::geometry::point_segment_distance(p, s[0], s[1]))
            .fold(f64::INFINITY, f64::min)
    }
}

/// Weighted length `∫|φ'| w(φ)` of a polyline by composite midpoint quadrature.
/// Each segment is first cut at the weight's interfaces, then every piece is
/// subdivided into steps of at most `quad_step`.
pub fn weighted_length(path: &Polyline, w: &WeightField, quad_step: f64) -> Result<f64> {
    if !(quad_step > 0.0) {
        return Err(Error::invalid("quad_step must be positive"));
    }
    let mut total = 0.0;
    let mut cuts = Vec::new();
    for seg in path.vertices().windows(2) {
        let (p, q) = (seg[0], seg[1]);
        let len = p.dist(q);
        cuts.clear();
        w.crossings(p, q, &mut cuts);
        let mut params: Vec<f64> = cuts.iter().map(|c| c.s).collect();
        params.push(1.0);
        params.sort_by(f64::total_cmp);
        let mut lo = 0.0;
        let mut seg_total = 0.0;
        for &hi in &params {
            if hi <= lo {
                continue;
            }
            let steps = ((hi - lo) * len / quad_step).ceil().max(1.0) as usize;
            let h = (hi - lo) / steps as f64;
            let mut piece = 0.0;
            for i in 0..steps {
                piece += w.eval(p.lerp(q, lo + (i as f64 + 0.5) * h));
            }
            seg_total += piece * h;
            lo = hi;
        }
        total += seg_total * len;
    }
    Ok(total)
}

/// Refraction angle from `sin θ_out = (w_in / w_out) sin θ_in`, angles measured
/// from the interface normal.
pub fn snell_refract(w_in: f64, w_out: f64, theta_in: f64) -> Result<f64> {
    if !(w_in > 0.0 && w_out > 0.0) {
        return Err(Error::invalid("weights must be positive"));
    }
    if !(0.0..=FRAC_PI_2).contains(&theta_in) {
        return Err(Error::invalid(format!(
            "incidence angle {theta_in} outside [0, π/2]"
        )));
    }
    let sin = w_in / w_out * theta_in.sin();
    if sin > 1.0 {
        return Err(Error::TotalInternalReflection { interface: 0, sin });
    }
    Ok(sin.asin())
}

/// Angle in the last medium of a stack of parallel layers. The sine is
/// propagated layer by layer, failing at the first supercritical interface;
/// the telescoped value `(w_1/w_n) sin θ_1` is checked against it.
pub fn snell_chain(weights: &[f64], theta_1: f64) -> Result<f64> {
    if weights.is_empty() || weights.iter().any(|w| !(*w > 0.0)) {
        return Err(Error::invalid("weights must be positive"));
    }
    if !(0.0..=FRAC_PI_2).contains(&theta_1) {
        return Err(Error::invalid("incidence angle outside [0, π/2]"));
    }
    let mut sin = theta_1.sin();
    for (k, pair) in weights.windows(2).enumerate() {
        sin *= pair[0] / pair[1];
        if sin > 1.0 {
            return Err(Error::TotalInternalReflection {
                interface: k + 1,
                sin,
            });
        }
    }
    let closed = weights[0] / weights[weights.len() - 1] * theta_1.sin();
    debug_assert!((closed - sin).abs() <= 1e-12 * closed.max(1.0));
    Ok(closed.min(1.0).asin())
}

/// Position and heading of a ray; `layer_index` counts the interfaces crossed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RayState {
    pub position: Point,
    pub direction: Point,
    pub layer_index: usize,
}

/// Where a traced ray stops.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// First arrival on `|p|₁ = r`.
    L1Radius(f64),
    /// First arrival on the line `normal · p = offset`.
    Line { normal: Point, offset: f64 },
}

impl StopRule {
    pub fn y_axis() -> Self {
        StopRule::Line {
            normal: Point::new(1.0, 0.0),
            offset: 0.0,
        }
    }

    /// Parameter of the first stop along `p + s (q − p)`, `s ∈ (s_min, 1]`.
    fn hit(&self, p: Point, q: Point, s_min: f64) -> Option<f64> {
        match *self {
            StopRule::L1Radius(r) => l1_sphere_crossings(Point::ORIGIN, r, p, q, s_min)
                .first()
                .map(|c| c.s),
            StopRule::Line { normal, offset } => {
                let den = normal.dot(q - p);
                if den == 0.0 {
                    return None;
                }
                let s = (offset - normal.dot(p)) / den;
                (s > s_min && s <= 1.0).then_some(s)
            }
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct TraceOptions {
    /// Length of the straight probe used to look for the next event.
    pub reach: f64,
    pub max_segments: usize,
}

impl Default for TraceOptions {
    fn default() -> Self {
        Self {
            reach: 8.0,
            max_segments: 1_000_000,
        }
    }
}

#[derive(Debug, Clone)]
pub struct RayTrace {
    pub path: Polyline,
    pub end: RayState,
}

const TRACE_EPS: f64 = 1e-13;

/// Follows a ray from `start` along `direction`, refracting by Snell's law at
/// every interface where the weight jumps, until `stop` fires. Vertices are
/// recorded only where the direction changes.
pub fn trace_ray(
    w: &WeightField,
    start: Point,
    direction: Point,
    stop: &StopRule,
    opts: &TraceOptions,
) -> Result<RayTrace> {
    let mut d = direction.normalized();
    if !d.is_finite() || !start.is_finite() {
        return Err(Error::invalid("ray start and direction must be finite"));
    }
    let mut vertices = vec![start];
    let mut p = start;
    let mut interfaces = 0usize;
    for _ in 0..opts.max_segments {
        let q = p + d * opts.reach;
        let mut s = TRACE_EPS;
        let stop_s = stop.hit(p, q, TRACE_EPS);
        loop {
            let next = w.next_crossing(p, q, s);
            let stop_here = match (stop_s, next) {
                (Some(st), Some(c)) => st <= c.s,
                (Some(_), None) => true,
                (None, _) => false,
            };
            if stop_here {
                let end = p.lerp(q, stop_s.unwrap());
                vertices.push(end);
                return Ok(RayTrace {
                    path: Polyline::new(vertices)?,
                    end: RayState {
                        position: end,
                        direction: d,
                        layer_index: interfaces,
                    },
                });
            }
            let Some(c) = next else {
                return Err(Error::SegmentBudget(vertices.len()));
            };
            interfaces += 1;
            let x = p.lerp(q, c.s);
            let w_before = w.eval(p.lerp(q, 0.5 * (s.max(0.0) + c.s)));
            // first event strictly past this one, to sample the far side
            let mut far = c.s + 1e-9;
            if let Some(c2) = w.next_crossing(p, q, c.s + 1e-14) {
                far = far.min(c2.s);
            }
            let w_after = w.eval(p.lerp(q, 0.5 * (c.s + far.min(1.0))));
            if w_after == w_before {
                s = c.s;
                continue;
            }
            let n = if c.normal.dot(d) < 0.0 { -c.normal } else { c.normal };
            let cos_i = n.dot(d).min(1.0);
            let eta = w_before / w_after;
            let sin_t2 = eta * eta * (1.0 - cos_i * cos_i);
            if sin_t2 > 1.0 {
                return Err(Error::TotalInternalReflection {
                    interface: interfaces,
                    sin: sin_t2.sqrt(),
                });
            }
            let cos_t = (1.0 - sin_t2).sqrt();
            d = (d * eta + n * (cos_t - eta * cos_i)).normalized();
            vertices.push(x);
            p = x;
            break;
        }
    }
    Err(Error::SegmentBudget(opts.max_segments))
}

/// Ray launched at angle `theta_0` (radians, counter-clockwise from the
/// positive x-axis).
pub fn trace_layered_ray(
    w: &WeightField,
    start: Point,
    theta_0: f64,
    stop: &StopRule,
) -> Result<Polyline> {
    Ok(trace_ray(w, start, Point::from_angle(theta_0), stop, &TraceOptions::default())?.path)
}

#[derive(Debug, Clone, Copy)]
pub struct ShootOptions {
    pub angle_samples: usize,
    /// Shells used to trace continuous weights.
    pub shells: usize,
    pub branch: Branch,
    /// Also try paths that bend at a corner of a polygonal region.
    pub corner_paths: bool,
    pub trace: TraceOptions,
}

impl Default for ShootOptions {
    fn default() -> Self {
        Self {
            angle_samples: 2048,
            shells: DEFAULT_SHELLS,
            branch: Branch::Minimal,
            corner_paths: true,
            trace: TraceOptions::default(),
        }
    }
}

pub fn shoot_two_point(w: &WeightField, a: Point, b: Point, tol: f64) -> Result<Polyline> {
    shoot_two_point_with(w, a, b, tol, &ShootOptions::default())
}

/// Two-point shooting: launch angles are scanned on a uniform grid, every sign
/// change of the miss distance is refined by bisection, and the shortest of
/// the resulting stationary rays (and of the corner paths) is returned.
pub fn shoot_two_point_with(
    w: &WeightField,
    a: Point,
    b: Point,
    tol: f64,
    opts: &ShootOptions,
) -> Result<Polyline> {
    if a == b || !a.is_finite() || !b.is_finite() {
        return Err(Error::invalid("shooting needs two distinct finite points"));
    }
    if !(tol > 0.0) {
        return Err(Error::invalid("tolerance must be positive"));
    }
    let medium = if w.is_continuous() && !matches!(w.kind(), crate::weight::WeightKind::Constant(_)) {
        w.shell_discretization(opts.shells)?
    } else {
        w.clone()
    };
    let u = (b - a).normalized();
    let v = u.perp();
    let stop = StopRule::Line {
        normal: u,
        offset: u.dot(b),
    };
    let base = u.y.atan2(u.x);
    let trace = |phi: f64| trace_ray(&medium, a, Point::from_angle(base + phi), &stop, &opts.trace);
    let miss = |phi: f64| trace(phi).ok().map(|t| (t.end.position - b).dot(v));

    let m = opts.angle_samples.max(2);
    let phi_max = FRAC_PI_2 - 1e-3;
    let angles: Vec<f64> = (0..m)
        .map(|i| -phi_max + (i as f64 + 0.5) * 2.0 * phi_max / m as f64)
        .collect();
    let misses: Vec<Option<f64>> = angles.par_iter().map(|&phi| miss(phi)).collect();

    let mut brackets = Vec::new();
    for i in 0..m - 1 {
        if let (Some(f0), Some(f1)) = (misses[i], misses[i + 1]) {
            if f0 == 0.0 || f0.signum() != f1.signum() {
                brackets.push((angles[i], f0, angles[i + 1]));
            }
        }
    }
    let roots: Vec<Polyline> = brackets
        .par_iter()
        .filter_map(|&(lo, f_lo, hi)| {
            let (mut lo, mut f_lo, mut hi) = (lo, f_lo, hi);
            for _ in 0..200 {
                if hi - lo <= 1e-16 || f_lo.abs() <= 1e-3 * tol {
                    break;
                }
                let mid = 0.5 * (lo + hi);
                let f_mid = miss(mid)?;
                if f_mid == 0.0 || f_mid.signum() == f_lo.signum() {
                    lo = mid;
                    f_lo = f_mid;
                } else {
                    hi = mid;
                }
            }
            let t = trace(lo).ok()?;
            if t.end.position.dist(b) > tol {
                return None;
            }
            let mut vs = t.path.into_vertices();
            *vs.last_mut().unwrap() = b;
            Polyline::new(vs).ok()
        })
        .collect();

    let mut candidates = roots;
    if opts.corner_paths {
        for c in w.corners() {
            if c != a && c != b {
                candidates.push(Polyline::new(vec![a, c, b])?);
            }
        }
    }
    let straight = w.segment_cost(a, b);
    let best = select_path(candidates, w, opts.branch)
        .filter(|(_, cost)| *cost <= straight + 1e-9)
        .ok_or(Error::UseOracle { from: a, to: b })?;
    Ok(best.0)
}

/// Least-cost path; costs within 1e-9 count as ties, resolved by the branch.
pub fn select_path(paths: Vec<Polyline>, w: &WeightField, branch: Branch) -> Option<(Polyline, f64)> {
    let mut scored: Vec<(Polyline, f64)> = paths
        .into_iter()
        .map(|p| {
            let c = p.cost(w);
            (p, c)
        })
        .collect();
    let min = scored.iter().map(|s| s.1).fold(f64::INFINITY, f64::min);
    scored.retain(|s| s.1 <= min + 1e-9);
    scored
        .into_iter()
        .max_by(|x, y| (branch.sign() * x.0.bulge()).total_cmp(&(branch.sign() * y.0.bulge())))
}

/// `H(t₀) = ½ ∫_{t₀}^{1} 1 − (1+t₀)/√(2(1+t)² − (1+t₀)²) dt`, the height at
/// which the light-diamond geodesic leaving `(t₀, 0)` reaches `|x|+|y| = 1`.
pub fn h_of(t0: f64) -> Result<f64> {
    if !(t0 > 0.0 && t0 < 1.0) {
        return Err(Error::invalid(format!("t0 = {t0} outside (0, 1)")));
    }
    let c = 1.0 + t0;
    let f = |t: f64| {
        let s = 1.0 + t;
        1.0 - c / (2.0 * s * s - c * c).sqrt()
    };
    Ok(0.5 * adaptive_simpson(f, t0, 1.0, 1e-10))
}

/// Height gain summed shell by shell for the `n`-shell light diamond,
/// leaving the x-axis at `(k0/n, 0)`.
pub fn h_discrete(n: usize, k0: usize) -> f64 {
    let nf = n as f64;
    let c = 1.0 + k0 as f64 / nf;
    (k0 + 1..=n)
        .map(|k| {
            let s = 1.0 + k as f64 / nf;
            (1.0 - c / (2.0 * s * s - c * c).sqrt()) / (2.0 * nf)
        })
        .sum()
}

/// Traces the geodesic leaving `(k0/n, 0)` through the `n`-shell light diamond
/// (weight `α + (1−α)·k/n` on shell k) up to `|x|+|y| = 1`. The ray starts
/// horizontally in a virtual medium of weight `α + (1−α)k0/n`.
pub fn light_diamond_shell_ray(alpha: f64, n: usize, k0: usize) -> Result<Polyline> {
    if k0 >= n {
        return Err(Error::invalid("k0 must be below n"));
    }
    let w = WeightField::light_diamond_tight(alpha)?.shell_discretization(n)?;
    let nf = n as f64;
    let w0 = alpha + (1.0 - alpha) * k0 as f64 / nf;
    let w1 = alpha + (1.0 - alpha) * (k0 + 1) as f64 / nf;
    let theta = (w0 / w1 * FRAC_PI_4.sin()).asin();
    let dir = Point::from_angle(FRAC_PI_4 - theta);
    let opts = TraceOptions {
        reach: 4.0,
        max_segments: 4 * n + 16,
    };
    Ok(trace_ray(&w, Point::new(k0 as f64 / nf, 0.0), dir, &StopRule::L1Radius(1.0), &opts)?.path)
}

/// True when the boundary arc of the heavy disk is no longer than the chord
/// through it: `θ ≤ 2α sin(θ/2)`. Ties count as the arc.
pub fn heavy_disk_arc_test(alpha: f64, theta: f64) -> bool {
    heavy_disk_arc_margin(alpha, theta) >= -1e-12 * theta.max(1.0)
}

/// `2α sin(θ/2) − θ`.
pub fn heavy_disk_arc_margin(alpha: f64, theta: f64) -> f64 {
    2.0 * alpha * (0.5 * theta).sin() - theta
}

/// Weighted length of the heavy-diamond path from `(−1,0)` entering the
/// diamond at `(t − ½, t)`, crossing it horizontally and leaving symmetrically.
pub fn heavy_diamond_g(alpha: f64, t: f64) -> f64 {
    2.0 * (t * t + (t + 0.5) * (t + 0.5)).sqrt() + alpha * (1.0 - 2.0 * t)
}

/// Length of the heavy-disk geodesic from `(−1,0)` to `(1,0)` hugging the
/// disk of radius ½: two tangent segments and a 60° arc (weight 1 on the arc).
pub fn heavy_disk_mid_length() -> f64 {
    2.0 * 0.75f64.sqrt() + std::f64::consts::PI / 6.0
}

/// Minimizer of `f` on `[lo, hi]` by golden-section search.
pub fn golden_section<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> (f64, f64) {
    let r = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = hi - r * (hi - lo);
    let mut x2 = lo + r * (hi - lo);
    let mut f1 = f(x1);
    let mut f2 = f(x2);
    while hi - lo > tol {
        if f1 <= f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - r * (hi - lo);
            f1 = f(x1);
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + r * (hi - lo);
            f2 = f(x2);
        }
        if x1 >= x2 {
            break;
        }
    }
    if f1 <= f2 {
        (x1, f1)
    } else {
        (x2, f2)
    }
}

/// Root of `f` on `[lo, hi]` by bisection; the endpoints must bracket a sign change.
pub fn bisect<F: Fn(f64) -> f64>(f: F, mut lo: f64, mut hi: f64, tol: f64) -> Result<f64> {
    let (a, b) = (lo, hi);
    let mut f_lo = f(lo);
    let f_hi = f(hi);
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo.signum() == f_hi.signum() || f_lo.is_nan() || f_hi.is_nan() {
        return Err(Error::NoRoot { lo: a, hi: b });
    }
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            return Ok(mid);
        }
        if f_mid.signum() == f_lo.signum() {
            lo = mid;
            f_lo = f_mid;
        } else {
            hi = mid;
        }
        if mid == lo && mid == hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Adaptive Simpson quadrature with Richardson correction.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(
        f: &F,
        a: f64,
        b: f64,
        fa: f64,
        fm: f64,
        fb: f64,
        whole: f64,
        tol: f64,
        depth: u32,
    ) -> f64 {
        let m = 0.5 * (a + b);
        let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
        let (flm, frm) = (f(lm), f(rm));
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if depth == 0 || delta.abs() <= 15.0 * tol {
            left + right + delta / 15.0
        } else {
            recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1)
                + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1)
        }
    }
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    recurse(&f, a, b, fa, fm, fb, whole, tol, 48)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::weight::Layer;

    #[test]
    fn lengths_from_the_catalog() {
        let lite = WeightField::lite_dmd_heavy_core();
        let straight = Polyline::segment(Point::new(-0.5, 0.0), Point::new(0.5, 0.0)).unwrap();
        assert!((weighted_length(&straight, &lite, 1e-3).unwrap() - 0.625).abs() < 1e-12);
        let kinked = Polyline::new(vec![
            Point::new(-0.5, 0.0),
            Point::new(0.0, 0.2),
            Point::new(0.5, 0.0),
        ])
        .unwrap();
        let expected = 0.575 * 1.16f64.sqrt();
        assert!((weighted_length(&kinked, &lite, 1e-4).unwrap() - expected).abs() < 1e-12);
        let c = WeightField::constant(1.0).unwrap();
        let seg = Polyline::segment(Point::ORIGIN, Point::new(3.0, 4.0)).unwrap();
        assert_eq!(weighted_length(&seg, &c, 0.5).unwrap(), 5.0);
        assert!(weighted_length(&seg, &c, 0.0).is_err());
    }

    #[test]
    fn polyline_rejects_degenerate_input() {
        assert!(Polyline::new(vec![Point::ORIGIN]).is_err());
        assert!(Polyline::new(vec![Point::ORIGIN, Point::ORIGIN]).is_err());
    }

    #[test]
    fn snell_examples() {
        let t = snell_refract(1.0, 2.0, std::f64::consts::FRAC_PI_6).unwrap();
        assert!((t - 0.25f64.asin()).abs() < 1e-15);
        assert!((t - 0.25268).abs() < 1e-5);
        assert_eq!(snell_refract(1.7, 1.7, 0.3).unwrap(), 0.3);
        assert!(matches!(
            snell_refract(2.0, 1.0, std::f64::consts::FRAC_PI_3),
            Err(Error::TotalInternalReflection { .. })
        ));
        assert!(snell_refract(0.0, 1.0, 0.1).is_err());
        let th = snell_chain(&[1.0, 1.3, 1.7, 2.0], std::f64::consts::FRAC_PI_6).unwrap();
        assert!((th - 0.25f64.asin()).abs() < 1e-12);
        assert!((snell_chain(&[1.0; 4], 0.7).unwrap() - 0.7).abs() < 1e-15);
        assert!(snell_chain(&[2.0, 1.0], FRAC_PI_4).is_err());
    }

    #[test]
    fn constant_ray_is_one_segment() {
        let c = WeightField::constant(1.0).unwrap();
        let path = trace_layered_ray(&c, Point::ORIGIN, 0.4, &StopRule::L1Radius(1.0)).unwrap();
        assert_eq!(path.vertices().len(), 2);
        let end = path.end();
        assert!((end.l1_norm() - 1.0).abs() < 1e-12);
        assert!((end.y.atan2(end.x) - 0.4).abs() < 1e-12);
    }

    #[test]
    fn two_layer_kink_obeys_snell() {
        let w = WeightField::layered_horizontal(vec![
            Layer { depth: 1.0, weight: 1.0 },
            Layer { depth: 2.0, weight: 2.0 },
        ])
        .unwrap();
        let theta1: f64 = 0.6;
        let path = trace_layered_ray(
            &w,
            Point::ORIGIN,
            -FRAC_PI_2 + theta1,
            &StopRule::Line { normal: Point::new(0.0, 1.0), offset: -2.0 },
        )
        .unwrap();
        let v = path.vertices();
        assert_eq!(v.len(), 3);
        let d1 = (v[1] - v[0]).normalized();
        let d2 = (v[2] - v[1]).normalized();
        // angle from the vertical normal
        let ratio = d1.x.abs() / d2.x.abs();
        assert!((ratio - 2.0).abs() < 1e-12, "{ratio}");
    }

    #[test]
    fn total_internal_reflection_names_the_interface() {
        let w = WeightField::layered_horizontal(vec![
            Layer { depth: 1.0, weight: 2.0 },
            Layer { depth: 2.0, weight: 1.0 },
        ])
        .unwrap();
        let err = trace_layered_ray(&w, Point::ORIGIN, -0.3, &StopRule::Line {
            normal: Point::new(0.0, 1.0),
            offset: -2.0,
        })
        .unwrap_err();
        assert!(matches!(err, Error::TotalInternalReflection { interface: 1, .. }), "{err}");
    }

    #[test]
    fn h_of_examples() {
        assert!(h_of(0.0).is_err());
        assert!(h_of(1.0).is_err());
        assert!(h_of(1.0 - 1e-9).unwrap() < 1e-12);
        let h = h_of(0.5).unwrap();
        assert!((h - h_discrete(100_000, 50_000)).abs() < 1e-3);
        assert!(h_of(0.25).unwrap() > h_of(0.75).unwrap());
    }

    #[test]
    fn arc_test_examples() {
        assert!(heavy_disk_arc_test(FRAC_PI_2, std::f64::consts::PI));
        assert!(heavy_disk_arc_margin(FRAC_PI_2, std::f64::consts::PI).abs() < 1e-15);
        assert!(heavy_disk_arc_test(2.0, FRAC_PI_2));
        assert!(!heavy_disk_arc_test(1.0, FRAC_PI_2));
    }

    #[test]
    fn numeric_helpers() {
        let (x, fx) = golden_section(|x| (x - 0.3) * (x - 0.3) + 1.0, -1.0, 2.0, 1e-10);
        assert!((x - 0.3).abs() < 1e-6 && (fx - 1.0).abs() < 1e-12);
        let r = bisect(|x| x * x - 2.0, 0.0, 2.0, 1e-14).unwrap();
        assert!((r - 2f64.sqrt()).abs() < 1e-13);
        assert!(bisect(|x| x * x + 1.0, 0.0, 1.0, 1e-9).is_err());
        let i = adaptive_simpson(|x| x.sin(), 0.0, std::f64::consts::PI, 1e-12);
        assert!((i - 2.0).abs() < 1e-11);
    }
}
