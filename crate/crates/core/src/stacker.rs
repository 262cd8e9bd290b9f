//! Level curves of the least-gradient solution with boundary data `f = y + 1`
//! on the unit disk, and the solution obtained by stacking them.
//!
//! The superlevel set `E_t` lies above a weighted geodesic joining the two
//! boundary points at height `t − 1`. Geodesics are found on a column lattice
//! shared by all levels, so a whole stack reuses one table of edge costs.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::geodesy::{Branch, Polyline};
use crate::geometry::Point;
use crate::lattice::{disk_rows, polish, row_windows, DirectCost, GapCost, LatticeSpec, Problem, Terminal};
use crate::weight::WeightField;

/// Boundary data.
pub fn boundary_value(p: Point) -> f64 {
    p.y + 1.0
}

/// Half-width of the chord of the unit circle at height `t − 1`.
pub fn chord_half_width(t: f64) -> f64 {
    (t * (2.0 - t)).max(0.0).sqrt()
}

/// The two points of the unit circle where `f = t`, left one first.
pub fn boundary_points(t: f64) -> Result<(Point, Point)> {
    if !(t > 0.0 && t < 2.0) {
        return Err(Error::invalid(format!("level {t} outside (0, 2)")));
    }
    let xb = chord_half_width(t);
    let h = t - 1.0;
    Ok((Point::new(-xb, h), Point::new(xb, h)))
}

/// `n` equally spaced midpoint levels in `(0, 2)`.
pub fn uniform_levels(n: usize) -> Vec<f64> {
    (0..n).map(|k| (2 * k + 1) as f64 / n as f64).collect()
}

/// Minimal branch strictly above the switch level, maximal at or below it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchPolicy {
    pub switch_level: f64,
}

impl BranchPolicy {
    pub fn all_minimal() -> Self {
        Self { switch_level: 0.0 }
    }

    pub fn all_maximal() -> Self {
        Self { switch_level: 2.0 }
    }

    pub fn switch_at(t: f64) -> Self {
        Self { switch_level: t }
    }

    pub fn branch_at(&self, t: f64) -> Branch {
        if t > self.switch_level {
            Branch::Minimal
        } else {
            Branch::Maximal
        }
    }
}

/// A level curve `y = g_t(x)` over `[−x_b(t), x_b(t)]`, stored as a polyline
/// with increasing abscissae.
#[derive(Debug, Clone, PartialEq)]
pub struct LevelCurve {
    level: f64,
    branch: Branch,
    xs: Vec<f64>,
    ys: Vec<f64>,
    symmetric: bool,
}

impl LevelCurve {
    pub fn level(&self) -> f64 {
        self.level
    }

    pub fn branch(&self) -> Branch {
        self.branch
    }

    pub fn height(&self) -> f64 {
        self.ys[0]
    }

    pub fn half_width(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    /// Mirror-symmetric about the y-axis by construction.
    pub fn is_symmetric(&self) -> bool {
        self.symmetric
    }

    pub fn xs(&self) -> &[f64] {
        &self.xs
    }

    pub fn ys(&self) -> &[f64] {
        &self.ys
    }

    pub fn points(&self) -> Vec<Point> {
        self.xs.iter().zip(&self.ys).map(|(&x, &y)| Point::new(x, y)).collect()
    }

    pub fn polyline(&self) -> Polyline {
        Polyline::new(self.points()).expect("level curves have distinct endpoints")
    }

    pub fn cost(&self, w: &WeightField) -> f64 {
        self.polyline().cost(w)
    }

    /// `g_t(x)`, extended by the endpoint height outside the chord.
    pub fn eval(&self, x: f64) -> f64 {
        let x = if self.symmetric { -x.abs() } else { x };
        let n = self.xs.len();
        if x <= self.xs[0] || x >= self.xs[n - 1] {
            return if x <= self.xs[0] { self.ys[0] } else { self.ys[n - 1] };
        }
        let k = self.xs.partition_point(|&v| v <= x).min(n - 1);
        let (x0, x1) = (self.xs[k - 1], self.xs[k]);
        let (y0, y1) = (self.ys[k - 1], self.ys[k]);
        if x == x0 {
            return y0;
        }
        y0 + (x - x0) / (x1 - x0) * (y1 - y0)
    }

    /// One-sided slope at `x = 0` from the right, second-order accurate on
    /// the vertex abscissae.
    pub fn slope_right_of_axis(&self) -> Option<f64> {
        let k = self.xs.iter().position(|&x| x == 0.0)?;
        if k + 2 >= self.xs.len() {
            return None;
        }
        let h1 = self.xs[k + 1];
        let h2 = self.xs[k + 2];
        let (y0, y1, y2) = (self.ys[k], self.ys[k + 1], self.ys[k + 2]);
        // derivative at 0 of the quadratic through the three vertices
        let d1 = (y1 - y0) / h1;
        let d2 = (y2 - y0) / h2;
        Some((d1 * h2 - d2 * h1) / (h2 - h1))
    }
}

/// Lattice shared by the level curves of one weight.
pub struct LevelSolver<'w> {
    w: &'w WeightField,
    spec: LatticeSpec,
    xs: Vec<f64>,
    rows: Vec<f64>,
    col_rows: Vec<(usize, usize)>,
    windows: Vec<(usize, usize)>,
    offsets: Vec<usize>,
    table: Vec<Vec<f64>>,
    symmetric: bool,
    center: usize,
}

struct TableCost<'a> {
    solver: &'a LevelSolver<'a>,
    first_gap: usize,
}

impl GapCost for TableCost<'_> {
    fn fill(
        &self,
        gap: usize,
        r1: usize,
        a0: usize,
        b0: usize,
        point: &dyn Fn(usize, usize) -> Point,
        out: &mut Vec<f64>,
    ) {
        let s = self.solver;
        match s.table.get(gap + self.first_gap) {
            Some(t) if !t.is_empty() => {
                let base = s.offsets[r1] - s.windows[r1].0;
                out.clear();
                out.extend_from_slice(&t[base + a0..=base + b0]);
            }
            _ => DirectCost(s.w).fill(gap, r1, a0, b0, point, out),
        }
    }
}

impl<'w> LevelSolver<'w> {
    /// Lattice with columns every `1/cols_per_unit` across `[−1, 1]` and rows at
    /// multiples of `1/rows_per_unit`, plus the given extra heights (and their
    /// mirror images). With `precompute`, all interior edge costs are tabulated.
    pub fn new(w: &'w WeightField, spec: LatticeSpec, heights: &[f64], precompute: bool) -> Self {
        let m = spec.cols_per_unit as i64;
        let xs: Vec<f64> = (-m..=m).map(|i| i as f64 / m as f64).collect();
        let rpu = spec.rows_per_unit as i64;
        let mut rows: Vec<f64> = (-rpu..=rpu).map(|j| j as f64 / rpu as f64).collect();
        for &h in heights {
            if h.abs() < 1.0 {
                rows.push(h);
                rows.push(-h);
            }
        }
        rows.sort_by(f64::total_cmp);
        rows.dedup();
        let col_rows: Vec<(usize, usize)> = xs
            .iter()
            .map(|&x| disk_rows(Point::ORIGIN, Point::new(1.0, 0.0), x, &rows))
            .collect();
        let windows = row_windows(&rows, spec.max_slope * spec.dx());
        let mut offsets = Vec::with_capacity(rows.len() + 1);
        let mut acc = 0;
        for &(a, b) in &windows {
            offsets.push(acc);
            acc += b + 1 - a;
        }
        offsets.push(acc);
        let symmetric = w.is_x_symmetric();
        let center = m as usize;
        let mut solver = Self {
            w,
            spec,
            xs,
            rows,
            col_rows,
            windows,
            offsets,
            table: Vec::new(),
            symmetric,
            center,
        };
        if precompute {
            let last_gap = if symmetric { center } else { 2 * center - 1 };
            let table: Vec<Vec<f64>> = (0..last_gap)
                .into_par_iter()
                .map(|g| if g == 0 { Vec::new() } else { solver.gap_table(g) })
                .collect();
            solver.table = table;
        }
        solver
    }

    fn gap_table(&self, g: usize) -> Vec<f64> {
        let mut t = vec![f64::INFINITY; self.offsets[self.rows.len()]];
        let (lo0, hi0) = self.col_rows[g];
        let (lo1, hi1) = self.col_rows[g + 1];
        if lo1 > hi1 || lo0 > hi0 {
            return t;
        }
        let (x0, x1) = (self.xs[g], self.xs[g + 1]);
        for r1 in lo1..=hi1 {
            let (wl, wh) = self.windows[r1];
            let q = Point::new(x1, self.rows[r1]);
            for r0 in wl.max(lo0)..=wh.min(hi0) {
                t[self.offsets[r1] + r0 - wl] = self.w.segment_cost(Point::new(x0, self.rows[r0]), q);
            }
        }
        t
    }

    pub fn spec(&self) -> LatticeSpec {
        self.spec
    }

    /// Lattice geodesic for level `t`.
    pub fn solve(&self, t: f64, branch: Branch) -> Result<LevelCurve> {
        let (a, b) = boundary_points(t)?;
        let xb = b.x;
        let h = a.y;
        let half = 0.5 * self.spec.dx();
        let interior: Vec<usize> = (0..self.xs.len())
            .filter(|&i| self.xs[i].abs() <= xb - half)
            .collect();
        let mirror = self.symmetric && !interior.is_empty();
        let cols_idx: Vec<usize> = if mirror {
            interior.iter().copied().filter(|&i| i <= self.center).collect()
        } else {
            interior.clone()
        };
        let cols: Vec<f64> = cols_idx.iter().map(|&i| self.xs[i]).collect();
        let col_rows: Vec<(usize, usize)> = cols_idx.iter().map(|&i| self.col_rows[i]).collect();
        let problem = Problem {
            origin: Point::ORIGIN,
            u: Point::new(1.0, 0.0),
            cols: &cols,
            rows: &self.rows,
            col_rows: &col_rows,
            windows: &self.windows,
            start: (-xb, h),
            end: if mirror { Terminal::Mirror } else { Terminal::Point(xb, h) },
            max_slope: self.spec.max_slope,
            row_slack: self.spec.dy(),
            branch,
        };
        let path = if self.table.is_empty() {
            problem.solve(&DirectCost(self.w), self.w)?
        } else {
            let first_gap = cols_idx.first().copied().unwrap_or(0);
            problem.solve(&TableCost { solver: self, first_gap }, self.w)?
        };
        if path.slope_hit {
            return Err(Error::NonGraph {
                level: t,
                detail: "geodesic reaches the lattice slope limit".into(),
            });
        }
        let mut xs: Vec<f64> = path.points.iter().map(|p| p.0).collect();
        let mut ys: Vec<f64> = path.points.iter().map(|p| p.1).collect();
        *xs.last_mut().unwrap() = xb;
        *ys.last_mut().unwrap() = h;
        Ok(LevelCurve {
            level: t,
            branch,
            xs,
            ys,
            symmetric: mirror,
        })
    }

    /// Lattice geodesic followed by coordinate-descent polishing.
    pub fn solve_polished(&self, t: f64, branch: Branch, sweeps: usize) -> Result<LevelCurve> {
        let mut curve = self.solve(t, branch)?;
        if sweeps > 0 {
            let mut pts = curve.points();
            polish(self.w, &mut pts, Point::new(0.0, 1.0), curve.symmetric, sweeps, 2.0 * self.spec.dy());
            curve.ys = pts.iter().map(|p| p.y).collect();
        }
        Ok(curve)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct LevelOptions {
    pub lattice: LatticeSpec,
    pub polish_sweeps: usize,
}

impl Default for LevelOptions {
    fn default() -> Self {
        Self {
            lattice: LatticeSpec::default(),
            polish_sweeps: 400,
        }
    }
}

/// Boundary of the superlevel set `E_t`: the weighted geodesic between the two
/// boundary points at height `t − 1`; `branch` picks the upper (minimal) or
/// lower (maximal) one when several are equally short.
pub fn level_curve(w: &WeightField, t: f64, branch: Branch) -> Result<LevelCurve> {
    level_curve_with(w, t, branch, &LevelOptions::default())
}

pub fn level_curve_with(w: &WeightField, t: f64, branch: Branch, opts: &LevelOptions) -> Result<LevelCurve> {
    boundary_points(t)?;
    let solver = LevelSolver::new(w, opts.lattice, &[t - 1.0], false);
    solver.solve_polished(t, branch, opts.polish_sweeps)
}

/// Uniform raster over `[−1, 1]²` with cell-centred samples and an
/// open-disk mask. Row 0 is the bottom row.
#[derive(Debug, Clone, PartialEq)]
pub struct GridField {
    res: usize,
    samples: Vec<f64>,
    mask: Vec<bool>,
}

impl GridField {
    pub fn new(res: usize) -> Self {
        let mut mask = vec![false; res * res];
        let mut g = Self {
            res,
            samples: vec![0.0; res * res],
            mask: Vec::new(),
        };
        for j in 0..res {
            for i in 0..res {
                let p = g.point(i, j);
                mask[j * res + i] = p.dot(p) < 1.0;
            }
        }
        g.mask = mask;
        g
    }

    pub fn res(&self) -> usize {
        self.res
    }

    pub fn width(&self) -> usize {
        self.res
    }

    pub fn height(&self) -> usize {
        self.res
    }

    pub fn origin(&self) -> Point {
        Point::new(-1.0, -1.0)
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.res as f64
    }

    /// Centre of cell `(i, j)`, column `i`, row `j`.
    pub fn point(&self, i: usize, j: usize) -> Point {
        let h = self.spacing();
        Point::new(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h)
    }

    pub fn value(&self, i: usize, j: usize) -> f64 {
        self.samples[j * self.res + i]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.samples[j * self.res + i] = v;
    }

    pub fn in_mask(&self, i: usize, j: usize) -> bool {
        self.mask[j * self.res + i]
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    /// Cell whose centre is nearest to `p` (ties go up and right).
    pub fn cell_of(&self, p: Point) -> Option<(usize, usize)> {
        let h = self.spacing();
        let i = ((p.x + 1.0) / h).floor();
        let j = ((p.y + 1.0) / h).floor();
        let n = self.res as f64;
        (i >= 0.0 && j >= 0.0 && i < n && j < n).then_some((i as usize, j as usize))
    }

    /// Largest minus smallest masked sample in the 3×3 block around `(i, j)`.
    pub fn oscillation(&self, i: usize, j: usize) -> f64 {
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for jj in j.saturating_sub(1)..=(j + 1).min(self.res - 1) {
            for ii in i.saturating_sub(1)..=(i + 1).min(self.res - 1) {
                if self.in_mask(ii, jj) {
                    let v = self.value(ii, jj);
                    lo = lo.min(v);
                    hi = hi.max(v);
                }
            }
        }
        if hi >= lo {
            hi - lo
        } else {
            0.0
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct StackOptions {
    pub res: usize,
    pub lattice: LatticeSpec,
    pub polish_sweeps: usize,
}

impl Default for StackOptions {
    fn default() -> Self {
        Self {
            res: 512,
            lattice: LatticeSpec::default(),
            polish_sweeps: 0,
        }
    }
}

/// A nested family of level curves and the field `u(p) = sup{t : p above g_t}`.
#[derive(Debug, Clone)]
pub struct SolutionStack {
    curves: Vec<LevelCurve>,
    field: GridField,
    policy: BranchPolicy,
    level_weights: Vec<f64>,
}

impl SolutionStack {
    pub fn curves(&self) -> &[LevelCurve] {
        &self.curves
    }

    pub fn field(&self) -> &GridField {
        &self.field
    }

    pub fn policy(&self) -> BranchPolicy {
        self.policy
    }

    pub fn levels(&self) -> Vec<f64> {
        self.curves.iter().map(|c| c.level()).collect()
    }

    /// Largest gap between consecutive levels.
    pub fn level_spacing(&self) -> f64 {
        self.curves
            .windows(2)
            .map(|p| p[1].level() - p[0].level())
            .fold(0.0, f64::max)
    }

    /// Quadrature weights of the levels in `t ∈ (0, 2)`.
    pub fn level_weights(&self) -> &[f64] {
        &self.level_weights
    }

    /// `u` at a sample point, from the stored field.
    pub fn u_at(&self, p: Point) -> Option<f64> {
        self.field.cell_of(p).map(|(i, j)| self.field.value(i, j))
    }
}

fn validate_levels(levels: &[f64]) -> Result<()> {
    if levels.len() < 16 {
        return Err(Error::invalid(format!("need at least 16 levels, got {}", levels.len())));
    }
    if levels.iter().any(|&t| !(t > 0.0 && t < 2.0)) {
        return Err(Error::invalid("levels must lie in (0, 2)"));
    }
    if levels.windows(2).any(|p| p[1] <= p[0]) {
        return Err(Error::invalid("levels must be strictly increasing"));
    }
    Ok(())
}

/// Builds all level curves, checks that they are nested, and fills the field.
pub fn stack(w: &WeightField, levels: &[f64], policy: BranchPolicy, opts: &StackOptions) -> Result<SolutionStack> {
    validate_levels(levels)?;
    if opts.res < 8 {
        return Err(Error::invalid("grid resolution must be at least 8"));
    }
    let heights: Vec<f64> = levels.iter().map(|t| t - 1.0).collect();
    let solver = LevelSolver::new(w, opts.lattice, &heights, true);
    let curves: Vec<LevelCurve> = levels
        .par_iter()
        .map(|&t| solver.solve_polished(t, policy.branch_at(t), opts.polish_sweeps))
        .collect::<Result<_>>()?;
    let field = GridField::new(opts.res);
    let tol = field.spacing().max(opts.lattice.dy());
    check_nesting(&curves, &field, &solver.xs, tol)?;
    let field = fill_field(&curves, field);
    let mut bounds = vec![0.0];
    bounds.extend(levels.windows(2).map(|p| 0.5 * (p[0] + p[1])));
    bounds.push(2.0);
    let level_weights = bounds.windows(2).map(|b| b[1] - b[0]).collect();
    Ok(SolutionStack {
        curves,
        field,
        policy,
        level_weights,
    })
}

fn check_nesting(curves: &[LevelCurve], field: &GridField, lattice_xs: &[f64], tol: f64) -> Result<()> {
    let mut xs: Vec<f64> = (0..field.res()).map(|i| field.point(i, 0).x).collect();
    xs.extend_from_slice(lattice_xs);
    let worst = xs
        .par_iter()
        .map(|&x| {
            // running maximum of lower curves covering x
            let mut best: Option<(f64, usize)> = None;
            let mut worst: Option<(f64, usize, usize)> = None;
            for (k, c) in curves.iter().enumerate() {
                if x.abs() > c.half_width() {
                    continue;
                }
                let g = c.eval(x);
                if let Some((m, km)) = best {
                    let overlap = m - g;
                    if overlap > tol && worst.map_or(true, |wv| overlap > wv.0) {
                        worst = Some((overlap, km, k));
                    }
                }
                if best.map_or(true, |(m, _)| g >= m) {
                    best = Some((g, k));
                }
            }
            worst
        })
        .filter_map(|v| v)
        .max_by(|a, b| a.0.total_cmp(&b.0));
    match worst {
        Some((overlap, lo, hi)) => Err(Error::NestingViolation {
            lower: curves[lo].level(),
            upper: curves[hi].level(),
            overlap,
        }),
        None => Ok(()),
    }
}

fn fill_field(curves: &[LevelCurve], mut field: GridField) -> GridField {
    let res = field.res();
    let columns: Vec<Vec<f64>> = (0..res)
        .into_par_iter()
        .map(|i| {
            let x = field.point(i, 0).x;
            let heights: Vec<f64> = curves.iter().map(|c| c.eval(x)).collect();
            (0..res)
                .map(|j| {
                    let p = field.point(i, j);
                    if !field.in_mask(i, j) {
                        return boundary_value(p);
                    }
                    let level = |k: usize| if k == 0 { 0.0 } else { curves[k - 1].level() };
                    // A sample lying exactly on curves gets the mean of the
                    // values just above and just below them.
                    let weak = heights.partition_point(|&g| p.y >= g);
                    let strict = heights.partition_point(|&g| p.y > g);
                    0.5 * (level(weak) + level(strict))
                })
                .collect()
        })
        .collect();
    for (i, col) in columns.into_iter().enumerate() {
        for (j, v) in col.into_iter().enumerate() {
            field.set(i, j, v);
        }
    }
    field
}

/// Coarea evaluation of the total variation: weighted lengths of the level
/// curves integrated over the levels.
pub fn bv_energy(s: &SolutionStack, w: &WeightField) -> f64 {
    let costs: Vec<f64> = s.curves.par_iter().map(|c| c.cost(w)).collect();
    costs.iter().zip(&s.level_weights).map(|(c, dt)| c * dt).sum()
}

/// Undirected neighbour offsets of the 16-neighbourhood with their
/// Cauchy–Crofton weights `Δφ / (2 |e|)` (in grid units).
fn crofton_stencil() -> Vec<(isize, isize, f64)> {
    let offsets: [(isize, isize); 8] = [(1, 0), (2, 1), (1, 1), (1, 2), (0, 1), (-1, 2), (-1, 1), (-2, 1)];
    let angles: Vec<f64> = offsets.iter().map(|&(i, j)| (j as f64).atan2(i as f64)).collect();
    let n = offsets.len();
    (0..n)
        .map(|k| {
            let prev = if k == 0 { angles[n - 1] - std::f64::consts::PI } else { angles[k - 1] };
            let next = if k == n - 1 { angles[0] + std::f64::consts::PI } else { angles[k + 1] };
            let (i, j) = offsets[k];
            let len = ((i * i + j * j) as f64).sqrt();
            (i, j, 0.5 * (next - prev) / (2.0 * len))
        })
        .collect()
}

/// Weighted total variation of the sampled field, `Σ |Δu| · w · c_e · h` over
/// the edges `e` of the 16-neighbourhood with both ends in the disk, where
/// `c_e` are Cauchy–Crofton weights and `w` is the smaller endpoint weight.
pub fn discrete_tv(s: &SolutionStack, w: &WeightField) -> f64 {
    let f = &s.field;
    let n = f.res() as isize;
    let h = f.spacing();
    let stencil = crofton_stencil();
    let weights: Vec<f64> = (0..n * n)
        .map(|k| w.eval(f.point((k % n) as usize, (k / n) as usize)))
        .collect();
    let rows: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|j| {
            let mut acc = 0.0;
            for i in 0..n {
                if !f.in_mask(i as usize, j as usize) {
                    continue;
                }
                let u = f.value(i as usize, j as usize);
                let wp = weights[(j * n + i) as usize];
                for &(di, dj, c) in &stencil {
                    let (i2, j2) = (i + di, j + dj);
                    if i2 < 0 || j2 < 0 || i2 >= n || j2 >= n || !f.in_mask(i2 as usize, j2 as usize) {
                        continue;
                    }
                    let du = (f.value(i2 as usize, j2 as usize) - u).abs();
                    if du != 0.0 {
                        acc += du * wp.min(weights[(j2 * n + i2) as usize]) * c;
                    }
                }
            }
            acc * h
        })
        .collect();
    rows.iter().sum()
}

/// Largest mean deviation `|u − f(z)|` over `B(z, r) ∩ Ω` for `n_boundary`
/// equally spaced boundary points `z`, skipping those within `r` of `exclude`.
pub fn trace_error(s: &SolutionStack, n_boundary: usize, r: f64, exclude: &[Point]) -> Result<f64> {
    if n_boundary == 0 || !(r > 0.0) {
        return Err(Error::invalid("trace check needs boundary points and a positive radius"));
    }
    let f = &s.field;
    let h = f.spacing();
    let span = (r / h).ceil() as isize + 1;
    let mut worst: f64 = 0.0;
    for m in 0..n_boundary {
        let phi = std::f64::consts::TAU * m as f64 / n_boundary as f64;
        let z = Point::from_angle(phi);
        if exclude.iter().any(|e| e.dist(z) < r) {
            continue;
        }
        let fz = boundary_value(z);
        let (ci, cj) = (((z.x + 1.0) / h) as isize, ((z.y + 1.0) / h) as isize);
        let mut sum = 0.0;
        let mut count = 0usize;
        for j in cj - span..=cj + span {
            for i in ci - span..=ci + span {
                if i < 0 || j < 0 || i >= f.res() as isize || j >= f.res() as isize {
                    continue;
                }
                let (i, j) = (i as usize, j as usize);
                if f.in_mask(i, j) && f.point(i, j).dist(z) < r {
                    sum += (f.value(i, j) - fz).abs();
                    count += 1;
                }
            }
        }
        if count == 0 {
            return Err(Error::EmptyBall(r));
        }
        worst = worst.max(sum / count as f64);
    }
    Ok(worst)
}

/// Cells where the 3×3 oscillation of `u` exceeds `gap_threshold`.
pub fn jump_set(s: &SolutionStack, gap_threshold: f64) -> Result<Vec<Point>> {
    let spacing = s.level_spacing();
    if !(gap_threshold > 2.0 * spacing) {
        return Err(Error::invalid(format!(
            "gap threshold {gap_threshold} must exceed twice the level spacing {spacing}"
        )));
    }
    let f = &s.field;
    let mut out = Vec::new();
    for j in 0..f.res() {
        for i in 0..f.res() {
            if f.in_mask(i, j) && f.oscillation(i, j) > gap_threshold {
                out.push(f.point(i, j));
            }
        }
    }
    Ok(out)
}

/// 3×3 oscillation of `u` around the cell nearest `p`.
pub fn jump_at(s: &SolutionStack, p: Point) -> Option<f64> {
    s.field.cell_of(p).map(|(i, j)| s.field.oscillation(i, j))
}
