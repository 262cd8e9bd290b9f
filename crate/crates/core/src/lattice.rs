//! Column-lattice shortest paths.
//!
//! Paths that are graphs over a chord direction are searched among polylines
//! whose interior vertices sit on a lattice: columns at fixed chord abscissae,
//! rows at fixed offsets. Dynamic programming over columns finds the exact
//! optimum on the lattice; a coordinate-descent pass then moves the vertices
//! off the rows.
//!
//! Ties between equally short paths are broken by a tiny multiple of the area
//! under the path, so the upper or lower one wins deterministically.

use crate::error::{Error, Result};
use crate::geodesy::{golden_section, Branch, Polyline};
use crate::geometry::{in_closed_disk, Point};
use crate::weight::WeightField;

/// Lattice resolution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LatticeSpec {
    /// Columns per unit length along the chord.
    pub cols_per_unit: usize,
    /// Rows per unit length across the chord.
    pub rows_per_unit: usize,
    /// Largest slope of a lattice edge relative to the chord.
    pub max_slope: f64,
}

impl Default for LatticeSpec {
    fn default() -> Self {
        Self {
            cols_per_unit: 64,
            rows_per_unit: 512,
            max_slope: 2.5,
        }
    }
}

impl LatticeSpec {
    pub fn dx(&self) -> f64 {
        1.0 / self.cols_per_unit as f64
    }

    pub fn dy(&self) -> f64 {
        1.0 / self.rows_per_unit as f64
    }
}

/// Weight of the area term that breaks ties between equal-cost paths.
const AREA_BIAS: f64 = 1e-10;

/// Costs of the lattice edges from rows `a0..=b0` of column `gap` to row `r1`
/// of column `gap + 1`, written to `out`. `point(col, row)` gives the world
/// position of a lattice node.
pub(crate) trait GapCost: Sync {
    fn fill(
        &self,
        gap: usize,
        r1: usize,
        a0: usize,
        b0: usize,
        point: &dyn Fn(usize, usize) -> Point,
        out: &mut Vec<f64>,
    );
}

/// Costs evaluated on demand.
pub(crate) struct DirectCost<'a>(pub &'a WeightField);

impl GapCost for DirectCost<'_> {
    fn fill(
        &self,
        gap: usize,
        r1: usize,
        a0: usize,
        b0: usize,
        point: &dyn Fn(usize, usize) -> Point,
        out: &mut Vec<f64>,
    ) {
        let q = point(gap + 1, r1);
        out.clear();
        out.extend((a0..=b0).map(|r0| self.0.segment_cost(point(gap, r0), q)));
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) enum Terminal {
    /// Path ends at the point with frame coordinates `(s, v)`.
    Point(f64, f64),
    /// The last column is a mirror axis: the path continues as its reflection.
    Mirror,
}

/// One shortest-path query on a lattice, in a frame `origin + s·u + v·n`.
pub(crate) struct Problem<'a> {
    pub origin: Point,
    pub u: Point,
    pub cols: &'a [f64],
    pub rows: &'a [f64],
    /// Inclusive row range of each column inside the domain (`lo > hi` if empty).
    pub col_rows: &'a [(usize, usize)],
    /// Inclusive row window reachable from each row across one interior gap.
    pub windows: &'a [(usize, usize)],
    pub start: (f64, f64),
    pub end: Terminal,
    pub max_slope: f64,
    pub row_slack: f64,
    pub branch: Branch,
}

#[derive(Debug, Clone)]
pub(crate) struct LatticePath {
    /// Frame coordinates of all vertices, endpoints included (mirrored half
    /// appended for [`Terminal::Mirror`]).
    pub points: Vec<(f64, f64)>,
    pub slope_hit: bool,
}

impl Problem<'_> {
    pub fn world(&self, s: f64, v: f64) -> Point {
        let n = self.u.perp();
        Point::new(
            self.origin.x + s * self.u.x + v * n.x,
            self.origin.y + s * self.u.y + v * n.y,
        )
    }

    fn bias(&self, v0: f64, v1: f64, ds: f64) -> f64 {
        -self.branch.sign() * AREA_BIAS * 0.5 * (v0 + v1) * ds
    }

    /// Rows of column `c` within reach of the frame point `(s, v)`; the flag
    /// tells which window ends are set by the slope limit rather than the domain.
    fn endpoint_window(&self, c: usize, s: f64, v: f64) -> Option<(usize, usize, bool, bool)> {
        let (lo, hi) = self.col_rows[c];
        if lo > hi {
            return None;
        }
        let reach = self.max_slope * (self.cols[c] - s).abs() + self.row_slack;
        let a = self.rows.partition_point(|&y| y < v - reach);
        let b = self.rows.partition_point(|&y| y <= v + reach);
        if b == 0 {
            return None;
        }
        let (wa, wb) = (a.max(lo), (b - 1).min(hi));
        (wa <= wb).then_some((wa, wb, a > lo, b - 1 < hi))
    }

    /// Rows scanned in tie-break order: preferred side first.
    fn ordered(&self, lo: usize, hi: usize) -> Box<dyn Iterator<Item = usize>> {
        match self.branch {
            Branch::Minimal => Box::new((lo..=hi).rev()),
            Branch::Maximal => Box::new(lo..=hi),
        }
    }

    pub fn solve<C: GapCost>(&self, costs: &C, w: &WeightField) -> Result<LatticePath> {
        let (sa, va) = self.start;
        let a = self.world(sa, va);
        if self.cols.is_empty() {
            let Terminal::Point(sb, vb) = self.end else {
                return Err(Error::invalid("mirror terminal needs a column"));
            };
            return Ok(LatticePath {
                points: vec![(sa, va), (sb, vb)],
                slope_hit: false,
            });
        }
        let nc = self.cols.len();
        let nr = self.rows.len();
        let inf = f64::INFINITY;
        let mut dist = vec![inf; nr];
        let mut pred: Vec<Vec<u32>> = Vec::with_capacity(nc);
        let (wlo, whi, _, _) = self
            .endpoint_window(0, sa, va)
            .ok_or(Error::Disconnected)?;
        let s0 = self.cols[0];
        for r in wlo..=whi {
            let p = self.world(s0, self.rows[r]);
            dist[r] = w.segment_cost(a, p) + self.bias(va, self.rows[r], s0 - sa);
        }
        pred.push(Vec::new());
        let mut next = vec![inf; nr];
        let mut buf = Vec::new();
        let point = |c: usize, r: usize| self.world(self.cols[c], self.rows[r]);
        let prefer_upper = self.branch == Branch::Minimal;
        for g in 0..nc - 1 {
            let ds = self.cols[g + 1] - self.cols[g];
            let half_bias = -self.branch.sign() * AREA_BIAS * 0.5 * ds;
            let (lo0, hi0) = self.col_rows[g];
            let (lo1, hi1) = self.col_rows[g + 1];
            let mut back = vec![u32::MAX; nr];
            next.iter_mut().for_each(|d| *d = inf);
            if lo1 <= hi1 {
                for r1 in lo1..=hi1 {
                    let (wl, wh) = self.windows[r1];
                    let (a0, b0) = (wl.max(lo0), wh.min(hi0));
                    if a0 > b0 {
                        continue;
                    }
                    costs.fill(g, r1, a0, b0, &point, &mut buf);
                    let mut best = inf;
                    let mut arg = u32::MAX;
                    for (k, r0) in (a0..=b0).enumerate() {
                        let c = dist[r0] + buf[k] + half_bias * self.rows[r0];
                        if c < best || (prefer_upper && c == best && c < inf) {
                            best = c;
                            arg = r0 as u32;
                        }
                    }
                    next[r1] = best + half_bias * self.rows[r1];
                    back[r1] = arg;
                }
            }
            std::mem::swap(&mut dist, &mut next);
            pred.push(back);
        }

        let last = nc - 1;
        let (llo, lhi) = self.col_rows[last];
        let mut best = inf;
        let mut arg = usize::MAX;
        let mut end_edge_hit = false;
        match self.end {
            Terminal::Point(sb, vb) => {
                let b = self.world(sb, vb);
                let (elo, ehi, cut_lo, cut_hi) = self
                    .endpoint_window(last, sb, vb)
                    .ok_or(Error::Disconnected)?;
                let sl = self.cols[last];
                for r in self.ordered(elo, ehi) {
                    if dist[r] == inf {
                        continue;
                    }
                    let p = self.world(sl, self.rows[r]);
                    let c = dist[r] + w.segment_cost(p, b) + self.bias(self.rows[r], vb, sb - sl);
                    if c < best {
                        best = c;
                        arg = r;
                        end_edge_hit = (cut_lo && r == elo) || (cut_hi && r == ehi);
                    }
                }
            }
            Terminal::Mirror => {
                if llo <= lhi {
                    for r in self.ordered(llo, lhi) {
                        if dist[r] < best {
                            best = dist[r];
                            arg = r;
                        }
                    }
                }
            }
        }
        if arg == usize::MAX || best == inf {
            return Err(Error::Disconnected);
        }

        let mut rows_rev = vec![arg];
        let mut r = arg;
        for g in (1..nc).rev() {
            r = pred[g][r] as usize;
            rows_rev.push(r);
        }
        rows_rev.reverse();
        let mut slope_hit = end_edge_hit;
        if let Some((elo, ehi, cut_lo, cut_hi)) = self.endpoint_window(0, sa, va) {
            slope_hit |= (cut_lo && rows_rev[0] == elo) || (cut_hi && rows_rev[0] == ehi);
        }
        for pair in rows_rev.windows(2) {
            let (wl, wh) = self.windows[pair[1]];
            if (pair[0] == wl && wl > 0) || (pair[0] == wh && wh + 1 < self.rows.len()) {
                slope_hit = true;
            }
        }

        let mut points = vec![(sa, va)];
        points.extend(rows_rev.iter().map(|&r| (0.0, self.rows[r])));
        for (k, &c) in self.cols.iter().enumerate() {
            points[k + 1].0 = c;
        }
        match self.end {
            Terminal::Point(sb, vb) => points.push((sb, vb)),
            Terminal::Mirror => {
                let axis = self.cols[last];
                let n = points.len();
                for k in (0..n - 1).rev() {
                    let (s, v) = points[k];
                    points.push((2.0 * axis - s, v));
                }
            }
        }
        Ok(LatticePath { points, slope_hit })
    }
}

/// For each row, the inclusive window of rows within `reach`.
pub(crate) fn row_windows(rows: &[f64], reach: f64) -> Vec<(usize, usize)> {
    rows.iter()
        .map(|&y| {
            let a = rows.partition_point(|&z| z < y - reach - 1e-12);
            let b = rows.partition_point(|&z| z <= y + reach + 1e-12);
            (a, b - 1)
        })
        .collect()
}

/// Inclusive range of rows whose points `origin + s u + v n` lie in the closed disk.
pub(crate) fn disk_rows(origin: Point, u: Point, s: f64, rows: &[f64]) -> (usize, usize) {
    let n = u.perp();
    let c = Point::new(origin.x + s * u.x, origin.y + s * u.y);
    // |c + v n|² ≤ 1  ⇔  v² + 2 v (c·n) + |c|² − 1 ≤ 0
    let b = c.dot(n);
    let disc = b * b - (c.dot(c) - 1.0);
    if disc < 0.0 {
        return (1, 0);
    }
    let sq = disc.sqrt();
    let (vmin, vmax) = (-b - sq, -b + sq);
    let mut lo = rows.partition_point(|&v| v < vmin - 1e-9);
    let mut hi = rows.partition_point(|&v| v <= vmax + 1e-9);
    while lo < hi && !in_closed_disk(c + n * rows[lo]) {
        lo += 1;
    }
    while hi > lo && !in_closed_disk(c + n * rows[hi - 1]) {
        hi -= 1;
    }
    if hi == 0 || lo >= hi {
        (1, 0)
    } else {
        (lo, hi - 1)
    }
}

/// Options for single shortest-path queries.
#[derive(Debug, Clone, Copy)]
pub struct GeodesicOptions {
    pub lattice: LatticeSpec,
    pub branch: Branch,
    /// Coordinate-descent sweeps after the lattice search (0 disables).
    pub polish_sweeps: usize,
}

impl Default for GeodesicOptions {
    fn default() -> Self {
        Self {
            lattice: LatticeSpec::default(),
            branch: Branch::Minimal,
            polish_sweeps: 400,
        }
    }
}

/// Shortest path inside the closed unit disk between two of its points,
/// assuming it is a graph over the chord `a`–`b`.
pub fn disk_geodesic(w: &WeightField, a: Point, b: Point, opts: &GeodesicOptions) -> Result<Polyline> {
    if !in_closed_disk(a) || !in_closed_disk(b) {
        return Err(Error::OutsideMask(if in_closed_disk(a) { b } else { a }));
    }
    if a == b {
        return Err(Error::invalid("geodesic endpoints coincide"));
    }
    let len = a.dist(b);
    let u = (b - a).normalized();
    let spec = opts.lattice;
    let n_gaps = (len * spec.cols_per_unit as f64).ceil().max(1.0) as usize;
    let ds = len / n_gaps as f64;
    let cols: Vec<f64> = (1..n_gaps).map(|i| i as f64 * ds).collect();
    let dy = spec.dy();
    let jmax = (2.0 / dy).ceil() as i64;
    let rows: Vec<f64> = (-jmax..=jmax).map(|j| j as f64 * dy).collect();
    let col_rows: Vec<(usize, usize)> = cols.iter().map(|&s| disk_rows(a, u, s, &rows)).collect();
    let windows = row_windows(&rows, spec.max_slope * ds);
    let problem = Problem {
        origin: a,
        u,
        cols: &cols,
        rows: &rows,
        col_rows: &col_rows,
        windows: &windows,
        start: (0.0, 0.0),
        end: Terminal::Point(len, 0.0),
        max_slope: spec.max_slope,
        row_slack: dy,
        branch: opts.branch,
    };
    let path = problem.solve(&DirectCost(w), w)?;
    if path.slope_hit {
        return Err(Error::NonGraph {
            level: f64::NAN,
            detail: format!("path from {a} to {b} reaches the lattice slope limit"),
        });
    }
    let mut pts: Vec<Point> = path.points.iter().map(|&(s, v)| problem.world(s, v)).collect();
    if opts.polish_sweeps > 0 {
        polish(w, &mut pts, u.perp(), false, opts.polish_sweeps, 2.0 * dy);
    }
    *pts.first_mut().unwrap() = a;
    *pts.last_mut().unwrap() = b;
    Polyline::new(pts)
}

/// Coordinate descent on the interior vertices of a path, each moving along
/// `dir` only, staying in the closed disk. With `symmetric`, the path is
/// assumed mirror-symmetric about the vertical through its middle and moves
/// are mirrored. Returns the number of sweeps done.
pub fn polish(
    w: &WeightField,
    pts: &mut [Point],
    dir: Point,
    symmetric: bool,
    max_sweeps: usize,
    initial_step: f64,
) -> usize {
    let n = pts.len();
    if n < 3 {
        return 0;
    }
    let upper = if symmetric { n / 2 + 1 } else { n - 1 };
    let upper = upper.min(n - 1);
    let mut step = initial_step;
    for sweep in 0..max_sweeps {
        let mut max_move: f64 = 0.0;
        for i in 1..upper {
            let (prev, cur, nxt) = (pts[i - 1], pts[i], pts[i + 1]);
            let mirror_partner = symmetric && n - 1 - i != i;
            let local = |t: f64| {
                let p = cur + dir * t;
                if !in_closed_disk(p) {
                    return f64::INFINITY;
                }
                w.segment_cost(prev, p) + w.segment_cost(p, nxt)
            };
            let f0 = local(0.0);
            let (t, ft) = golden_section(local, -step, step, step * 1e-9);
            if ft < f0 - 1e-15 * f0 && t != 0.0 {
                let moved = cur + dir * t;
                pts[i] = moved;
                if mirror_partner {
                    pts[n - 1 - i] = moved.mirror_x();
                }
                max_move = max_move.max(t.abs());
            }
        }
        if max_move < 1e-13 {
            return sweep + 1;
        }
        step = (4.0 * max_move).clamp(1e-11, initial_step);
    }
    max_sweeps
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_and_disk_rows() {
        let rows: Vec<f64> = (-4..=4).map(|j| j as f64 * 0.25).collect();
        let win = row_windows(&rows, 0.3);
        assert_eq!(win[4], (3, 5));
        assert_eq!(win[0], (0, 1));
        let (lo, hi) = disk_rows(Point::new(0.0, 0.0), Point::new(1.0, 0.0), 0.0, &rows);
        assert_eq!((rows[lo], rows[hi]), (-1.0, 1.0));
        let (lo, hi) = disk_rows(Point::ORIGIN, Point::new(1.0, 0.0), 0.9, &rows);
        assert_eq!((rows[lo], rows[hi]), (-0.25, 0.25));
    }

    #[test]
    fn constant_weight_geodesic_is_the_chord() {
        let w = WeightField::constant(1.0).unwrap();
        let a = Point::new(-0.8, -0.6);
        let b = Point::new(0.6, 0.8);
        let path = disk_geodesic(&w, a, b, &GeodesicOptions::default()).unwrap();
        for p in path.vertices() {
            assert!(crate::geometry::point_segment_distance(*p, a, b) < 1e-12);
        }
        assert!((path.cost(&w) - a.dist(b)).abs() < 1e-12);
    }

    #[test]
    fn heavy_diamond_tie_follows_branch() {
        let w = WeightField::heavy_diamond(2.0).unwrap();
        let a = Point::new(-1.0, 0.0);
        let b = Point::new(1.0, 0.0);
        for (branch, tip) in [(Branch::Minimal, 0.5), (Branch::Maximal, -0.5)] {
            let opts = GeodesicOptions {
                branch,
                ..Default::default()
            };
            let path = disk_geodesic(&w, a, b, &opts).unwrap();
            assert!(path.distance_to(Point::new(0.0, tip)) < 1e-9);
            assert!((path.cost(&w) - 5f64.sqrt()).abs() < 1e-9);
        }
    }
}
