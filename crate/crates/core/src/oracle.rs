//! Brute-force weighted shortest paths by Dijkstra on a square grid graph.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::geodesy::Polyline;
use crate::geometry::{in_closed_disk, Point};
use crate::weight::WeightField;

const OFFSETS_8: [(i32, i32); 8] = [(1, 0), (1, 1), (0, 1), (-1, 1), (-1, 0), (-1, -1), (0, -1), (1, -1)];

const OFFSETS_16: [(i32, i32); 16] = [
    (1, 0),
    (2, 1),
    (1, 1),
    (1, 2),
    (0, 1),
    (-1, 2),
    (-1, 1),
    (-2, 1),
    (-1, 0),
    (-2, -1),
    (-1, -1),
    (-1, -2),
    (0, -1),
    (1, -2),
    (1, -1),
    (2, -1),
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Stencil {
    Eight,
    #[default]
    Sixteen,
}

impl Stencil {
    pub fn offsets(self) -> &'static [(i32, i32)] {
        match self {
            Stencil::Eight => &OFFSETS_8,
            Stencil::Sixteen => &OFFSETS_16,
        }
    }
}

impl fmt::Display for Stencil {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Stencil::Eight => "8",
            Stencil::Sixteen => "16",
        })
    }
}

impl FromStr for Stencil {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "8" => Ok(Stencil::Eight),
            "16" => Ok(Stencil::Sixteen),
            _ => Err(Error::invalid(format!("unknown stencil '{s}' (expected 8 or 16)"))),
        }
    }
}

/// How the cost of a grid edge is computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EdgeRule {
    /// Exact weighted length of the segment, splitting at interfaces.
    #[default]
    Exact,
    /// Length times the mean of the endpoint weights.
    Trapezoid,
}

/// Grid graph on the nodes `(i, j) / res` of the closed unit disk,
/// optionally cut down further by a mask.
pub struct GridGraph<'m> {
    res: usize,
    stencil: Stencil,
    rule: EdgeRule,
    mask: Option<&'m (dyn Fn(Point) -> bool + Sync)>,
}

#[derive(Debug, Clone)]
pub struct GridPath {
    pub path: Polyline,
    pub cost: f64,
    /// Grid nodes actually used as endpoints.
    pub from: Point,
    pub to: Point,
}

#[derive(Clone, Copy, PartialEq)]
struct Entry {
    cost: f64,
    node: usize,
}

impl Eq for Entry {}

impl Ord for Entry {
    fn cmp(&self, other: &Self) -> Ordering {
        other.cost.total_cmp(&self.cost).then_with(|| other.node.cmp(&self.node))
    }
}

impl PartialOrd for Entry {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<'m> GridGraph<'m> {
    pub fn new(res: usize, stencil: Stencil) -> Result<Self> {
        if res < 32 {
            return Err(Error::invalid(format!("grid resolution {res} is below 32")));
        }
        Ok(Self {
            res,
            stencil,
            rule: EdgeRule::Exact,
            mask: None,
        })
    }

    pub fn with_rule(mut self, rule: EdgeRule) -> Self {
        self.rule = rule;
        self
    }

    /// Keep only nodes for which `mask` holds (in addition to the disk).
    pub fn with_mask(mut self, mask: &'m (dyn Fn(Point) -> bool + Sync)) -> Self {
        self.mask = Some(mask);
        self
    }

    pub fn res(&self) -> usize {
        self.res
    }

    pub fn stencil(&self) -> Stencil {
        self.stencil
    }

    fn side(&self) -> usize {
        2 * self.res + 1
    }

    fn node_point(&self, node: usize) -> Point {
        let n = self.side();
        let r = self.res as f64;
        Point::new(
            (node % n) as f64 / r - 1.0,
            (node / n) as f64 / r - 1.0,
        )
    }

    fn contains(&self, p: Point) -> bool {
        in_closed_disk(p) && self.mask.map_or(true, |m| m(p))
    }

    /// Nearest node inside the mask, ties broken by node index.
    fn nearest_node(&self, p: Point) -> Result<usize> {
        if !p.is_finite() || !in_closed_disk(p) {
            return Err(Error::OutsideMask(p));
        }
        let n = self.side() as i64;
        let r = self.res as f64;
        let ci = ((p.x + 1.0) * r).round() as i64;
        let cj = ((p.y + 1.0) * r).round() as i64;
        let mut best: Option<(f64, usize)> = None;
        for rad in 0..4i64 {
            for j in cj - rad..=cj + rad {
                for i in ci - rad..=ci + rad {
                    if i < 0 || j < 0 || i >= n || j >= n {
                        continue;
                    }
                    let node = (j * n + i) as usize;
                    let q = self.node_point(node);
                    if !self.contains(q) {
                        continue;
                    }
                    let d = q.dist(p);
                    if best.map_or(true, |(bd, bn)| d < bd || (d == bd && node < bn)) {
                        best = Some((d, node));
                    }
                }
            }
            if best.is_some() {
                break;
            }
        }
        best.map(|(_, node)| node).ok_or(Error::OutsideMask(p))
    }

    fn edge_cost(&self, w: &WeightField, p: Point, q: Point) -> f64 {
        match self.rule {
            EdgeRule::Exact => w.segment_cost(p, q),
            EdgeRule::Trapezoid => p.dist(q) * 0.5 * (w.eval(p) + w.eval(q)),
        }
    }

    /// Minimum-cost grid path between the nodes nearest `a` and `b`.
    pub fn shortest_path(&self, w: &WeightField, a: Point, b: Point) -> Result<GridPath> {
        let src = self.nearest_node(a)?;
        let dst = self.nearest_node(b)?;
        let n = self.side();
        let total = n * n;
        let inside: Vec<bool> = (0..total).map(|k| self.contains(self.node_point(k))).collect();
        let mut dist = vec![f64::INFINITY; total];
        let mut pred = vec![usize::MAX; total];
        let mut done = vec![false; total];
        let mut heap = BinaryHeap::new();
        dist[src] = 0.0;
        heap.push(Entry { cost: 0.0, node: src });
        let offsets = self.stencil.offsets();
        while let Some(Entry { cost, node }) = heap.pop() {
            if done[node] {
                continue;
            }
            done[node] = true;
            if node == dst {
                break;
            }
            let (i, j) = ((node % n) as i64, (node / n) as i64);
            let p = self.node_point(node);
            for &(di, dj) in offsets {
                let (ni, nj) = (i + di as i64, j + dj as i64);
                if ni < 0 || nj < 0 || ni >= n as i64 || nj >= n as i64 {
                    continue;
                }
                let m = (nj as usize) * n + ni as usize;
                if !inside[m] || done[m] {
                    continue;
                }
                let c = cost + self.edge_cost(w, p, self.node_point(m));
                if c < dist[m] || (c == dist[m] && node < pred[m]) {
                    dist[m] = c;
                    pred[m] = node;
                    heap.push(Entry { cost: c, node: m });
                }
            }
        }
        if !dist[dst].is_finite() {
            return Err(Error::Disconnected);
        }
        let mut nodes = vec![dst];
        let mut cur = dst;
        while cur != src {
            cur = pred[cur];
            nodes.push(cur);
        }
        nodes.reverse();
        let (from, to) = (self.node_point(src), self.node_point(dst));
        let verts: Vec<Point> = nodes.iter().map(|&k| self.node_point(k)).collect();
        let path = Polyline::new(verts)?;
        Ok(GridPath {
            path,
            cost: dist[dst],
            from,
            to,
        })
    }
}

/// Grid shortest path with the default (exact) edge rule.
pub fn grid_shortest_path(w: &WeightField, res: usize, stencil: Stencil, a: Point, b: Point) -> Result<GridPath> {
    GridGraph::new(res, stencil)?.shortest_path(w, a, b)
}

pub const REFINE_START: usize = 128;
pub const REFINE_MAX: usize = 2048;

#[derive(Debug, Clone)]
pub struct Refinement {
    pub cost: f64,
    pub res: usize,
    /// Relative change between the last two resolutions.
    pub achieved_tol: f64,
    pub converged: bool,
    /// `(res, cost)` for every resolution tried.
    pub history: Vec<(usize, f64)>,
}

/// Double the resolution from 128 until two successive costs agree to
/// `rel_tol` or the resolution would exceed 2048.
pub fn refine_until(w: &WeightField, a: Point, b: Point, rel_tol: f64) -> Result<Refinement> {
    refine_until_with(w, a, b, rel_tol, Stencil::Sixteen, REFINE_MAX)
}

pub fn refine_until_with(
    w: &WeightField,
    a: Point,
    b: Point,
    rel_tol: f64,
    stencil: Stencil,
    max_res: usize,
) -> Result<Refinement> {
    if !(rel_tol >= 0.002) {
        return Err(Error::invalid(format!("rel_tol {rel_tol} is below 0.002")));
    }
    let mut history: Vec<(usize, f64)> = Vec::new();
    let mut res = REFINE_START;
    let mut achieved = f64::INFINITY;
    while res <= max_res {
        let cost = grid_shortest_path(w, res, stencil, a, b)?.cost;
        if let Some(&(_, prev)) = history.last() {
            achieved = ((prev - cost) / cost.max(f64::MIN_POSITIVE)).abs();
        }
        history.push((res, cost));
        if achieved < rel_tol {
            return Ok(Refinement {
                cost,
                res,
                achieved_tol: achieved,
                converged: true,
                history,
            });
        }
        res *= 2;
    }
    let &(res, cost) = history.last().expect("at least one resolution");
    Ok(Refinement {
        cost,
        res,
        achieved_tol: achieved,
        converged: false,
        history,
    })
}
