//! Discrete weighted perimeters of rasterized sets.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::geometry::Point;
use crate::weight::WeightField;

/// Cell-centred raster on `[−1, 1]²` with precomputed edge weights.
pub struct Raster {
    res: usize,
    /// Mean weight across the edge between cells `(i, j)` and `(i+1, j)`.
    horiz: Vec<f64>,
    /// Same for `(i, j)` and `(i, j+1)`.
    vert: Vec<f64>,
}

impl Raster {
    pub fn new(w: &WeightField, res: usize) -> Result<Self> {
        if res < 2 {
            return Err(Error::invalid("raster resolution must be at least 2"));
        }
        let cells: Vec<f64> = (0..res * res).map(|k| w.eval(Self::center(res, k % res, k / res))).collect();
        let mut horiz = vec![0.0; res * res];
        let mut vert = vec![0.0; res * res];
        for j in 0..res {
            for i in 0..res {
                let k = j * res + i;
                if i + 1 < res {
                    horiz[k] = 0.5 * (cells[k] + cells[k + 1]);
                }
                if j + 1 < res {
                    vert[k] = 0.5 * (cells[k] + cells[k + res]);
                }
            }
        }
        Ok(Self { res, horiz, vert })
    }

    fn center(res: usize, i: usize, j: usize) -> Point {
        let h = 2.0 / res as f64;
        Point::new(-1.0 + (i as f64 + 0.5) * h, -1.0 + (j as f64 + 0.5) * h)
    }

    pub fn res(&self) -> usize {
        self.res
    }

    pub fn spacing(&self) -> f64 {
        2.0 / self.res as f64
    }

    pub fn rasterize(&self, set: impl Fn(Point) -> bool) -> Vec<bool> {
        let n = self.res;
        (0..n * n).map(|k| set(Self::center(n, k % n, k / n))).collect()
    }

    /// Sum over edges separating the set from its complement of mean weight times spacing.
    pub fn perimeter(&self, set: &[bool]) -> f64 {
        let n = self.res;
        let mut total = 0.0;
        for j in 0..n {
            for i in 0..n {
                let k = j * n + i;
                if i + 1 < n && set[k] != set[k + 1] {
                    total += self.horiz[k];
                }
                if j + 1 < n && set[k] != set[k + n] {
                    total += self.vert[k];
                }
            }
        }
        total * self.spacing()
    }

    /// `P(E₁∩E₂) + P(E₁∪E₂) − P(E₁) − P(E₂)`; never positive for a cut functional.
    pub fn submodularity_defect(&self, a: &[bool], b: &[bool]) -> f64 {
        let inter: Vec<bool> = a.iter().zip(b).map(|(x, y)| *x && *y).collect();
        let union: Vec<bool> = a.iter().zip(b).map(|(x, y)| *x || *y).collect();
        self.perimeter(&inter) + self.perimeter(&union) - self.perimeter(a) - self.perimeter(b)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Ball {
    L1 { c: Point, r: f64 },
    L2 { c: Point, r: f64 },
}

impl Ball {
    fn contains(&self, p: Point) -> bool {
        match *self {
            Ball::L1 { c, r } => (p - c).l1_norm() <= r,
            Ball::L2 { c, r } => p.dist(c) <= r,
        }
    }
}

fn random_union(rng: &mut ChaCha8Rng) -> Vec<Ball> {
    let count = rng.gen_range(1..=4);
    (0..count)
        .map(|_| {
            let c = Point::new(rng.gen_range(-0.8..0.8), rng.gen_range(-0.8..0.8));
            let r = rng.gen_range(0.05..0.6);
            if rng.gen_bool(0.5) {
                Ball::L1 { c, r }
            } else {
                Ball::L2 { c, r }
            }
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubmodularityOutcome {
    pub trials: usize,
    pub passed: usize,
    /// Largest `P(E₁∩E₂) + P(E₁∪E₂) − P(E₁) − P(E₂)` seen.
    pub max_defect: f64,
}

/// Random pairs of unions of ℓ¹/ℓ² balls, checked for
/// `P(E₁∩E₂) + P(E₁∪E₂) ≤ P(E₁) + P(E₂)` up to rounding.
pub fn submodularity_check(w: &WeightField, res: usize, trials: usize, seed: u64) -> Result<SubmodularityOutcome> {
    if res < 64 {
        return Err(Error::invalid(format!("resolution {res} is below 64")));
    }
    if trials == 0 {
        return Err(Error::invalid("need at least one trial"));
    }
    let raster = Raster::new(w, res)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut passed = 0;
    let mut max_defect = f64::NEG_INFINITY;
    for _ in 0..trials {
        let ba = random_union(&mut rng);
        let bb = random_union(&mut rng);
        let a = raster.rasterize(|p| ba.iter().any(|b| b.contains(p)));
        let b = raster.rasterize(|p| bb.iter().any(|x| x.contains(p)));
        let scale = raster.perimeter(&a) + raster.perimeter(&b);
        let defect = raster.submodularity_defect(&a, &b);
        max_defect = max_defect.max(defect);
        if defect <= 1e-12 * (1.0 + scale) {
            passed += 1;
        }
    }
    Ok(SubmodularityOutcome {
        trials,
        passed,
        max_defect,
    })
}

/// 16×16 set stored as four words of four 16-bit rows.
#[derive(Clone, Copy)]
struct Bits16([u64; 4]);

const LANE_LOW15: u64 = 0x7FFF_7FFF_7FFF_7FFF;
const LOW48: u64 = 0x0000_FFFF_FFFF_FFFF;

impl Bits16 {
    fn rect(x0: usize, x1: usize, y0: usize, y1: usize) -> Self {
        let row = (((1u32 << (x1 - x0 + 1)) - 1) << x0) as u64;
        let mut words = [0u64; 4];
        for y in y0..=y1 {
            words[y / 4] |= row << (16 * (y % 4));
        }
        Bits16(words)
    }

    /// Number of unit edges between the set and its complement inside the square.
    fn cut(&self) -> u32 {
        let w = &self.0;
        let mut n = 0;
        for k in 0..4 {
            n += ((w[k] ^ (w[k] >> 1)) & LANE_LOW15).count_ones();
            n += ((w[k] ^ (w[k] >> 16)) & LOW48).count_ones();
            if k < 3 {
                n += ((w[k] >> 48) ^ (w[k + 1] & 0xFFFF)).count_ones();
            }
        }
        n
    }

    fn and(&self, o: &Self) -> Self {
        Bits16([0, 1, 2, 3].map(|k| self.0[k] & o.0[k]))
    }

    fn or(&self, o: &Self) -> Self {
        Bits16([0, 1, 2, 3].map(|k| self.0[k] | o.0[k]))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RectangleOutcome {
    pub pairs: u64,
    pub passed: u64,
}

/// Every unordered pair of axis-aligned rectangles of a 16×16 grid, with the
/// constant-weight (edge count) perimeter.
pub fn rectangle_pairs_check() -> RectangleOutcome {
    let mut rects = Vec::new();
    for x0 in 0..16 {
        for x1 in x0..16 {
            for y0 in 0..16 {
                for y1 in y0..16 {
                    let b = Bits16::rect(x0, x1, y0, y1);
                    rects.push((b, b.cut()));
                }
            }
        }
    }
    let mut pairs = 0u64;
    let mut passed = 0u64;
    for (i, (a, pa)) in rects.iter().enumerate() {
        for (b, pb) in &rects[i..] {
            let lhs = a.and(b).cut() + a.or(b).cut();
            pairs += 1;
            if lhs <= pa + pb {
                passed += 1;
            }
        }
    }
    RectangleOutcome { pairs, passed }
}
