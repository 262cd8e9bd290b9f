//! Positive weights on the plane: the example catalog, layered media,
//! discretized ℓ¹ shells and user-defined piecewise weights.
//!
//! Every weight here is piecewise affine in an ℓ¹ distance (or constant on
//! ℓ²-balls and half-planes). Each [`WeightField`] carries the list of curves
//! across which its formula changes, so a segment can be split into pieces on
//! which the weight is affine and integrated exactly by the midpoint rule.
//!
//! On a discontinuity interface the value is the smaller of the two
//! one-sided limits (lower semicontinuous representative).

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;

use crate::error::{Error, Result};
use crate::geometry::Point;

/// Threshold on α above which the heavy-diamond geodesic through (−1,0),(1,0)
/// runs through a diamond tip instead of crossing the diamond.
pub const HEAVY_DIAMOND_TIP_THRESHOLD: f64 = 1.341_640_786_499_873_8; // 3/√5

/// α used for the case-(b) heavy diamond figure.
pub const HEAVY_DIAMOND_FIGURE_B_ALPHA: f64 = 1.224_744_871_391_589; // √(3/2)

pub const HEAVY_DISK_DEFAULT_ALPHA: f64 = 2.0;
pub const LIGHT_DIAMOND_DEFAULT_ALPHA: f64 = 0.5;
pub const THREE_DIAMONDS_DEFAULT_ALPHA: f64 = std::f64::consts::SQRT_2;

/// Default number of ℓ¹ shells used to trace rays through continuous weights.
pub const DEFAULT_SHELLS: usize = 4096;

/// A horizontal layer `−depth < y ≤ −(previous depth)` of constant weight.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Layer {
    pub depth: f64,
    pub weight: f64,
}

/// Region predicates allowed in custom piecewise weights.
#[derive(Debug, Clone, PartialEq)]
pub enum Shape {
    L1Ball { center: Point, radius: f64 },
    L2Ball { center: Point, radius: f64 },
    /// `normal · p ≤ offset`
    HalfPlane { normal: Point, offset: f64 },
    Union(Vec<Shape>),
    Intersection(Vec<Shape>),
    Complement(Box<Shape>),
}

impl Shape {
    /// Membership test; `closed` selects the closure instead of the interior.
    pub fn contains(&self, p: Point, closed: bool) -> bool {
        match self {
            Shape::L1Ball { center, radius } => {
                let r = (p - *center).l1_norm();
                if closed {
                    r <= *radius
                } else {
                    r < *radius
                }
            }
            Shape::L2Ball { center, radius } => {
                let d = p - *center;
                let r2 = d.dot(d);
                if closed {
                    r2 <= radius * radius
                } else {
                    r2 < radius * radius
                }
            }
            Shape::HalfPlane { normal, offset } => {
                let v = normal.dot(p);
                if closed {
                    v <= *offset
                } else {
                    v < *offset
                }
            }
            Shape::Union(parts) => parts.iter().any(|s| s.contains(p, closed)),
            Shape::Intersection(parts) => parts.iter().all(|s| s.contains(p, closed)),
            Shape::Complement(inner) => !inner.contains(p, !closed),
        }
    }

    fn collect_breaks(&self, out: &mut Vec<Break>) {
        match self {
            Shape::L1Ball { center, radius } => out.push(Break::L1 {
                center: *center,
                radii: vec![*radius],
            }),
            Shape::L2Ball { center, radius } => out.push(Break::Circle {
                center: *center,
                radius: *radius,
            }),
            Shape::HalfPlane { normal, offset } => {
                let n = normal.norm();
                out.push(Break::Line {
                    normal: *normal * (1.0 / n),
                    offset: offset / n,
                })
            }
            Shape::Union(parts) | Shape::Intersection(parts) => {
                parts.iter().for_each(|s| s.collect_breaks(out))
            }
            Shape::Complement(inner) => inner.collect_breaks(out),
        }
    }
}

/// `base + slope · |p − center|₁`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct L1Affine {
    pub center: Point,
    pub base: f64,
    pub slope: f64,
}

impl L1Affine {
    pub fn constant(value: f64) -> Self {
        Self {
            center: Point::ORIGIN,
            base: value,
            slope: 0.0,
        }
    }

    pub fn eval(&self, p: Point) -> f64 {
        self.base + self.slope * (p - self.center).l1_norm()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Piece {
    pub region: Shape,
    pub weight: L1Affine,
}

#[derive(Debug, Clone, PartialEq)]
pub enum WeightKind {
    Constant(f64),
    HeavyDiamond { alpha: f64 },
    HeavyDisk { alpha: f64 },
    LightDiamond { alpha: f64 },
    LightDiamondTight { alpha: f64 },
    ThreeHeavyDiamonds { alpha: f64 },
    LiteDmdHeavyCore,
    LayeredHorizontal(Vec<Layer>),
    /// Piecewise-constant ℓ¹-radial weight: `values[k-1]` on
    /// `(k-1)/n ≤ |x|+|y| < k/n`, `outer` beyond `|x|+|y| = 1`.
    L1Shells { values: Vec<f64>, outer: f64 },
    /// First piece whose region contains the point wins; `background` elsewhere.
    CustomPiecewise { pieces: Vec<Piece>, background: f64 },
}

/// Symbolic region label returned by [`WeightField::region_of`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Region {
    Uniform,
    Core,
    Transition,
    Outside,
    KIn,
    KAnn,
    KOut,
    LargeDiamond,
    SmallDiamond,
    Layer(usize),
    Shell(usize),
    Piece(usize),
    Background,
}

impl fmt::Display for Region {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Region::Uniform => write!(f, "uniform"),
            Region::Core => write!(f, "K"),
            Region::Transition => write!(f, "transition"),
            Region::Outside => write!(f, "outside"),
            Region::KIn => write!(f, "K_in"),
            Region::KAnn => write!(f, "K_ann"),
            Region::KOut => write!(f, "K_out"),
            Region::LargeDiamond => write!(f, "large_diamond"),
            Region::SmallDiamond => write!(f, "small_diamond"),
            Region::Layer(k) => write!(f, "layer_{k}"),
            Region::Shell(k) => write!(f, "shell_{k}"),
            Region::Piece(k) => write!(f, "piece_{k}"),
            Region::Background => write!(f, "background"),
        }
    }
}

/// A curve across which a weight formula may change.
#[derive(Debug, Clone, PartialEq)]
enum Break {
    /// Kinks on `x = cx`, `y = cy` and the level sets `|p − c|₁ = r`.
    L1 { center: Point, radii: Vec<f64> },
    /// `|p|₁ = k/n` for `k = 1..=n`, plus the axes.
    Shells { n: usize },
    Circle { center: Point, radius: f64 },
    /// `normal · p = offset`, unit normal.
    Line { normal: Point, offset: f64 },
}

/// A point where a segment `p + s (q − p)` meets a break curve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Crossing {
    pub s: f64,
    /// Unit normal of the crossed curve (orientation unspecified).
    pub normal: Point,
}

/// Catalog metadata, used by the CLI listing and config validation.
#[derive(Debug, Clone, Copy)]
pub struct CatalogEntry {
    pub name: &'static str,
    pub alpha_default: Option<f64>,
    pub alpha_range: Option<(f64, f64)>,
    pub reproduces: &'static str,
}

pub const CATALOG: &[CatalogEntry] = &[
    CatalogEntry {
        name: "constant",
        alpha_default: Some(1.0),
        alpha_range: Some((0.0, f64::INFINITY)),
        reproduces: "flat disk; level curves are horizontal chords",
    },
    CatalogEntry {
        name: "heavy_diamond",
        alpha_default: Some(HEAVY_DIAMOND_FIGURE_B_ALPHA),
        alpha_range: Some((1.0, f64::INFINITY)),
        reproduces: "Eye of Horus: heavy central diamond, jumps at the tips (case a: alpha >= 3/sqrt5, case b below)",
    },
    CatalogEntry {
        name: "heavy_disk",
        alpha_default: Some(HEAVY_DISK_DEFAULT_ALPHA),
        alpha_range: Some((PI / 2.0, f64::INFINITY)),
        reproduces: "heavy central disk, geodesics hug the disk boundary; one-dimensional jump set",
    },
    CatalogEntry {
        name: "light_diamond",
        alpha_default: Some(LIGHT_DIAMOND_DEFAULT_ALPHA),
        alpha_range: Some((0.0, 1.0)),
        reproduces: "continuous light diamond with a thin ramp; jump on the central horizontal segment",
    },
    CatalogEntry {
        name: "light_diamond_tight",
        alpha_default: Some(LIGHT_DIAMOND_DEFAULT_ALPHA),
        alpha_range: Some((0.0, 1.0)),
        reproduces: "continuous light diamond filling the disk; jump set reaches the boundary",
    },
    CatalogEntry {
        name: "three_heavy_diamonds",
        alpha_default: Some(THREE_DIAMONDS_DEFAULT_ALPHA),
        alpha_range: Some((std::f64::consts::SQRT_2, f64::INFINITY)),
        reproduces: "Third Eye: three heavy diamonds, two distinct solutions",
    },
    CatalogEntry {
        name: "lite_dmd_heavy_core",
        alpha_default: None,
        alpha_range: None,
        reproduces: "continuous weight with heavy core and light annulus; non-unique solutions",
    },
];

pub fn catalog_entry(name: &str) -> Option<&'static CatalogEntry> {
    CATALOG.iter().find(|e| e.name == name)
}

/// An immutable positive weight on the plane.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightField {
    kind: WeightKind,
    breaks: Vec<Break>,
}

fn check_alpha(alpha: f64) -> Result<f64> {
    if alpha.is_finite() && alpha > 0.0 {
        Ok(alpha)
    } else {
        Err(Error::invalid(format!("weight parameter must be positive, got {alpha}")))
    }
}

impl WeightField {
    fn with_kind(kind: WeightKind) -> Self {
        let mut breaks = Vec::new();
        let origin = Point::ORIGIN;
        match &kind {
            WeightKind::Constant(_) => {}
            WeightKind::HeavyDiamond { .. } => breaks.push(Break::L1 {
                center: origin,
                radii: vec![0.5],
            }),
            WeightKind::HeavyDisk { .. } => breaks.push(Break::Circle {
                center: origin,
                radius: 0.5,
            }),
            WeightKind::LightDiamond { .. } => breaks.push(Break::L1 {
                center: origin,
                radii: vec![0.5, 0.55],
            }),
            WeightKind::LightDiamondTight { .. } => breaks.push(Break::L1 {
                center: origin,
                radii: vec![1.0],
            }),
            WeightKind::ThreeHeavyDiamonds { .. } => {
                for c in [Point::new(-0.5, 0.0), Point::new(0.5, 0.0)] {
                    breaks.push(Break::L1 {
                        center: c,
                        radii: vec![0.25],
                    });
                }
                breaks.push(Break::L1 {
                    center: Point::new(0.0, 0.25),
                    radii: vec![0.125],
                });
            }
            WeightKind::LiteDmdHeavyCore => breaks.push(Break::L1 {
                center: origin,
                radii: vec![0.5, 1.0],
            }),
            WeightKind::LayeredHorizontal(layers) => {
                for l in layers {
                    breaks.push(Break::Line {
                        normal: Point::new(0.0, 1.0),
                        offset: -l.depth,
                    });
                }
            }
            WeightKind::L1Shells { values, .. } => breaks.push(Break::Shells { n: values.len() }),
            WeightKind::CustomPiecewise { pieces, .. } => {
                for piece in pieces {
                    piece.region.collect_breaks(&mut breaks);
                    if piece.weight.slope != 0.0 {
                        breaks.push(Break::L1 {
                            center: piece.weight.center,
                            radii: Vec::new(),
                        });
                    }
                }
            }
        }
        Self { kind, breaks }
    }

    pub fn constant(value: f64) -> Result<Self> {
        Ok(Self::with_kind(WeightKind::Constant(check_alpha(value)?)))
    }

    pub fn heavy_diamond(alpha: f64) -> Result<Self> {
        Ok(Self::with_kind(WeightKind::HeavyDiamond {
            alpha: check_alpha(alpha)?,
        }))
    }

    pub fn heavy_disk(alpha: f64) -> Result<Self> {
        Ok(Self::with_kind(WeightKind::HeavyDisk {
            alpha: check_alpha(alpha)?,
        }))
    }

    pub fn light_diamond(alpha: f64) -> Result<Self> {
        Ok(Self::with_kind(WeightKind::LightDiamond {
            alpha: check_alpha(alpha)?,
        }))
    }

    pub fn light_diamond_tight(alpha: f64) -> Result<Self> {
        Ok(Self::with_kind(WeightKind::LightDiamondTight {
            alpha: check_alpha(alpha)?,
        }))
    }

    pub fn three_heavy_diamonds(alpha: f64) -> Result<Self> {
        Ok(Self::with_kind(WeightKind::ThreeHeavyDiamonds {
            alpha: check_alpha(alpha)?,
        }))
    }

    pub fn lite_dmd_heavy_core() -> Self {
        Self::with_kind(WeightKind::LiteDmdHeavyCore)
    }

    /// Layers must have strictly increasing positive depths.
    pub fn layered_horizontal(layers: Vec<Layer>) -> Result<Self> {
        if layers.is_empty() {
            return Err(Error::invalid("layered weight needs at least one layer"));
        }
        let mut prev = 0.0;
        for l in &layers {
            if !(l.depth > prev) || !l.depth.is_finite() {
                return Err(Error::invalid("layer depths must be positive and increasing"));
            }
            check_alpha(l.weight)?;
            prev = l.depth;
        }
        Ok(Self::with_kind(WeightKind::LayeredHorizontal(layers)))
    }

    pub fn l1_shells(values: Vec<f64>, outer: f64) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::invalid("shell weight needs at least one shell"));
        }
        for v in &values {
            check_alpha(*v)?;
        }
        Ok(Self::with_kind(WeightKind::L1Shells {
            values,
            outer: check_alpha(outer)?,
        }))
    }

    pub fn custom_piecewise(pieces: Vec<Piece>, background: f64) -> Result<Self> {
        check_alpha(background)?;
        Ok(Self::with_kind(WeightKind::CustomPiecewise {
            pieces,
            background,
        }))
    }

    /// Catalog lookup by name; `alpha` falls back to the catalog default.
    pub fn from_name(name: &str, alpha: Option<f64>) -> Result<Self> {
        let entry = catalog_entry(name)
            .ok_or_else(|| Error::invalid(format!("unknown weight '{name}'")))?;
        let a = alpha.or(entry.alpha_default).unwrap_or(1.0);
        match name {
            "constant" => Self::constant(a),
            "heavy_diamond" => Self::heavy_diamond(a),
            "heavy_disk" => Self::heavy_disk(a),
            "light_diamond" => Self::light_diamond(a),
            "light_diamond_tight" => Self::light_diamond_tight(a),
            "three_heavy_diamonds" => Self::three_heavy_diamonds(a),
            "lite_dmd_heavy_core" => Ok(Self::lite_dmd_heavy_core()),
            _ => unreachable!("catalog entry without constructor"),
        }
    }

    pub fn kind(&self) -> &WeightKind {
        &self.kind
    }

    pub fn name(&self) -> &'static str {
        match self.kind {
            WeightKind::Constant(_) => "constant",
            WeightKind::HeavyDiamond { .. } => "heavy_diamond",
            WeightKind::HeavyDisk { .. } => "heavy_disk",
            WeightKind::LightDiamond { .. } => "light_diamond",
            WeightKind::LightDiamondTight { .. } => "light_diamond_tight",
            WeightKind::ThreeHeavyDiamonds { .. } => "three_heavy_diamonds",
            WeightKind::LiteDmdHeavyCore => "lite_dmd_heavy_core",
            WeightKind::LayeredHorizontal(_) => "layered_horizontal",
            WeightKind::L1Shells { .. } => "l1_shells",
            WeightKind::CustomPiecewise { .. } => "custom_piecewise",
        }
    }

    pub fn alpha(&self) -> Option<f64> {
        match self.kind {
            WeightKind::Constant(a)
            | WeightKind::HeavyDiamond { alpha: a }
            | WeightKind::HeavyDisk { alpha: a }
            | WeightKind::LightDiamond { alpha: a }
            | WeightKind::LightDiamondTight { alpha: a }
            | WeightKind::ThreeHeavyDiamonds { alpha: a } => Some(a),
            _ => None,
        }
    }

    pub fn eval(&self, p: Point) -> f64 {
        let rho = p.l1_norm();
        match &self.kind {
            WeightKind::Constant(c) => *c,
            WeightKind::HeavyDiamond { alpha } => {
                if rho < 0.5 {
                    *alpha
                } else {
                    1.0
                }
            }
            WeightKind::HeavyDisk { alpha } => {
                if p.dot(p) < 0.25 {
                    *alpha
                } else {
                    1.0
                }
            }
            WeightKind::LightDiamond { alpha } => {
                if rho <= 0.5 {
                    *alpha
                } else if rho <= 0.55 {
                    alpha + (1.0 - alpha) / 0.05 * (rho - 0.5)
                } else {
                    1.0
                }
            }
            WeightKind::LightDiamondTight { alpha } => {
                if rho < 1.0 {
                    alpha + (1.0 - alpha) * rho
                } else {
                    1.0
                }
            }
            WeightKind::ThreeHeavyDiamonds { alpha } => {
                if three_diamonds_heavy(p).is_some() {
                    *alpha
                } else {
                    1.0
                }
            }
            WeightKind::LiteDmdHeavyCore => {
                if rho < 0.5 {
                    0.75 - 0.5 * rho
                } else if rho <= 1.0 {
                    rho
                } else {
                    1.0
                }
            }
            WeightKind::LayeredHorizontal(layers) => layered_eval(layers, p.y),
            WeightKind::L1Shells { values, outer } => shells_eval(values, *outer, rho),
            WeightKind::CustomPiecewise { pieces, background } => {
                custom_eval(pieces, *background, p)
            }
        }
    }

    pub fn region_of(&self, p: Point) -> Region {
        let rho = p.l1_norm();
        match &self.kind {
            WeightKind::Constant(_) => Region::Uniform,
            WeightKind::HeavyDiamond { .. } => {
                if rho < 0.5 {
                    Region::Core
                } else {
                    Region::Outside
                }
            }
            WeightKind::HeavyDisk { .. } => {
                if p.dot(p) < 0.25 {
                    Region::Core
                } else {
                    Region::Outside
                }
            }
            WeightKind::LightDiamond { .. } => {
                if rho <= 0.5 {
                    Region::Core
                } else if rho <= 0.55 {
                    Region::Transition
                } else {
                    Region::Outside
                }
            }
            WeightKind::LightDiamondTight { .. } => {
                if rho < 1.0 {
                    Region::Core
                } else {
                    Region::Outside
                }
            }
            WeightKind::ThreeHeavyDiamonds { .. } => match three_diamonds_heavy(p) {
                Some(true) => Region::SmallDiamond,
                Some(false) => Region::LargeDiamond,
                None => Region::Outside,
            },
            WeightKind::LiteDmdHeavyCore => {
                if rho < 0.5 {
                    Region::KIn
                } else if rho <= 1.0 {
                    Region::KAnn
                } else {
                    Region::KOut
                }
            }
            WeightKind::LayeredHorizontal(layers) => {
                let k = layers
                    .iter()
                    .position(|l| p.y > -l.depth)
                    .unwrap_or(layers.len() - 1);
                Region::Layer(k + 1)
            }
            WeightKind::L1Shells { values, .. } => {
                let n = values.len();
                if rho >= 1.0 {
                    Region::Outside
                } else {
                    Region::Shell(((rho * n as f64).floor() as usize).min(n - 1) + 1)
                }
            }
            WeightKind::CustomPiecewise { pieces, .. } => pieces
                .iter()
                .position(|pc| pc.region.contains(p, true))
                .map(Region::Piece)
                .unwrap_or(Region::Background),
        }
    }

    /// Invariant under `(x, y) ↦ (−x, y)`.
    pub fn is_x_symmetric(&self) -> bool {
        !matches!(self.kind, WeightKind::CustomPiecewise { .. })
    }

    /// Invariant under `(x, y) ↦ (x, −y)`.
    pub fn is_y_symmetric(&self) -> bool {
        !matches!(
            self.kind,
            WeightKind::ThreeHeavyDiamonds { .. }
                | WeightKind::LayeredHorizontal(_)
                | WeightKind::CustomPiecewise { .. }
        )
    }

    /// Continuous on the whole plane.
    pub fn is_continuous(&self) -> bool {
        matches!(
            self.kind,
            WeightKind::Constant(_)
                | WeightKind::LightDiamond { .. }
                | WeightKind::LightDiamondTight { .. }
                | WeightKind::LiteDmdHeavyCore
        )
    }

    /// Euclidean Lipschitz constant for continuous weights.
    pub fn lipschitz_bound(&self) -> Option<f64> {
        let sqrt2 = std::f64::consts::SQRT_2;
        match self.kind {
            WeightKind::Constant(_) => Some(0.0),
            WeightKind::LightDiamond { alpha } => Some((1.0 - alpha).abs() / 0.05 * sqrt2),
            WeightKind::LightDiamondTight { alpha } => Some((1.0 - alpha).abs() * sqrt2),
            WeightKind::LiteDmdHeavyCore => Some(sqrt2),
            _ => None,
        }
    }

    /// Corners of the polygonal heavy regions (diamond tips).
    pub fn corners(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for b in &self.breaks {
            if let Break::L1 { center, radii } = b {
                for r in radii {
                    out.extend([
                        *center + Point::new(0.0, *r),
                        *center + Point::new(-*r, 0.0),
                        *center + Point::new(*r, 0.0),
                        *center + Point::new(0.0, -*r),
                    ]);
                }
            }
        }
        out
    }

    /// Piecewise-constant approximation by `n` ℓ¹ shells, taking on each shell
    /// the value at its outer edge. Only for continuous ℓ¹-radial weights.
    pub fn shell_discretization(&self, n: usize) -> Result<WeightField> {
        let radial = matches!(
            self.kind,
            WeightKind::Constant(_)
                | WeightKind::LightDiamond { .. }
                | WeightKind::LightDiamondTight { .. }
                | WeightKind::LiteDmdHeavyCore
        );
        if !radial || n == 0 {
            return Err(Error::invalid(format!(
                "{} has no ℓ¹ shell discretization",
                self.name()
            )));
        }
        let values = (1..=n)
            .map(|k| self.eval(Point::new(k as f64 / n as f64, 0.0)))
            .collect();
        WeightField::l1_shells(values, self.eval(Point::new(2.0, 0.0)))
    }

    /// All parameters `s ∈ (0, 1)` where `p + s (q − p)` crosses a break curve,
    /// unsorted.
    pub fn crossings(&self, p: Point, q: Point, out: &mut Vec<Crossing>) {
        for b in &self.breaks {
            b.crossings(p, q, 0.0, out);
        }
    }

    /// Smallest crossing parameter strictly above `s_min`.
    pub fn next_crossing(&self, p: Point, q: Point, s_min: f64) -> Option<Crossing> {
        let mut best: Option<Crossing> = None;
        let mut buf = Vec::new();
        for b in &self.breaks {
            let cand = match b {
                Break::Shells { n } => shells_next(*n, p, q, s_min),
                _ => {
                    buf.clear();
                    b.crossings(p, q, s_min, &mut buf);
                    buf.iter()
                        .copied()
                        .filter(|c| c.s > s_min)
                        .min_by(|a, b| a.s.total_cmp(&b.s))
                }
            };
            if let Some(c) = cand {
                if best.map_or(true, |b| c.s < b.s) {
                    best = Some(c);
                }
            }
        }
        best
    }

    /// Exact weighted length of the segment `p`–`q`: split at every break,
    /// then one midpoint sample per piece (the weight is affine on each piece).
    pub fn segment_cost(&self, p: Point, q: Point) -> f64 {
        let len = p.dist(q);
        if len == 0.0 {
            return 0.0;
        }
        if let WeightKind::Constant(c) = self.kind {
            return c * len;
        }
        let mut cuts: Vec<Crossing> = Vec::with_capacity(16);
        self.crossings(p, q, &mut cuts);
        if cuts.is_empty() {
            return len * self.eval(p.lerp(q, 0.5));
        }
        let mut params: Vec<f64> = cuts.iter().map(|c| c.s).collect();
        params.sort_by(f64::total_cmp);
        let mut total = 0.0;
        let mut lo = 0.0;
        for &s in params.iter().chain(std::iter::once(&1.0)) {
            if s > lo {
                total += (s - lo) * self.eval(p.lerp(q, 0.5 * (lo + s)));
                lo = s;
            }
        }
        total * len
    }
}

impl fmt::Display for WeightField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alpha() {
            Some(a) => write!(f, "{}({a})", self.name()),
            None => write!(f, "{}", self.name()),
        }
    }
}

/// `Some(true)` in the small diamond, `Some(false)` in a large one.
fn three_diamonds_heavy(p: Point) -> Option<bool> {
    let large = (p.x - 0.5).abs().min((p.x + 0.5).abs()) + p.y.abs() < 0.25;
    let small = p.x.abs() + (p.y - 0.25).abs() < 0.125;
    if small {
        Some(true)
    } else if large {
        Some(false)
    } else {
        None
    }
}

fn layered_eval(layers: &[Layer], y: f64) -> f64 {
    let mut prev_depth = 0.0;
    for (k, l) in layers.iter().enumerate() {
        if y > -l.depth {
            if k > 0 && y == -prev_depth {
                return l.weight.min(layers[k - 1].weight);
            }
            return l.weight;
        }
        prev_depth = l.depth;
    }
    layers[layers.len() - 1].weight
}

fn shells_eval(values: &[f64], outer: f64, rho: f64) -> f64 {
    let n = values.len();
    let scaled = rho * n as f64;
    if scaled >= n as f64 {
        if scaled == n as f64 {
            return values[n - 1].min(outer);
        }
        return outer;
    }
    let k = scaled.floor() as usize;
    if k > 0 && scaled == k as f64 {
        values[k].min(values[k - 1])
    } else {
        values[k]
    }
}

fn custom_eval(pieces: &[Piece], background: f64, p: Point) -> f64 {
    let interior = pieces.iter().find(|pc| pc.region.contains(p, false));
    let mut value = interior.map_or(background, |pc| pc.weight.eval(p));
    // On an interface take the smallest adjacent formula.
    for pc in pieces {
        if pc.region.contains(p, true) && !pc.region.contains(p, false) {
            value = value.min(pc.weight.eval(p));
            if interior.is_none() {
                value = value.min(background);
            }
        }
    }
    value
}

impl Break {
    fn crossings(&self, p: Point, q: Point, s_min: f64, out: &mut Vec<Crossing>) {
        let d = q - p;
        match self {
            Break::Line { normal, offset } => {
                let den = normal.dot(d);
                if den != 0.0 {
                    let s = (offset - normal.dot(p)) / den;
                    if s > s_min && s < 1.0 {
                        out.push(Crossing { s, normal: *normal });
                    }
                }
            }
            Break::Circle { center, radius } => {
                // |p - c + s d|² = r²
                let m = p - *center;
                let a = d.dot(d);
                let b = 2.0 * m.dot(d);
                let c = m.dot(m) - radius * radius;
                let disc = b * b - 4.0 * a * c;
                if a > 0.0 && disc > 0.0 {
                    let sq = disc.sqrt();
                    // Numerically stable pair of roots.
                    let t = -0.5 * (b + b.signum() * sq);
                    let (r1, r2) = if t != 0.0 { (t / a, c / t) } else { (0.0, 0.0) };
                    for s in [r1, r2] {
                        if s > s_min && s < 1.0 {
                            let hit = p + d * s - *center;
                            out.push(Crossing {
                                s,
                                normal: hit.normalized(),
                            });
                        }
                    }
                }
            }
            Break::L1 { center, radii } => {
                l1_crossings(*center, p, q, s_min, out, |lo_val, slope, lo, hi, normal, out| {
                    for r in radii {
                        if slope != 0.0 {
                            let s = lo + (r - lo_val) / slope;
                            if s > lo && s < hi && s > s_min {
                                out.push(Crossing { s, normal });
                            }
                        }
                    }
                });
            }
            Break::Shells { n } => {
                let nf = *n as f64;
                l1_crossings(Point::ORIGIN, p, q, s_min, out, |lo_val, slope, lo, hi, normal, out| {
                    if slope == 0.0 {
                        return;
                    }
                    let hi_val = lo_val + slope * (hi - lo);
                    let (a, b) = if lo_val < hi_val { (lo_val, hi_val) } else { (hi_val, lo_val) };
                    let k_lo = ((a * nf).floor() as i64 + 1).max(1);
                    let k_hi = ((b * nf).ceil() as i64 - 1).min(*n as i64);
                    for k in k_lo..=k_hi {
                        let s = lo + (k as f64 / nf - lo_val) / slope;
                        if s > lo && s < hi && s > s_min {
                            out.push(Crossing { s, normal });
                        }
                    }
                });
            }
        }
    }
}

/// Splits the segment at the axes through `center`, then calls `level_hits`
/// on each piece with the affine form of `|· − center|₁` on it:
/// `(value at lo, slope in s, lo, hi, unit normal of the level lines, out)`.
fn l1_crossings<F>(center: Point, p: Point, q: Point, s_min: f64, out: &mut Vec<Crossing>, mut level_hits: F)
where
    F: FnMut(f64, f64, f64, f64, Point, &mut Vec<Crossing>),
{
    let d = q - p;
    let rel = p - center;
    let mut cuts = [0.0, 1.0, 1.0, 1.0];
    let mut n_cuts = 1;
    if d.x != 0.0 {
        let s = -rel.x / d.x;
        if s > 0.0 && s < 1.0 {
            if s > s_min {
                out.push(Crossing {
                    s,
                    normal: Point::new(1.0, 0.0),
                });
            }
            cuts[n_cuts] = s;
            n_cuts += 1;
        }
    }
    if d.y != 0.0 {
        let s = -rel.y / d.y;
        if s > 0.0 && s < 1.0 {
            if s > s_min {
                out.push(Crossing {
                    s,
                    normal: Point::new(0.0, 1.0),
                });
            }
            cuts[n_cuts] = s;
            n_cuts += 1;
        }
    }
    cuts[n_cuts] = 1.0;
    let cuts = &mut cuts[..=n_cuts];
    cuts.sort_by(f64::total_cmp);
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi <= lo || hi <= s_min {
            continue;
        }
        let mid = rel + d * (0.5 * (lo + hi));
        let sx = if mid.x >= 0.0 { 1.0 } else { -1.0 };
        let sy = if mid.y >= 0.0 { 1.0 } else { -1.0 };
        let at_lo = rel + d * lo;
        let lo_val = sx * at_lo.x + sy * at_lo.y;
        let slope = sx * d.x + sy * d.y;
        let normal = Point::new(sx * FRAC_1_SQRT_2, sy * FRAC_1_SQRT_2);
        level_hits(lo_val, slope, lo, hi, normal, out);
    }
}

/// Crossings of `p + s (q − p)` with the ℓ¹ sphere `|· − center|₁ = radius`,
/// sorted by `s`.
pub fn l1_sphere_crossings(center: Point, radius: f64, p: Point, q: Point, s_min: f64) -> Vec<Crossing> {
    let mut hits: Vec<Crossing> = Vec::new();
    let mut axes = Vec::new();
    l1_crossings(center, p, q, s_min, &mut axes, |lo_val, slope, lo, hi, normal, _| {
        if slope != 0.0 {
            let s = lo + (radius - lo_val) / slope;
            if s >= lo && s <= hi && s > s_min {
                hits.push(Crossing { s, normal });
            }
        }
    });
    hits.sort_by(|a, b| a.s.total_cmp(&b.s));
    hits.dedup_by(|a, b| (a.s - b.s).abs() < 1e-15);
    hits
}

/// First shell or axis crossing beyond `s_min`, without enumerating all shells.
fn shells_next(n: usize, p: Point, q: Point, s_min: f64) -> Option<Crossing> {
    let nf = n as f64;
    let mut best: Option<Crossing> = None;
    let mut consider = |c: Crossing| {
        if c.s > s_min && best.map_or(true, |b| c.s < b.s) {
            best = Some(c);
        }
    };
    let mut scratch = Vec::new();
    l1_crossings(Point::ORIGIN, p, q, s_min, &mut scratch, |lo_val, slope, lo, hi, normal, _| {
        if slope == 0.0 {
            return;
        }
        let start = lo.max(s_min);
        let start_val = lo_val + slope * (start - lo);
        let mut k = if slope > 0.0 {
            (start_val * nf).floor() as i64 + 1
        } else {
            (start_val * nf).ceil() as i64 - 1
        };
        for _ in 0..3 {
            if k < 1 || k > n as i64 {
                return;
            }
            let s = lo + (k as f64 / nf - lo_val) / slope;
            if s > start && s < hi {
                consider(Crossing { s, normal });
                return;
            }
            if s >= hi {
                return;
            }
            k += if slope > 0.0 { 1 } else { -1 };
        }
    });
    for c in scratch {
        consider(c);
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_values() {
        let c = WeightField::constant(1.0).unwrap();
        assert_eq!(c.eval(Point::new(0.3, 0.7)), 1.0);
        let ldt = WeightField::light_diamond_tight(0.5).unwrap();
        assert_eq!(ldt.eval(Point::ORIGIN), 0.5);
        let lite = WeightField::lite_dmd_heavy_core();
        assert!((lite.eval(Point::new(0.25, 0.25)) - 0.5).abs() < 1e-15);
        // both sides of |x|+|y| = 0.5 give 0.5
        assert!((lite.eval(Point::new(0.2499999, 0.25)) - 0.5).abs() < 1e-6);
        assert!((lite.eval(Point::new(0.2500001, 0.25)) - 0.5).abs() < 1e-6);
    }

    #[test]
    fn regions() {
        let lite = WeightField::lite_dmd_heavy_core();
        assert_eq!(lite.region_of(Point::ORIGIN), Region::KIn);
        assert_eq!(lite.region_of(Point::new(0.6, 0.3)), Region::KAnn);
        assert_eq!(lite.region_of(Point::new(0.9, 0.9)), Region::KOut);
        assert_eq!(Region::KIn.to_string(), "K_in");
        let disk = WeightField::heavy_disk(2.0).unwrap();
        assert_eq!(disk.region_of(Point::new(0.9, 0.0)), Region::Outside);
        let three = WeightField::three_heavy_diamonds(2.0).unwrap();
        assert_eq!(three.region_of(Point::new(0.0, 0.25)), Region::SmallDiamond);
        assert_eq!(three.region_of(Point::new(-0.5, 0.1)), Region::LargeDiamond);
    }

    #[test]
    fn interface_takes_lower_value() {
        let hd = WeightField::heavy_diamond(2.0).unwrap();
        assert_eq!(hd.eval(Point::new(0.0, 0.5)), 1.0);
        let disk = WeightField::heavy_disk(2.0).unwrap();
        assert_eq!(disk.eval(Point::new(0.5, 0.0)), 1.0);
        let layered = WeightField::layered_horizontal(vec![
            Layer { depth: 1.0, weight: 1.0 },
            Layer { depth: 2.0, weight: 2.0 },
        ])
        .unwrap();
        assert_eq!(layered.eval(Point::new(0.0, -1.0)), 1.0);
        assert_eq!(layered.eval(Point::new(0.0, -1.5)), 2.0);
        assert_eq!(layered.eval(Point::new(0.0, -0.5)), 1.0);
        let three = WeightField::three_heavy_diamonds(2.0).unwrap();
        assert_eq!(three.eval(Point::new(0.0, 0.375)), 1.0);
    }

    #[test]
    fn segment_cost_exact_on_piecewise_weights() {
        let lite = WeightField::lite_dmd_heavy_core();
        let straight = lite.segment_cost(Point::new(-0.5, 0.0), Point::new(0.5, 0.0));
        assert!((straight - 0.625).abs() < 1e-15);
        let hd = WeightField::heavy_diamond(2.0).unwrap();
        // crosses the diamond along the axis: 0.5 outside + 1.0 inside at 2 + 0.5 outside
        let c = hd.segment_cost(Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        assert!((c - 3.0).abs() < 1e-14);
        let disk = WeightField::heavy_disk(3.0).unwrap();
        let c = disk.segment_cost(Point::new(-1.0, 0.0), Point::new(1.0, 0.0));
        assert!((c - 4.0).abs() < 1e-14);
    }

    #[test]
    fn shell_discretization_matches_outer_edge() {
        let ldt = WeightField::light_diamond_tight(0.5).unwrap();
        let shells = ldt.shell_discretization(10).unwrap();
        assert_eq!(shells.eval(Point::new(0.05, 0.0)), 0.55);
        assert_eq!(shells.eval(Point::new(0.3, 0.35)), 0.85);
        assert_eq!(shells.eval(Point::new(1.5, 0.0)), 1.0);
        assert!(WeightField::heavy_disk(2.0).unwrap().shell_discretization(10).is_err());
    }

    #[test]
    fn next_crossing_walks_shells_in_order() {
        let shells = WeightField::l1_shells(vec![1.0; 100], 1.0).unwrap();
        let p = Point::new(0.105, 0.0);
        let q = Point::new(0.705, 0.3);
        let mut all = Vec::new();
        shells.crossings(p, q, &mut all);
        all.sort_by(|a, b| a.s.total_cmp(&b.s));
        let mut s = 0.0;
        for expected in &all {
            let c = shells.next_crossing(p, q, s).unwrap();
            assert!((c.s - expected.s).abs() < 1e-12, "{} vs {}", c.s, expected.s);
            s = c.s;
        }
        assert!(shells.next_crossing(p, q, s).is_none());
    }

    #[test]
    fn custom_matches_catalog_heavy_diamond() {
        let custom = WeightField::custom_piecewise(
            vec![Piece {
                region: Shape::L1Ball {
                    center: Point::ORIGIN,
                    radius: 0.5,
                },
                weight: L1Affine::constant(2.0),
            }],
            1.0,
        )
        .unwrap();
        let hd = WeightField::heavy_diamond(2.0).unwrap();
        for p in [
            Point::new(0.1, 0.1),
            Point::new(0.25, 0.25),
            Point::new(0.7, 0.0),
            Point::new(0.0, 0.5),
        ] {
            assert_eq!(custom.eval(p), hd.eval(p), "at {p}");
        }
        let a = Point::new(-0.9, 0.13);
        let b = Point::new(0.8, -0.2);
        assert!((custom.segment_cost(a, b) - hd.segment_cost(a, b)).abs() < 1e-14);
    }

    #[test]
    fn rejects_nonpositive_parameters() {
        assert!(WeightField::heavy_disk(0.0).is_err());
        assert!(WeightField::constant(-1.0).is_err());
        assert!(WeightField::from_name("nope", None).is_err());
    }
}
