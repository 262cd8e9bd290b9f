//! Flat `key=value` run configuration.

use std::fmt::Write as _;
use std::path::PathBuf;

use lgl_core::analysis::suites::SUITES;
use lgl_core::weight::catalog_entry;
use lgl_core::{Error, Point, Result, WeightField};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    /// Ray shooting, falling back to the lattice solver and then the grid oracle.
    Auto,
    Shoot,
    Lattice,
    Grid,
    /// Weighted length of the polyline `from → via… → to`, no search.
    Polyline,
}

impl Solver {
    pub const ALL: [Solver; 5] = [Solver::Auto, Solver::Shoot, Solver::Lattice, Solver::Grid, Solver::Polyline];

    pub fn name(self) -> &'static str {
        match self {
            Solver::Auto => "auto",
            Solver::Shoot => "shoot",
            Solver::Lattice => "lattice",
            Solver::Grid => "grid",
            Solver::Polyline => "polyline",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|v| v.name() == s)
            .ok_or_else(|| Error::Config(format!("unknown solver '{s}'")))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub weight: String,
    pub alpha: Option<f64>,
    pub res: usize,
    pub levels: usize,
    /// Levels at or below this use the maximal branch, above it the minimal one.
    pub switch_level: f64,
    pub out: PathBuf,
    pub experiment: String,
    pub seed: u64,
    pub trials: usize,
    pub from: Point,
    pub to: Point,
    pub via: Vec<Point>,
    pub solver: Solver,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            weight: "constant".into(),
            alpha: None,
            res: 512,
            levels: 401,
            switch_level: 0.0,
            out: PathBuf::from("out"),
            experiment: "all".into(),
            seed: 1,
            trials: 1000,
            from: Point::new(-1.0, 0.0),
            to: Point::new(1.0, 0.0),
            via: Vec::new(),
            solver: Solver::Auto,
        }
    }
}

pub const KEYS: &[&str] = &[
    "weight",
    "alpha",
    "res",
    "levels",
    "switch_level",
    "out",
    "experiment",
    "seed",
    "trials",
    "from",
    "to",
    "via",
    "solver",
];

fn bad(key: &str, value: &str, why: &str) -> Error {
    Error::Config(format!("{key}={value}: {why}"))
}

fn parse_f64(key: &str, v: &str) -> Result<f64> {
    v.parse::<f64>()
        .ok()
        .filter(|x| x.is_finite())
        .ok_or_else(|| bad(key, v, "expected a finite number"))
}

fn parse_int<T: std::str::FromStr>(key: &str, v: &str) -> Result<T> {
    v.parse().map_err(|_| bad(key, v, "expected a non-negative integer"))
}

pub fn parse_point(key: &str, v: &str) -> Result<Point> {
    let (x, y) = v.split_once(',').ok_or_else(|| bad(key, v, "expected x,y"))?;
    Ok(Point::new(parse_f64(key, x.trim())?, parse_f64(key, y.trim())?))
}

fn parse_points(key: &str, v: &str) -> Result<Vec<Point>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(';').map(|p| parse_point(key, p.trim())).collect()
}

fn fmt_point(p: Point) -> String {
    format!("{},{}", p.x, p.y)
}

impl RunConfig {
    /// Sets one key. Values are checked individually; call [`RunConfig::validate`]
    /// for the cross-field checks.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let v = value.trim();
        match key {
            "weight" => self.weight = v.to_string(),
            "alpha" => self.alpha = if v.is_empty() { None } else { Some(parse_f64(key, v)?) },
            "res" => self.res = parse_int(key, v)?,
            "levels" => self.levels = parse_int(key, v)?,
            "switch_level" => self.switch_level = parse_f64(key, v)?,
            "out" => self.out = PathBuf::from(v),
            "experiment" => self.experiment = v.to_string(),
            "seed" => self.seed = parse_int(key, v)?,
            "trials" => self.trials = parse_int(key, v)?,
            "from" => self.from = parse_point(key, v)?,
            "to" => self.to = parse_point(key, v)?,
            "via" => self.via = parse_points(key, v)?,
            "solver" => self.solver = Solver::parse(v)?,
            _ => return Err(Error::Config(format!("unknown key '{key}'"))),
        }
        Ok(())
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut cfg = Self::default();
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line
                .split_once('=')
                .ok_or_else(|| Error::Config(format!("line {}: expected key=value", n + 1)))?;
            cfg.set(k.trim(), v)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn serialize(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "weight={}", self.weight);
        if let Some(a) = self.alpha {
            let _ = writeln!(s, "alpha={a}");
        }
        let _ = writeln!(s, "res={}", self.res);
        let _ = writeln!(s, "levels={}", self.levels);
        let _ = writeln!(s, "switch_level={}", self.switch_level);
        let _ = writeln!(s, "out={}", self.out.display());
        let _ = writeln!(s, "experiment={}", self.experiment);
        let _ = writeln!(s, "seed={}", self.seed);
        let _ = writeln!(s, "trials={}", self.trials);
        let _ = writeln!(s, "from={}", fmt_point(self.from));
        let _ = writeln!(s, "to={}", fmt_point(self.to));
        let via: Vec<String> = self.via.iter().map(|&p| fmt_point(p)).collect();
        let _ = writeln!(s, "via={}", via.join(";"));
        let _ = writeln!(s, "solver={}", self.solver.name());
        s
    }

    pub fn validate(&self) -> Result<()> {
        let entry = catalog_entry(&self.weight).ok_or_else(|| bad("weight", &self.weight, "not in the catalog"))?;
        if let Some(a) = self.alpha {
            match entry.alpha_range {
                None => return Err(bad("alpha", &a.to_string(), "this weight takes no parameter")),
                Some((lo, hi)) if a < lo || a > hi || a <= 0.0 => {
                    return Err(bad("alpha", &a.to_string(), &format!("outside [{lo}, {hi}]")));
                }
                _ => {}
            }
        }
        if !(64..=4096).contains(&self.res) {
            return Err(bad("res", &self.res.to_string(), "must be in 64..=4096"));
        }
        if !(16..=4001).contains(&self.levels) {
            return Err(bad("levels", &self.levels.to_string(), "must be in 16..=4001"));
        }
        if !(0.0..=2.0).contains(&self.switch_level) {
            return Err(bad("switch_level", &self.switch_level.to_string(), "must be in [0, 2]"));
        }
        if self.experiment != "all" && !SUITES.contains(&self.experiment.as_str()) {
            return Err(bad("experiment", &self.experiment, "unknown suite"));
        }
        if !(1..=100_000).contains(&self.trials) {
            return Err(bad("trials", &self.trials.to_string(), "must be in 1..=100000"));
        }
        if self.out.as_os_str().is_empty() {
            return Err(bad("out", "", "must not be empty"));
        }
        Ok(())
    }

    pub fn weight_field(&self) -> Result<WeightField> {
        WeightField::from_name(&self.weight, self.alpha)
    }

    /// Suites selected by `experiment`.
    pub fn suites(&self) -> Vec<&'static str> {
        if self.experiment == "all" {
            SUITES.to_vec()
        } else {
            SUITES.iter().copied().filter(|s| *s == self.experiment).collect()
        }
    }
}
