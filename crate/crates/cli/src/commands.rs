use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use lgl_core::analysis::suites::{run_suite, SuiteOptions};
use lgl_core::geodesy::{shoot_two_point, Polyline};
use lgl_core::lattice::{disk_geodesic, GeodesicOptions};
use lgl_core::oracle::{grid_shortest_path, Stencil};
use lgl_core::stacker::{bv_energy, stack, uniform_levels, BranchPolicy, StackOptions};
use lgl_core::weight::CATALOG;
use lgl_core::{Error, Result, WeightField};

use crate::config::{RunConfig, Solver};
use crate::render::{curves_csv, fmt_sig, path_csv, pgm, report_csv, svg};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Done,
    VerificationFailed,
}

fn write_file(dir: &Path, name: &str, contents: &str) -> Result<PathBuf> {
    fs::create_dir_all(dir)?;
    let path = dir.join(name);
    fs::write(&path, contents)?;
    Ok(path)
}

pub fn cmd_catalog(out: &mut dyn Write) -> Result<Outcome> {
    writeln!(out, "{:<22} {:<10} {:<20} reproduces", "name", "alpha", "range")?;
    for e in CATALOG {
        let alpha = e.alpha_default.map_or("-".to_string(), |a| fmt_sig(a, 6));
        let range = e
            .alpha_range
            .map_or("-".to_string(), |(lo, hi)| format!("[{}, {}]", fmt_sig(lo, 6), fmt_sig(hi, 6)));
        writeln!(out, "{:<22} {:<10} {:<20} {}", e.name, alpha, range, e.reproduces)?;
    }
    Ok(Outcome::Done)
}

fn solve_path(w: &WeightField, cfg: &RunConfig) -> Result<(Polyline, Solver)> {
    let (a, b) = (cfg.from, cfg.to);
    let lattice = || disk_geodesic(w, a, b, &GeodesicOptions::default());
    let grid = || grid_shortest_path(w, cfg.res, Stencil::Sixteen, a, b).map(|g| g.path);
    match cfg.solver {
        Solver::Polyline => {
            let mut v = vec![a];
            v.extend_from_slice(&cfg.via);
            v.push(b);
            Ok((Polyline::new(v)?, Solver::Polyline))
        }
        Solver::Shoot => Ok((shoot_two_point(w, a, b, 1e-12)?, Solver::Shoot)),
        Solver::Lattice => Ok((lattice()?, Solver::Lattice)),
        Solver::Grid => Ok((grid()?, Solver::Grid)),
        Solver::Auto => match shoot_two_point(w, a, b, 1e-12) {
            Ok(p) => Ok((p, Solver::Shoot)),
            Err(e) if e.is_solver_failure() => match lattice() {
                Ok(p) => Ok((p, Solver::Lattice)),
                Err(e) if e.is_solver_failure() => Ok((grid()?, Solver::Grid)),
                Err(e) => Err(e),
            },
            Err(e) => Err(e),
        },
    }
}

pub fn cmd_geodesic(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let w = cfg.weight_field()?;
    let (path, used) = solve_path(&w, cfg)?;
    let file = write_file(&cfg.out, &format!("geodesic_{}.csv", cfg.weight), &path_csv(&path))?;
    writeln!(out, "length={}", fmt_sig(path.cost(&w), 17))?;
    writeln!(out, "solver={}", used.name())?;
    writeln!(out, "curve={}", file.display())?;
    Ok(Outcome::Done)
}

/// Builds the stack for `cfg` and writes `<stem>_u.pgm`, `<stem>_contours.svg`
/// and `<stem>_curves.csv`.
pub fn cmd_solve_named(cfg: &RunConfig, stem: &str, out: &mut dyn Write) -> Result<Outcome> {
    let w = cfg.weight_field()?;
    let opts = StackOptions {
        res: cfg.res,
        ..Default::default()
    };
    let s = stack(&w, &uniform_levels(cfg.levels), BranchPolicy::switch_at(cfg.switch_level), &opts)?;
    let files = [
        write_file(&cfg.out, &format!("{stem}_u.pgm"), &pgm(s.field()))?,
        write_file(&cfg.out, &format!("{stem}_contours.svg"), &svg(s.curves()))?,
        write_file(&cfg.out, &format!("{stem}_curves.csv"), &curves_csv(s.curves()))?,
    ];
    for (key, f) in ["pgm", "svg", "csv"].iter().zip(&files) {
        writeln!(out, "{key}={}", f.display())?;
    }
    writeln!(out, "energy={}", fmt_sig(bv_energy(&s, &w), 9))?;
    Ok(Outcome::Done)
}

pub fn cmd_solve(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    cmd_solve_named(cfg, &cfg.weight, out)
}

pub fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> Result<Outcome> {
    let opts = SuiteOptions {
        res: cfg.res,
        levels: cfg.levels,
        seed: cfg.seed,
        trials: cfg.trials,
    };
    let mut all = true;
    for name in cfg.suites() {
        let mut report = run_suite(name, &opts)?;
        let file = write_file(&cfg.out, &format!("verify_{name}.csv"), &report_csv(&report))?;
        report.artifacts.push(file);
        if report.all_pass() {
            writeln!(out, "{name}: PASS")?;
        } else {
            all = false;
            writeln!(out, "{name}: FAIL {}", report.failures().join(" "))?;
        }
    }
    Ok(if all {
        Outcome::Done
    } else {
        Outcome::VerificationFailed
    })
}

/// Figure id, weight, alpha and switch level.
pub const FIGURES: &[(&str, &str, Option<f64>, f64)] = &[
    ("heavydiamond", "heavy_diamond", Some(2.0), 0.0),
    ("heavydiamondB", "heavy_diamond", Some(lgl_core::weight::HEAVY_DIAMOND_FIGURE_B_ALPHA), 0.0),
    ("heavydisk", "heavy_disk", Some(2.0), 0.0),
    ("lightdiamond", "light_diamond", Some(0.5), 0.0),
    ("lightdiamondtight", "light_diamond_tight", Some(0.5), 0.0),
    ("3heavydiamondsA", "three_heavy_diamonds", Some(std::f64::consts::SQRT_2), 0.0),
    ("3heavydiamondsB", "three_heavy_diamonds", Some(std::f64::consts::SQRT_2), 2.0),
    ("litedmdheavycoreA", "lite_dmd_heavy_core", None, 0.0),
    ("litedmdheavycoreB", "lite_dmd_heavy_core", None, 2.0),
];

pub fn cmd_figure(cfg: &RunConfig, id: &str, out: &mut dyn Write) -> Result<Outcome> {
    let &(_, weight, alpha, switch) = FIGURES.iter().find(|f| f.0 == id).ok_or_else(|| {
        let ids: Vec<&str> = FIGURES.iter().map(|f| f.0).collect();
        Error::invalid(format!("unknown figure '{id}' (known: {})", ids.join(", ")))
    })?;
    let fig = RunConfig {
        weight: weight.to_string(),
        alpha,
        switch_level: switch,
        ..cfg.clone()
    };
    fig.validate()?;
    cmd_solve_named(&fig, id, out)
}
