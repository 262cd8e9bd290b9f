use std::path::Path;
use std::process::{Command, Output};

use lgl::config::{RunConfig, Solver, KEYS};
use lgl::{EXIT_OK, EXIT_USAGE};
use lgl_core::Point;
use proptest::prelude::*;

fn lgl(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lgl"))
        .current_dir(dir)
        .env_remove("LGL_OUT")
        .args(args)
        .output()
        .unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn catalog_is_stable() {
    let dir = tempfile::tempdir().unwrap();
    let a = lgl(dir.path(), &["catalog"]);
    let b = lgl(dir.path(), &["catalog"]);
    assert_eq!(a.status.code(), Some(EXIT_OK));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    assert!(text.contains("heavy_diamond"));
    assert!(text.contains("lite_dmd_heavy_core"));
}

#[test]
fn geodesic_prints_seventeen_digits() {
    let dir = tempfile::tempdir().unwrap();
    let o = lgl(dir.path(), &["geodesic", "--weight", "heavy_diamond", "--alpha", "2", "--out", "o"]);
    assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let len = text.lines().find_map(|l| l.strip_prefix("length=")).unwrap();
    let digits = len.chars().filter(char::is_ascii_digit).count();
    assert_eq!(digits, 17, "{len}");
    assert!((len.parse::<f64>().unwrap() - 5f64.sqrt()).abs() < 1e-9);
    let csv = std::fs::read_to_string(dir.path().join("o/geodesic_heavy_diamond.csv")).unwrap();
    assert!(csv.starts_with("x,y\n"));
}

#[test]
fn polyline_solver_gives_kinked_length() {
    let dir = tempfile::tempdir().unwrap();
    let o = lgl(
        dir.path(),
        &[
            "geodesic", "--weight", "lite_dmd_heavy_core", "--from", "-0.5,0", "--to", "0.5,0", "--via", "0,0.2",
            "--solver", "polyline",
        ],
    );
    assert_eq!(o.status.code(), Some(EXIT_OK));
    let len: f64 = stdout(&o).lines().find_map(|l| l.strip_prefix("length=")).unwrap().parse().unwrap();
    assert!((len - 0.575 * 1.16f64.sqrt()).abs() < 1e-12);
}

#[test]
fn usage_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "colour=red\n").unwrap();
    for args in [
        &["geodesic", "--weight", "teapot"][..],
        &["--config", "bad.cfg", "catalog"][..],
        &["figure", "nonexistent"][..],
        &["solve", "--res", "8"][..],
        &["verify", "--experiment", "nothing"][..],
    ] {
        let o = lgl(dir.path(), args);
        assert_eq!(o.status.code(), Some(EXIT_USAGE), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn verify_writes_report_under_env_out() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("from_env");
    let o = Command::new(env!("CARGO_BIN_EXE_lgl"))
        .current_dir(dir.path())
        .env("LGL_OUT", &out)
        .args(["verify", "--experiment", "thresholds"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert_eq!(stdout(&o).trim(), "thresholds: PASS");
    let csv = std::fs::read_to_string(out.join("verify_thresholds.csv")).unwrap();
    assert!(csv.starts_with("label,value,expected,tolerance,pass\n"));
    assert!(csv.lines().skip(1).all(|l| l.ends_with(",true")));
}

#[test]
fn flag_overrides_env_out() {
    let dir = tempfile::tempdir().unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_lgl"))
        .current_dir(dir.path())
        .env("LGL_OUT", dir.path().join("env"))
        .args(["geodesic", "--out", "flag"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(EXIT_OK));
    assert!(dir.path().join("flag/geodesic_constant.csv").exists());
    assert!(!dir.path().join("env").exists());
}

#[test]
fn solve_outputs_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["solve", "--weight", "heavy_diamond", "--alpha", "2", "--res", "64", "--levels", "41"];
    let mut runs = Vec::new();
    for sub in ["a", "b"] {
        let mut a = args.to_vec();
        a.extend(["--out", sub]);
        let o = lgl(dir.path(), &a);
        assert_eq!(o.status.code(), Some(EXIT_OK), "{}", String::from_utf8_lossy(&o.stderr));
        runs.push(
            ["_u.pgm", "_contours.svg", "_curves.csv"]
                .map(|suffix| std::fs::read(dir.path().join(sub).join(format!("heavy_diamond{suffix}"))).unwrap()),
        );
    }
    assert_eq!(runs[0], runs[1]);
    let pgm = String::from_utf8(runs[0][0].clone()).unwrap();
    assert!(pgm.starts_with("P2\n64 64\n65535\n"));
    let svg = String::from_utf8(runs[0][1].clone()).unwrap();
    assert_eq!(svg.matches("<path ").count(), 41);
}

fn arb_config() -> impl Strategy<Value = RunConfig> {
    let weights = prop::sample::select(vec![
        ("constant", None),
        ("heavy_diamond", Some(2.0)),
        ("heavy_disk", Some(2.5)),
        ("light_diamond_tight", Some(0.5)),
        ("lite_dmd_heavy_core", None),
    ]);
    let point = (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(x, y)| Point::new(x, y));
    (
        weights,
        64usize..=4096,
        16usize..=4001,
        0.0f64..=2.0,
        any::<u64>(),
        1usize..=100_000,
        point.clone(),
        point.clone(),
        prop::collection::vec(point, 0..4),
        prop::sample::select(Solver::ALL.to_vec()),
    )
        .prop_map(|((weight, alpha), res, levels, switch_level, seed, trials, from, to, via, solver)| RunConfig {
            weight: weight.into(),
            alpha,
            res,
            levels,
            switch_level,
            seed,
            trials,
            from,
            to,
            via,
            solver,
            ..RunConfig::default()
        })
}

proptest! {
    #[test]
    fn config_round_trips(cfg in arb_config()) {
        let text = cfg.serialize();
        prop_assert_eq!(RunConfig::parse(&text).unwrap(), cfg);
        for line in text.lines() {
            let key = line.split_once('=').unwrap().0;
            prop_assert!(KEYS.contains(&key));
        }
    }
}
