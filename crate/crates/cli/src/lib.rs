//! Command-line front end: configuration, file emitters and subcommands.

pub mod commands;
pub mod config;
pub mod render;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use lgl_core::{Error, Result};

use crate::commands::Outcome;
use crate::config::RunConfig;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_SOLVER: i32 = 3;

#[derive(Debug, Parser)]
#[command(name = "lgl", version, about = "Least-gradient solutions on the weighted unit disk")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List the weight catalog.
    Catalog,
    /// Shortest path between `from` and `to`.
    Geodesic,
    /// Stack level curves and write the heightmap, contours and curve table.
    Solve,
    /// Run verification suites.
    Verify,
    /// Reproduce one of the example figures.
    Figure { id: String },
}

/// Flags mirror the config keys and override the config file.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Config file with key=value lines.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    pub weight: Option<String>,
    #[arg(long, global = true)]
    pub alpha: Option<String>,
    #[arg(long, global = true)]
    pub res: Option<String>,
    #[arg(long, global = true)]
    pub levels: Option<String>,
    #[arg(long, global = true)]
    pub switch_level: Option<String>,
    #[arg(long, global = true)]
    pub out: Option<String>,
    #[arg(long, global = true)]
    pub experiment: Option<String>,
    #[arg(long, global = true)]
    pub seed: Option<String>,
    #[arg(long, global = true)]
    pub trials: Option<String>,
    /// Start point as x,y.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub from: Option<String>,
    /// End point as x,y.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub to: Option<String>,
    /// Intermediate points x,y;x,y for the polyline solver.
    #[arg(long, global = true, allow_hyphen_values = true)]
    pub via: Option<String>,
    /// auto, shoot, lattice, grid or polyline.
    #[arg(long, global = true)]
    pub solver: Option<String>,
}

impl Flags {
    fn pairs(&self) -> Vec<(&'static str, &Option<String>)> {
        vec![
            ("weight", &self.weight),
            ("alpha", &self.alpha),
            ("res", &self.res),
            ("levels", &self.levels),
            ("switch_level", &self.switch_level),
            ("out", &self.out),
            ("experiment", &self.experiment),
            ("seed", &self.seed),
            ("trials", &self.trials),
            ("from", &self.from),
            ("to", &self.to),
            ("via", &self.via),
            ("solver", &self.solver),
        ]
    }
}

/// Config file, then `LGL_OUT`, then flags.
pub fn resolve_config(flags: &Flags, env_out: Option<OsString>) -> Result<RunConfig> {
    let mut cfg = match &flags.config {
        Some(path) => RunConfig::parse(&std::fs::read_to_string(path)?)?,
        None => RunConfig::default(),
    };
    if let Some(dir) = env_out.filter(|d| !d.is_empty()) {
        cfg.out = PathBuf::from(dir);
    }
    for (key, value) in flags.pairs() {
        if let Some(v) = value {
            cfg.set(key, v)?;
        }
    }
    cfg.validate()?;
    Ok(cfg)
}

pub fn exit_code(result: &Result<Outcome>) -> i32 {
    match result {
        Ok(Outcome::Done) => EXIT_OK,
        Ok(Outcome::VerificationFailed) => EXIT_VERIFY_FAILED,
        Err(Error::InvalidInput(_) | Error::Config(_)) => EXIT_USAGE,
        Err(_) => EXIT_SOLVER,
    }
}

pub fn run(cli: &Cli, env_out: Option<OsString>, out: &mut dyn Write) -> Result<Outcome> {
    let cfg = resolve_config(&cli.flags, env_out)?;
    match &cli.command {
        Command::Catalog => commands::cmd_catalog(out),
        Command::Geodesic => commands::cmd_geodesic(&cfg, out),
        Command::Solve => commands::cmd_solve(&cfg, out),
        Command::Verify => commands::cmd_verify(&cfg, out),
        Command::Figure { id } => commands::cmd_figure(&cfg, id, out),
    }
}
