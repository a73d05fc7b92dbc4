//! The `hypercut` experiment harness.
//!
//! Every subcommand reads an optional JSON config (unknown keys are
//! rejected), applies command-line overrides, and writes into `--out`:
//! `<cmd>.config.json` (the effective config, re-runnable with `--config`),
//! `<cmd>.json` (version, config hash, wall time, results) and any CSV
//! tables. CSV bodies depend only on the config and seed.

mod commands;
mod output;

use std::path::PathBuf;

use clap::{Parser, Subcommand};

pub use commands::*;
pub use output::{config_hash, VERSION};

#[derive(Debug, Parser)]
#[command(name = "hypercut", version, about = "Hyperbolic random walks, spectral bounds and cutoff experiments")]
pub struct Cli {
    /// JSON config for the subcommand; flags override its values.
    #[arg(long, global = true, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Master seed for simulations.
    #[arg(long, global = true, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads (0 or unset: all cores). Falls back to HYPERCUT_WORKERS.
    #[arg(long, global = true, env = "HYPERCUT_WORKERS", value_name = "N")]
    pub workers: Option<usize>,
    /// Output directory.
    #[arg(long, global = true, default_value = "hypercut-out", value_name = "DIR")]
    pub out: PathBuf,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Drift α and variance σ² of ln Im z per step.
    Constants(ConstantsArgs),
    /// Principal-series spherical function against its bound.
    Spherical(SphericalArgs),
    /// Radial law of the k-step walk.
    Mixture(MixtureArgs),
    /// Radial heat kernel, envelope and tails.
    Heat(HeatArgs),
    /// Step-walk ensemble with CLT and tail checks.
    Walk(WalkArgs),
    /// Total-variation profile on X_q and the cutoff table.
    Tv(TvArgs),
    /// Distances from a base point to uniform points of X_q.
    Distances(DistancesArgs),
    /// Concentration of distance around its median.
    Concentration(ConcentrationArgs),
    /// Dilation inequality for a union of cells.
    Isoperimetry(IsoArgs),
    /// Density condition and cover-family requirements for budgets.
    Density(DensityArgs),
    /// Flat-torus heat kernel distances and the no-cutoff table.
    Torus(TorusArgs),
    /// Sheet mixing on a congruence or permutation cover.
    Cover(CoverArgs),
}

/// Runs the harness on `argv` (program name first) and returns the exit
/// code: 0 success, 1 usage, 2 config, 3 capacity, 4 numeric.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, true)
}

/// Like [`run`], but the report is only written to the output directory.
pub fn run_quiet<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    run_with(argv, false)
}

fn run_with<I, T>(argv: I, print: bool) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let workers = cli.workers.unwrap_or(0);
    match crate::rng::with_workers(workers, || dispatch(&cli)).and_then(|r| r) {
        Ok(report) => {
            if print {
                println!("{}", serde_json::to_string_pretty(&report).unwrap_or_default());
            }
            0
        }
        Err(e) => {
            eprintln!("hypercut: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> crate::Result<serde_json::Value> {
    let ctx = Context { config: cli.config.clone(), seed: cli.seed, out: cli.out.clone() };
    match &cli.command {
        Command::Constants(a) => constants(&ctx, a),
        Command::Spherical(a) => spherical(&ctx, a),
        Command::Mixture(a) => mixture(&ctx, a),
        Command::Heat(a) => heat(&ctx, a),
        Command::Walk(a) => walk(&ctx, a),
        Command::Tv(a) => tv(&ctx, a),
        Command::Distances(a) => distances(&ctx, a),
        Command::Concentration(a) => concentration(&ctx, a),
        Command::Isoperimetry(a) => isoperimetry(&ctx, a),
        Command::Density(a) => density(&ctx, a),
        Command::Torus(a) => torus(&ctx, a),
        Command::Cover(a) => cover(&ctx, a),
    }
}

/// Options shared by all subcommands.
pub struct Context {
    pub config: Option<PathBuf>,
    pub seed: Option<u64>,
    pub out: PathBuf,
}
