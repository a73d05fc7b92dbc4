//! One function per subcommand, each with a JSON config and flag overrides.

use std::fs;
use std::path::PathBuf;

use clap::Args;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::output::{fmt, Run};
use super::Context;
use crate::density::{
    density_condition_check, normal_cover_requirement, write_requirements, BudgetEntry, EigenvalueBudget,
    GrowthFunction,
};
use crate::error::{invalid, Error, Result};
use crate::geometry::{distance, inverse_ball_radius, PointH};
use crate::mixing::{
    concentration_fit, cutoff_locator, distance_histogram, histogram_geometry, iso_geometry,
    isoperimetric_check, CellPartition, Region, TvConfig, DEFAULT_START, MC_Y_CAP,
};
use crate::modular::cover::{reduce_gamma2, sheet_mixing_profile, CoverState};
use crate::modular::{
    closed_form_order, coset_index, max_base_distance, random_cover, CosetModQ, QuotientGeometry, QuotientPoint,
    RandomCover, MODULAR_AREA,
};
use crate::rng::walker_rng;
use crate::spectral::heat::{envelope_fit, mode, tail_fit};
use crate::spectral::{clt_constants, heat_radial_density, radial_mixture, spherical_principal};
use crate::torus::{no_cutoff_profile, torus_row, write_rows, TorusConfig};
use crate::walk::{
    clt_from_stats, sheet_profile, tails_from_stats, walk_discrete_with_trajectories, write_trajectories,
    SheetState, WalkConfig, DEFAULT_LAMBDAS,
};

fn load<C: DeserializeOwned + Default>(ctx: &Context) -> Result<C> {
    match &ctx.config {
        None => Ok(C::default()),
        Some(p) => {
            let text = fs::read_to_string(p).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
            serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))
        }
    }
}

macro_rules! set {
    ($cfg:ident, $args:ident: $($f:ident),+) => {
        $( if let Some(v) = $args.$f.clone() { $cfg.$f = v; } )+
    };
}

fn seed(ctx: &Context, s: &mut u64) {
    if let Some(v) = ctx.seed {
        *s = v;
    }
}

fn checked(p: PointH) -> Result<PointH> {
    PointH::new(p.x(), p.y())
}

/// `R_X` from the closed-form area of `X_q`.
fn r_x_of(q: u32) -> Result<f64> {
    inverse_ball_radius(closed_form_order(q) as f64 * MODULAR_AREA)
}

#[derive(Debug, Args)]
pub struct ConstantsArgs {
    /// Step length.
    #[arg(long)]
    pub r1: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConstantsConfig {
    pub r1: f64,
}

impl Default for ConstantsConfig {
    fn default() -> Self {
        ConstantsConfig { r1: 1.0 }
    }
}

pub fn constants(ctx: &Context, a: &ConstantsArgs) -> Result<Value> {
    let mut cfg: ConstantsConfig = load(ctx)?;
    set!(cfg, a: r1);
    let mut run = Run::start("constants", &ctx.out, &cfg)?;
    let c = clt_constants(cfg.r1)?;
    run.csv("", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["r1", "alpha", "sigma2"])?;
        w.write_record([fmt(c.r1), fmt(c.alpha), fmt(c.sigma2)])?;
        w.flush()?;
        Ok(())
    })?;
    run.finish(&json!({ "alpha": c.alpha, "sigma2": c.sigma2 }))
}

#[derive(Debug, Args)]
pub struct SphericalArgs {
    /// Radius.
    #[arg(long)]
    pub r: Option<f64>,
    /// Largest spectral parameter.
    #[arg(long)]
    pub s_max: Option<f64>,
    /// Grid step in s.
    #[arg(long)]
    pub s_step: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SphericalConfig {
    pub r: f64,
    pub s_max: f64,
    pub s_step: f64,
    /// Slack allowed above the bound before a point counts as a violation.
    pub tolerance: f64,
}

impl Default for SphericalConfig {
    fn default() -> Self {
        SphericalConfig { r: 2.0, s_max: 40.0, s_step: 0.05, tolerance: 1e-6 }
    }
}

pub fn spherical(ctx: &Context, a: &SphericalArgs) -> Result<Value> {
    let mut cfg: SphericalConfig = load(ctx)?;
    set!(cfg, a: r, s_max, s_step);
    if !(cfg.s_step > 0.0) || !(cfg.s_max >= 0.0) {
        return Err(invalid("need s_step > 0 and s_max ≥ 0"));
    }
    let mut run = Run::start("spherical", &ctx.out, &cfg)?;
    let bound = crate::spectral::hc_bound(cfg.r, 2.0);
    let n = (cfg.s_max / cfg.s_step + 1e-9).floor() as usize;
    let rows = (0..=n)
        .map(|i| {
            let s = i as f64 * cfg.s_step;
            spherical_principal(s, cfg.r).map(|v| (s, v))
        })
        .collect::<Result<Vec<_>>>()?;
    let violations = rows.iter().filter(|(_, v)| v.abs() > bound + cfg.tolerance).count();
    let max_ratio = rows.iter().map(|(_, v)| v.abs() / bound).fold(0.0, f64::max);
    run.csv("", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["s", "phi", "bound"])?;
        for (s, v) in &rows {
            w.write_record([fmt(*s), fmt(*v), fmt(bound)])?;
        }
        w.flush()?;
        Ok(())
    })?;
    run.finish(&json!({ "points": rows.len(), "bound": bound, "violations": violations, "max_ratio": max_ratio }))
}

#[derive(Debug, Args)]
pub struct MixtureArgs {
    /// Number of steps.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub r1: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MixtureConfig {
    pub k: usize,
    pub r1: f64,
    /// Radial grid step; automatic when absent.
    pub step: Option<f64>,
}

impl Default for MixtureConfig {
    fn default() -> Self {
        MixtureConfig { k: 3, r1: 1.0, step: None }
    }
}

pub fn mixture(ctx: &Context, a: &MixtureArgs) -> Result<Value> {
    let mut cfg: MixtureConfig = load(ctx)?;
    set!(cfg, a: k, r1);
    let mut run = Run::start("mixture", &ctx.out, &cfg)?;
    let m = radial_mixture(cfg.k, cfg.r1, cfg.step)?;
    run.csv("", |b| m.write_csv(b))?;
    run.finish(&json!({
        "r_max": m.r_max(),
        "cells": m.n_cells(),
        "mass": m.mass(),
        "mean": m.mean(),
    }))
}

#[derive(Debug, Args)]
pub struct HeatArgs {
    /// Time.
    #[arg(long)]
    pub t: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HeatConfig {
    pub t: f64,
    pub step: Option<f64>,
    /// Tail levels: mass of `|r - t| ≥ λ √t`.
    pub lambdas: Vec<f64>,
}

impl Default for HeatConfig {
    fn default() -> Self {
        HeatConfig { t: 1.0, step: None, lambdas: vec![0.5, 1.0, 1.5, 2.0, 2.5, 3.0] }
    }
}

pub fn heat(ctx: &Context, a: &HeatArgs) -> Result<Value> {
    let mut cfg: HeatConfig = load(ctx)?;
    set!(cfg, a: t);
    let mut run = Run::start("heat", &ctx.out, &cfg)?;
    let law = heat_radial_density(cfg.t, cfg.step)?;
    let fit = tail_fit(&law, &cfg.lambdas)?;
    run.csv("", |b| law.grid.write_csv(b))?;
    run.finish(&json!({
        "raw_defect": law.raw_defect,
        "mode": mode(&law),
        "mean": law.grid.mean(),
        "envelope": envelope_fit(&law),
        "tail_slope": fit.slope,
        "tail_r2": fit.r2,
    }))
}

#[derive(Debug, Args)]
pub struct WalkArgs {
    #[arg(long)]
    pub r1: Option<f64>,
    /// Steps per walker.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub n_walkers: Option<usize>,
    /// Dump trajectories of the first N walkers.
    #[arg(long)]
    pub record: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkCmdConfig {
    pub r1: f64,
    pub k: usize,
    pub n_walkers: usize,
    pub seed: u64,
    pub z0: PointH,
    pub record: usize,
    pub lambdas: Vec<f64>,
}

impl Default for WalkCmdConfig {
    fn default() -> Self {
        WalkCmdConfig {
            r1: 1.0,
            k: 100,
            n_walkers: 10_000,
            seed: 0,
            z0: PointH::i(),
            record: 0,
            lambdas: DEFAULT_LAMBDAS.to_vec(),
        }
    }
}

pub fn walk(ctx: &Context, a: &WalkArgs) -> Result<Value> {
    let mut cfg: WalkCmdConfig = load(ctx)?;
    set!(cfg, a: r1, k, n_walkers, record);
    seed(ctx, &mut cfg.seed);
    let mut run = Run::start("walk", &ctx.out, &cfg)?;
    let mut wc = WalkConfig::new(cfg.r1, cfg.k, cfg.n_walkers, cfg.seed);
    wc.z0 = checked(cfg.z0)?;
    let (stats, traj) = walk_discrete_with_trajectories(&wc, cfg.record)?;
    let clt = clt_from_stats(&stats, clt_constants(cfg.r1)?);
    let tails = tails_from_stats(&stats, &cfg.lambdas);
    run.csv("", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["step", "ln_y_mean", "ln_y_var", "dist_mean", "dist_var", "x2_mean", "x2_var"])?;
        for s in &stats.steps {
            w.write_record([
                s.step.to_string(),
                fmt(s.ln_y.mean),
                fmt(s.ln_y.var),
                fmt(s.dist.mean),
                fmt(s.dist.var),
                fmt(s.x2.mean),
                fmt(s.x2.var),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    if cfg.record > 0 {
        run.csv("trajectories", |b| write_trajectories(&traj, b))?;
    }
    let (tails, tails_error) = match tails {
        Ok(t) => (Some(t), None),
        Err(e) => (None, Some(e.to_string())),
    };
    run.finish(&json!({
        "dist_quantiles": stats.dist_quantiles,
        "clt": clt,
        "tails": tails,
        "tails_error": tails_error,
    }))
}

#[derive(Debug, Args)]
pub struct TvArgs {
    /// Level of the congruence cover.
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub n_walkers: Option<usize>,
    /// Required injectivity radius at the start.
    #[arg(long)]
    pub r0: Option<f64>,
    /// Largest cell measure as a fraction of the area.
    #[arg(long)]
    pub resolution: Option<f64>,
}

pub fn tv(ctx: &Context, a: &TvArgs) -> Result<Value> {
    let mut cfg: TvConfig = load(ctx)?;
    set!(cfg, a: q, r1, k_max, n_walkers, r0, resolution);
    seed(ctx, &mut cfg.seed);
    cfg.x0 = checked(cfg.x0)?;
    let mut run = Run::start("tv", &ctx.out, &cfg)?;
    let prof = crate::mixing::tv_profile(&cfg)?;
    run.csv("", |b| prof.write_csv(b))?;
    let alpha = clt_constants(cfg.r1)?.alpha;
    let r_x = inverse_ball_radius(prof.area)?;
    let (cutoff, cutoff_error) = match cutoff_locator(&prof.tv(), alpha * cfg.r1, r_x) {
        Ok(c) => (Some(c), None),
        Err(e) => (None, Some(e.to_string())),
    };
    run.finish(&json!({
        "degree": prof.degree,
        "area": prof.area,
        "r_x": r_x,
        "alpha": alpha,
        "injectivity_radius": prof.injectivity_radius,
        "cells_per_sheet": prof.cells_per_sheet,
        "partition_dims": prof.partition_dims,
        "max_cell_fraction": prof.max_cell_fraction,
        "starved_bins": prof.starved_bins,
        "cutoff": cutoff,
        "cutoff_error": cutoff_error,
    }))
}

#[derive(Debug, Args)]
pub struct DistancesArgs {
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Distance horizon; defaults to R_X + 3 ln R_X + 1.
    #[arg(long)]
    pub r_max: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistancesConfig {
    pub q: u32,
    pub x0: PointH,
    pub n_samples: usize,
    pub r_max: Option<f64>,
    pub gammas: Vec<f64>,
    pub radii: Vec<f64>,
    pub seed: u64,
}

impl Default for DistancesConfig {
    fn default() -> Self {
        DistancesConfig {
            q: 5,
            x0: DEFAULT_START,
            n_samples: 10_000,
            r_max: None,
            gammas: vec![0.5, 1.0, 2.0],
            radii: vec![0.5, 1.0, 1.5, 2.0, 2.5],
            seed: 0,
        }
    }
}

fn sample_distances(
    q: u32,
    x0: PointH,
    n: usize,
    r_max: Option<f64>,
    gammas: &[f64],
    radii: &[f64],
    seed: u64,
) -> Result<crate::mixing::DistanceHistogram> {
    let x0 = checked(x0)?;
    let r_max = match r_max {
        Some(r) => r,
        None => {
            let r_x = r_x_of(q)?;
            r_x + 3.0 * r_x.ln().max(0.0) + 1.0
        }
    };
    let geo = histogram_geometry(q, &x0, r_max)?;
    let start = QuotientPoint::from_lift(&x0, CosetModQ::identity(q))?;
    distance_histogram(&geo, &start, n, r_max, gammas, radii, seed)
}

pub fn distances(ctx: &Context, a: &DistancesArgs) -> Result<Value> {
    let mut cfg: DistancesConfig = load(ctx)?;
    set!(cfg, a: q, n_samples);
    if a.r_max.is_some() {
        cfg.r_max = a.r_max;
    }
    seed(ctx, &mut cfg.seed);
    let mut run = Run::start("distances", &ctx.out, &cfg)?;
    let h = sample_distances(cfg.q, cfg.x0, cfg.n_samples, cfg.r_max, &cfg.gammas, &cfg.radii, cfg.seed)?;
    run.csv("", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["sample", "distance"])?;
        for (i, d) in h.samples.iter().enumerate() {
            // beyond r_max: left empty
            w.write_record([i.to_string(), d.map(fmt).unwrap_or_default()])?;
        }
        w.flush()?;
        Ok(())
    })?;
    let beyond = h.samples.iter().filter(|d| d.is_none()).count();
    run.finish(&json!({ "histogram": h, "beyond_r_max": beyond }))
}

#[derive(Debug, Args)]
pub struct ConcentrationArgs {
    #[arg(long)]
    pub q: Option<u32>,
    #[arg(long)]
    pub n_samples: Option<usize>,
    /// Spacing of the γ grid.
    #[arg(long)]
    pub step: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConcentrationConfig {
    pub q: u32,
    pub x0: PointH,
    pub n_samples: usize,
    pub step: f64,
    pub r_max: Option<f64>,
    pub seed: u64,
}

impl Default for ConcentrationConfig {
    fn default() -> Self {
        ConcentrationConfig { q: 5, x0: DEFAULT_START, n_samples: 20_000, step: 0.25, r_max: None, seed: 0 }
    }
}

pub fn concentration(ctx: &Context, a: &ConcentrationArgs) -> Result<Value> {
    let mut cfg: ConcentrationConfig = load(ctx)?;
    set!(cfg, a: q, n_samples, step);
    seed(ctx, &mut cfg.seed);
    let mut run = Run::start("concentration", &ctx.out, &cfg)?;
    let h = sample_distances(cfg.q, cfg.x0, cfg.n_samples, cfg.r_max, &[], &[], cfg.seed)?;
    let rep = concentration_fit(&h.values(), cfg.step, Some(h.r_x))?;
    run.csv("", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["gamma", "tail"])?;
        for (g, p) in &rep.tail {
            w.write_record([fmt(*g), fmt(*p)])?;
        }
        w.flush()?;
        Ok(())
    })?;
    run.finish(&rep)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum RegionSpec {
    Everything,
    /// Ball around a lift of the centre on the identity sheet.
    Ball { center: PointH, radius: f64 },
    /// `(sheet, cell)` pairs of an `nx × nu` partition capped at `y_cap`.
    Cells { y_cap: f64, nx: usize, nu: usize, cells: Vec<(usize, usize)> },
}

#[derive(Debug, Args)]
pub struct IsoArgs {
    #[arg(long)]
    pub q: Option<u32>,
    /// Dilation radii.
    #[arg(long, num_args = 1..)]
    pub r: Option<Vec<f64>>,
    /// Spectral exponent.
    #[arg(long)]
    pub p: Option<f64>,
    /// Treat p as certified for this cover.
    #[arg(long)]
    pub certified: Option<bool>,
    #[arg(long)]
    pub n_mc: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct IsoConfig {
    pub q: u32,
    pub r: Vec<f64>,
    pub p: f64,
    pub certified: bool,
    pub region: RegionSpec,
    pub n_mc: usize,
    pub seed: u64,
}

impl Default for IsoConfig {
    fn default() -> Self {
        IsoConfig {
            q: 3,
            r: vec![0.5, 1.0, 2.0],
            p: 4.0,
            certified: false,
            region: RegionSpec::Ball { center: DEFAULT_START, radius: 0.5 },
            n_mc: 10_000,
            seed: 0,
        }
    }
}

pub fn isoperimetry(ctx: &Context, a: &IsoArgs) -> Result<Value> {
    let mut cfg: IsoConfig = load(ctx)?;
    set!(cfg, a: q, r, p, certified, n_mc);
    seed(ctx, &mut cfg.seed);
    let mut run = Run::start("isoperimetry", &ctx.out, &cfg)?;
    let r_top = cfg.r.iter().cloned().fold(0.0, f64::max);
    let (geo, region) = match &cfg.region {
        RegionSpec::Everything => (iso_geometry(cfg.q, r_top, 1.0)?, Region::Everything),
        RegionSpec::Ball { center, radius } => {
            let c = checked(*center)?;
            let bound = r_top + radius + distance(&PointH::i(), &c) + max_base_distance(MC_Y_CAP) + 0.5;
            let center = QuotientPoint::from_lift(&c, CosetModQ::identity(cfg.q))?;
            (QuotientGeometry::with_bound(cfg.q, bound)?, Region::Ball { center, radius: *radius })
        }
        RegionSpec::Cells { y_cap, nx, nu, cells } => {
            let partition = CellPartition::new(*y_cap, *nx, *nu)?;
            let geo = iso_geometry(cfg.q, r_top, *y_cap)?;
            if let Some(bad) = cells.iter().find(|(s, c)| *s >= geo.degree() || *c >= partition.len()) {
                return Err(invalid(format!("cell {bad:?} outside {} sheets × {} cells", geo.degree(), partition.len())));
            }
            (geo, Region::Cells { partition, cells: cells.clone() })
        }
    };
    let reports = cfg
        .r
        .iter()
        .map(|&r| isoperimetric_check(&geo, &region, r, cfg.p, cfg.certified, cfg.n_mc, cfg.seed))
        .collect::<Result<Vec<_>>>()?;
    run.csv("", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["r", "p", "kappa", "c", "c_prime_lo", "c_prime_hi", "bound", "verdict"])?;
        for x in &reports {
            let v = serde_json::to_value(x.verdict)?;
            w.write_record([
                fmt(x.r),
                fmt(x.p),
                fmt(x.kappa),
                fmt(x.c),
                fmt(x.c_prime_lo),
                fmt(x.c_prime_hi),
                fmt(x.bound),
                v.as_str().unwrap_or_default().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    })?;
    run.finish(&reports)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BudgetFamily {
    /// `m(p) = round(N^{2/p})` on the grid `ps`.
    SyntheticA1,
    /// All of `M = N` at the last grid point.
    Uniform,
    /// One budget file (a JSON list of `{p, m}`) per degree.
    Files(Vec<BudgetFile>),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetFile {
    pub n: f64,
    pub path: PathBuf,
}

#[derive(Debug, Args)]
pub struct DensityArgs {
    /// Cover degrees for synthetic families.
    #[arg(long, num_args = 1..)]
    pub ns: Option<Vec<f64>>,
    /// Slope of the linear growth function g(R) = s R.
    #[arg(long)]
    pub growth: Option<f64>,
    /// Budget file, with --degree; replaces the synthetic family.
    #[arg(long, requires = "degree")]
    pub budget: Option<PathBuf>,
    /// Cover degree N the budget file belongs to.
    #[arg(long)]
    pub degree: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DensityConfig {
    pub family: BudgetFamily,
    pub ns: Vec<f64>,
    pub ps: Vec<f64>,
    pub growth: GrowthFunction,
    /// Density condition `M(p) ≤ C N^{1 - A(p-2)/p + ε}`.
    pub a: f64,
    pub eps: f64,
    pub c: f64,
}

impl Default for DensityConfig {
    fn default() -> Self {
        DensityConfig {
            family: BudgetFamily::SyntheticA1,
            ns: vec![1e3, 1e4, 1e5, 1e6],
            ps: vec![2.5, 3.0, 4.0, 6.0, 8.0],
            growth: GrowthFunction::linear(1.2),
            a: 1.0,
            eps: 0.5,
            c: 1.0,
        }
    }
}

pub fn density(ctx: &Context, a: &DensityArgs) -> Result<Value> {
    let mut cfg: DensityConfig = load(ctx)?;
    set!(cfg, a: ns);
    if let Some(s) = a.growth {
        cfg.growth = GrowthFunction::linear(s);
    }
    if let (Some(path), Some(n)) = (&a.budget, a.degree) {
        cfg.family = BudgetFamily::Files(vec![BudgetFile { n, path: path.clone() }]);
    }
    let mut run = Run::start("density", &ctx.out, &cfg)?;
    let budgets = match &cfg.family {
        BudgetFamily::SyntheticA1 => {
            cfg.ns.iter().map(|&n| EigenvalueBudget::synthetic_a1(n, &cfg.ps)).collect::<Result<Vec<_>>>()?
        }
        BudgetFamily::Uniform => {
            cfg.ns.iter().map(|&n| EigenvalueBudget::uniform(n, &cfg.ps)).collect::<Result<Vec<_>>>()?
        }
        BudgetFamily::Files(files) => files
            .iter()
            .map(|f| {
                let text = fs::read_to_string(&f.path)?;
                let entries: Vec<BudgetEntry> = serde_json::from_str(&text)
                    .map_err(|e| Error::Config(format!("{}: {e}", f.path.display())))?;
                EigenvalueBudget::new(f.n, entries, f.path.display().to_string())
            })
            .collect::<Result<Vec<_>>>()?,
    };
    let checks = budgets
        .iter()
        .map(|b| density_condition_check(b, cfg.a, cfg.eps, cfg.c))
        .collect::<Result<Vec<_>>>()?;
    let req = if budgets.len() >= 2 { Some(normal_cover_requirement(&budgets, &cfg.growth)?) } else { None };
    match &req {
        Some(r) => run.csv("", |b| write_requirements(r, b))?,
        None => {
            let row = crate::density::requirement_row(&budgets[0], &cfg.growth)?;
            run.csv("", |b| {
                let mut w = csv::Writer::from_writer(b);
                w.write_record(["N_q", "req0", "req_integral", "req_limit"])?;
                w.write_record([fmt(row.n), fmt(row.req0), fmt(row.req_integral), fmt(row.req_limit)])?;
                w.flush()?;
                Ok(())
            })?
        }
    }
    run.finish(&json!({ "density_checks": checks, "requirements": req }))
}

#[derive(Debug, Args)]
pub struct TorusArgs {
    /// Torus scales.
    #[arg(long, num_args = 1..)]
    pub lambda: Option<Vec<f64>>,
    /// Times.
    #[arg(long, num_args = 1..)]
    pub t: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TorusCmdConfig {
    pub lambda: Vec<f64>,
    pub t: Vec<f64>,
    /// Levels `e^{-T}` for the no-cutoff table; skipped when empty.
    pub big_t: Vec<f64>,
}

impl Default for TorusCmdConfig {
    fn default() -> Self {
        TorusCmdConfig { lambda: vec![1.0], t: vec![5.0], big_t: Vec::new() }
    }
}

pub fn torus(ctx: &Context, a: &TorusArgs) -> Result<Value> {
    let mut cfg: TorusCmdConfig = load(ctx)?;
    set!(cfg, a: lambda, t);
    let mut run = Run::start("torus", &ctx.out, &cfg)?;
    let mut rows = Vec::new();
    for &l in &cfg.lambda {
        for &t in &cfg.t {
            rows.push(torus_row(&TorusConfig::new(l, t)?)?);
        }
    }
    run.csv("", |b| write_rows(&rows, b))?;
    let no_cutoff = if cfg.big_t.is_empty() { None } else { Some(no_cutoff_profile(&cfg.lambda, &cfg.big_t)?) };
    if let Some(nc) = &no_cutoff {
        run.csv("no_cutoff", |b| {
            let mut w = csv::Writer::from_writer(b);
            w.write_record(["lambda", "big_t", "t", "ratio"])?;
            for r in &nc.rows {
                w.write_record([fmt(r.lambda), fmt(r.big_t), fmt(r.t), fmt(r.ratio)])?;
            }
            w.flush()?;
            Ok(())
        })?;
    }
    run.finish(&json!({
        "all_inside": rows.iter().all(|r| r.inside()),
        "rows": rows,
        "no_cutoff": no_cutoff,
    }))
}

/// A cover description: a congruence level, or two permutations (1-based)
/// for the generators of the level-2 lattice.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoverSpec {
    Congruence(CongruenceSpec),
    Permutation(PermutationSpec),
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CongruenceSpec {
    pub q: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PermutationSpec {
    pub n: usize,
    #[serde(rename = "sigma_A")]
    pub sigma_a: Vec<usize>,
    #[serde(rename = "sigma_B")]
    pub sigma_b: Vec<usize>,
}

impl PermutationSpec {
    pub fn to_cover(&self) -> Result<RandomCover> {
        let zero = |p: &[usize], name: &str| -> Result<Vec<usize>> {
            if p.len() != self.n {
                return Err(Error::Config(format!("{name} has {} entries, expected n = {}", p.len(), self.n)));
            }
            p.iter()
                .map(|&v| v.checked_sub(1).ok_or_else(|| Error::Config(format!("{name} is 1-based, found 0"))))
                .collect()
        };
        RandomCover::new(zero(&self.sigma_a, "sigma_A")?, zero(&self.sigma_b, "sigma_B")?)
    }

    pub fn from_cover(c: &RandomCover) -> Self {
        let one = |p: &[usize]| p.iter().map(|v| v + 1).collect();
        PermutationSpec { n: c.n(), sigma_a: one(c.sigma_a()), sigma_b: one(c.sigma_b()) }
    }
}

#[derive(Debug, Args)]
pub struct CoverArgs {
    /// Congruence cover of this level.
    #[arg(long, conflicts_with_all = ["cover_file", "random"])]
    pub q: Option<u32>,
    /// Cover description file: {"q": ..} or {"n": .., "sigma_A": [..], "sigma_B": [..]}.
    #[arg(long, conflicts_with = "random")]
    pub cover_file: Option<PathBuf>,
    /// Draw a random degree-N cover from the seed; the drawn permutations
    /// are written into the effective config.
    #[arg(long)]
    pub random: Option<usize>,
    #[arg(long)]
    pub r1: Option<f64>,
    #[arg(long)]
    pub k_max: Option<usize>,
    #[arg(long)]
    pub n_walkers: Option<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CoverConfig {
    pub cover: CoverSpec,
    pub x0: PointH,
    pub r1: f64,
    pub k_max: usize,
    pub n_walkers: usize,
    pub seed: u64,
}

impl Default for CoverConfig {
    fn default() -> Self {
        CoverConfig {
            cover: CoverSpec::Congruence(CongruenceSpec { q: 3 }),
            x0: DEFAULT_START,
            r1: 1.0,
            k_max: 20,
            n_walkers: 10_000,
            seed: 0,
        }
    }
}

pub fn cover(ctx: &Context, a: &CoverArgs) -> Result<Value> {
    let mut cfg: CoverConfig = load(ctx)?;
    set!(cfg, a: r1, k_max, n_walkers);
    seed(ctx, &mut cfg.seed);
    if let Some(q) = a.q {
        cfg.cover = CoverSpec::Congruence(CongruenceSpec { q });
    }
    if let Some(p) = &a.cover_file {
        let text = fs::read_to_string(p)?;
        cfg.cover = serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", p.display())))?;
    }
    if let Some(n) = a.random {
        // stream past every walker index
        let c = random_cover(n, &mut walker_rng(cfg.seed, u64::MAX))?;
        cfg.cover = CoverSpec::Permutation(PermutationSpec::from_cover(&c));
    }
    let x0 = checked(cfg.x0)?;
    let mut run = Run::start("cover", &ctx.out, &cfg)?;
    let (degree, transitive, profile) = match &cfg.cover {
        CoverSpec::Congruence(c) => {
            let table = coset_index(c.q)?;
            let p = QuotientPoint::from_lift(&x0, CosetModQ::identity(c.q))?;
            let start = SheetState::from_point(&table, &p);
            let prof = sheet_profile(&table, &start, cfg.r1, cfg.k_max, cfg.n_walkers, cfg.seed)?;
            (table.len(), true, prof)
        }
        CoverSpec::Permutation(s) => {
            let c = s.to_cover()?;
            let mut word = Vec::new();
            let z = reduce_gamma2(&x0, &mut word)?;
            let start = CoverState { z, sheet: 0 };
            let prof = sheet_mixing_profile(&c, start, cfg.r1, cfg.k_max, cfg.n_walkers, cfg.seed)?;
            (c.n(), c.is_transitive(), prof)
        }
    };
    run.csv("", |b| {
        let mut w = csv::Writer::from_writer(b);
        w.write_record(["k", "tv"])?;
        for (k, v) in profile.iter().enumerate() {
            w.write_record([k.to_string(), fmt(*v)])?;
        }
        w.flush()?;
        Ok(())
    })?;
    run.finish(&json!({
        "degree": degree,
        "transitive": transitive,
        "final_tv": profile.last(),
        // sampling floor of the plug-in TV for a uniform law
        "noise_floor": (2.0 * degree as f64 / (std::f64::consts::PI * cfg.n_walkers as f64)).sqrt(),
    }))
}
