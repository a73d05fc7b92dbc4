//! Empirical checks of the CLT and the three tail estimates.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::spectral::{clt_constants, CltConstants};
use crate::stats::{anderson_darling_normal, linear_fit, mean, variance, AD_CRITICAL_1PCT};

use super::discrete::{walk_discrete, WalkConfig, WalkStats};

pub const MIN_CLT_STEPS: usize = 50;
pub const MIN_CLT_WALKERS: usize = 10_000;
/// Below this step length the tail constants degenerate.
pub const MIN_TAIL_STEP: f64 = 0.05;

#[derive(Debug, Clone, Serialize)]
pub struct CltReport {
    pub constants: CltConstants,
    pub skipped: Option<String>,
    /// `A²` of the standardized `-ln y_k`.
    pub anderson_darling: f64,
    pub normal_ok: bool,
    /// `mean(-ln y_k)/k` and its allowed deviation from `α r1`.
    pub mean_per_step: f64,
    pub mean_tolerance: f64,
    pub mean_ok: bool,
    /// Sample variance of `ln y_k / (r1 √k)`.
    pub scaled_variance: f64,
    pub variance_ok: bool,
    pub pass: bool,
}

fn skipped(c: CltConstants, why: String) -> CltReport {
    CltReport {
        constants: c,
        skipped: Some(why),
        anderson_darling: f64::NAN,
        normal_ok: false,
        mean_per_step: f64::NAN,
        mean_tolerance: f64::NAN,
        mean_ok: false,
        scaled_variance: f64::NAN,
        variance_ok: false,
        pass: false,
    }
}

/// Runs the walk and compares `ln y_k` against `N(-α r1 k, σ² r1² k)`.
pub fn clt_check(cfg: &WalkConfig) -> Result<CltReport> {
    let c = clt_constants(cfg.r1)?;
    if cfg.k < MIN_CLT_STEPS || cfg.n_walkers < MIN_CLT_WALKERS {
        return Ok(skipped(
            c,
            format!(
                "need k >= {MIN_CLT_STEPS} and n >= {MIN_CLT_WALKERS}, got k = {}, n = {}",
                cfg.k, cfg.n_walkers
            ),
        ));
    }
    Ok(clt_from_stats(&walk_discrete(cfg)?, c))
}

pub fn clt_from_stats(stats: &WalkStats, c: CltConstants) -> CltReport {
    let cfg = &stats.config;
    let (k, n, r1) = (cfg.k as f64, cfg.n_walkers as f64, cfg.r1);
    let z: Vec<f64> = stats
        .final_ln_y
        .iter()
        .map(|l| (-l / r1 - k * c.alpha) / (k * c.sigma2).sqrt())
        .collect();
    let ad = anderson_darling_normal(&z, 0.0, 1.0);
    let mean_per_step = -mean(&stats.final_ln_y) / k;
    let mean_tolerance = 3.0 * c.sigma2.sqrt() * r1 / (k * n).sqrt();
    let scaled: Vec<f64> = stats.final_ln_y.iter().map(|l| l / (r1 * k.sqrt())).collect();
    let scaled_variance = variance(&scaled);
    let normal_ok = ad < AD_CRITICAL_1PCT;
    let mean_ok = (mean_per_step - c.alpha * r1).abs() <= mean_tolerance;
    let variance_ok = (scaled_variance / c.sigma2 - 1.0).abs() <= 0.05;
    CltReport {
        constants: c,
        skipped: None,
        anderson_darling: ad,
        normal_ok,
        mean_per_step,
        mean_tolerance,
        mean_ok,
        scaled_variance,
        variance_ok,
        pass: normal_ok && mean_ok && variance_ok,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TailFamily {
    /// `|ln y_k + α r1 k| ≥ λ r1 √k`
    LnY,
    /// `x_k² ≥ exp(λ r1 √k)`
    XSquared,
    /// `|d(z_k, z_0) - α r1 k| ≥ λ √k`
    Distance,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailReport {
    pub family: TailFamily,
    pub lambdas: Vec<f64>,
    pub counts: Vec<u64>,
    pub probabilities: Vec<f64>,
    /// Grid points with zero exceedances, left out of the fit.
    pub censored: Vec<f64>,
    pub slope: f64,
    pub r2: f64,
    /// `-slope`, so the tail is roughly `e^{-c λ²}`.
    pub c: f64,
    /// The same data fitted against `λ` instead of `λ²`; the `x²` family
    /// is exponential rather than Gaussian in `λ`, and this shows it.
    pub slope_linear: f64,
    pub r2_linear: f64,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct TailChecks {
    pub constants: CltConstants,
    pub families: Vec<TailReport>,
    pub pass: bool,
}

pub const DEFAULT_LAMBDAS: [f64; 8] = [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 2.0, 2.5];

pub fn tail_checks(cfg: &WalkConfig, lambdas: &[f64]) -> Result<TailChecks> {
    if cfg.r1 < MIN_TAIL_STEP {
        return Err(Error::InvalidArgument(format!(
            "tail constants are meaningless for r1 < {MIN_TAIL_STEP}"
        )));
    }
    if cfg.k < MIN_CLT_STEPS || cfg.n_walkers < MIN_CLT_WALKERS {
        return Err(Error::Insufficient(format!(
            "need k >= {MIN_CLT_STEPS} and n >= {MIN_CLT_WALKERS}"
        )));
    }
    let stats = walk_discrete(cfg)?;
    tails_from_stats(&stats, lambdas)
}

pub fn tails_from_stats(stats: &WalkStats, lambdas: &[f64]) -> Result<TailChecks> {
    let cfg = &stats.config;
    let c = clt_constants(cfg.r1)?;
    let (k, r1) = (cfg.k as f64, cfg.r1);
    let sk = k.sqrt();
    let drift = c.alpha * r1 * k;
    let lny = tail_family(TailFamily::LnY, lambdas, |l| {
        stats.final_ln_y.iter().filter(|v| (**v + drift).abs() >= l * r1 * sk).count()
    })?;
    // compare logarithms: x² itself overflows nowhere, but ln keeps λ large safe
    let x2 = tail_family(TailFamily::XSquared, lambdas, |l| {
        stats.final_x2.iter().filter(|v| v.ln() >= l * r1 * sk).count()
    })?;
    let dist = tail_family(TailFamily::Distance, lambdas, |l| {
        stats.final_dist.iter().filter(|v| (**v - drift).abs() >= l * sk).count()
    })?;
    let families = vec![lny, x2, dist];
    let pass = families.iter().all(|f| f.pass);
    let n = stats.final_ln_y.len() as f64;
    let mut out = TailChecks { constants: c, families, pass };
    for f in &mut out.families {
        f.probabilities = f.counts.iter().map(|&m| m as f64 / n).collect();
    }
    Ok(out)
}

fn tail_family<F: Fn(f64) -> usize>(family: TailFamily, lambdas: &[f64], count: F) -> Result<TailReport> {
    let counts: Vec<u64> = lambdas.iter().map(|&l| count(l) as u64).collect();
    let (mut xs, mut ys, mut censored) = (Vec::new(), Vec::new(), Vec::new());
    for (&l, &m) in lambdas.iter().zip(&counts) {
        if m == 0 {
            censored.push(l);
        } else {
            xs.push(l * l);
            ys.push((m as f64).ln());
        }
    }
    if xs.len() < 3 {
        return Err(Error::Insufficient(format!(
            "{family:?} tail: only {} uncensored grid points",
            xs.len()
        )));
    }
    let fit = linear_fit(&xs, &ys)?;
    let ls: Vec<f64> = xs.iter().map(|v| v.sqrt()).collect();
    let lin = linear_fit(&ls, &ys)?;
    Ok(TailReport {
        family,
        lambdas: lambdas.to_vec(),
        counts,
        probabilities: Vec::new(),
        censored,
        slope: fit.slope,
        r2: fit.r2,
        c: -fit.slope,
        slope_linear: lin.slope,
        r2_linear: lin.r2,
        pass: fit.slope < 0.0 && fit.r2 >= 0.9,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degenerate_run_is_skipped() {
        let r = clt_check(&WalkConfig::new(1.0, 1, 100, 0)).unwrap();
        assert!(r.skipped.is_some() && !r.pass);
    }

    #[test]
    fn refuses_tiny_steps() {
        let e = tail_checks(&WalkConfig::new(0.01, 100, 20_000, 0), &DEFAULT_LAMBDAS).unwrap_err();
        assert!(matches!(e, Error::InvalidArgument(_)));
    }

    #[test]
    fn clt_half_step() {
        let r = clt_check(&WalkConfig::new(0.5, 100, 20_000, 8)).unwrap();
        assert!(r.mean_ok && r.variance_ok, "{r:?}");
    }

    #[test]
    fn tails_are_subgaussian() {
        let t = tail_checks(&WalkConfig::new(1.0, 100, 50_000, 21), &DEFAULT_LAMBDAS).unwrap();
        for f in &t.families {
            assert!(f.pass, "{f:?}");
        }
        let d = &t.families[2];
        let p = d.probabilities[d.lambdas.iter().position(|&x| x == 2.5).unwrap()];
        assert!(p <= (-d.c * 6.25).exp());
    }

    #[test]
    fn zero_threshold_is_certain() {
        let t = tail_checks(&WalkConfig::new(1.0, 60, 10_000, 2), &[0.0, 0.5, 1.0, 1.5]).unwrap();
        assert_eq!(t.families[0].probabilities[0], 1.0);
        assert_eq!(t.families[2].probabilities[0], 1.0);
    }
}
