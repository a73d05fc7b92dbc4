//! Heat kernel on the circle `ℝ/ℤ` with diffusion scale `λ`.
//!
//! The kernel has Fourier coefficients `e^{-t m²/λ}`; by Poisson summation
//! it is also the periodization of a Gaussian of variance `t / (2π² λ)`.
//! Its `L¹` distance to uniform depends on `a = t/λ` alone and obeys
//! `e^{-a} ≤ ‖p - 1‖₁ ≤ √(2/(1 - e^{-2a})) e^{-a}`, so mixing to level
//! `e^{-T}` takes time `Θ(λ T)`: the window is as wide as the location.

use std::f64::consts::PI;
use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quad::{bisect, integrate, QuadConfig};

/// Series tails are cut below this.
pub const SERIES_TOL: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TorusConfig {
    pub lambda: f64,
    pub t: f64,
}

impl TorusConfig {
    pub fn new(lambda: f64, t: f64) -> Result<Self> {
        if !(lambda > 0.0) || !(t > 0.0) || !lambda.is_finite() || !t.is_finite() {
            return Err(invalid(format!("need λ > 0 and t > 0, got {lambda}, {t}")));
        }
        Ok(TorusConfig { lambda, t })
    }

    /// `t / λ`.
    pub fn a(&self) -> f64 {
        self.t / self.lambda
    }

    /// Variance of the Gaussian being periodized.
    pub fn variance(&self) -> f64 {
        self.a() / (2.0 * PI * PI)
    }
}

/// Terms of `1 + 2 Σ e^{-a m²} cos 2πmx` needed so that the dropped tail,
/// bounded by a geometric series, is below [`SERIES_TOL`].
pub fn fourier_terms(a: f64) -> usize {
    let mut m = 1usize;
    loop {
        // Σ_{j>m} e^{-a j²} ≤ e^{-a(m+1)²} / (1 - e^{-a(2m+3)})
        let head = (-a * ((m + 1) * (m + 1)) as f64).exp();
        let tail = 2.0 * head / (1.0 - (-a * (2 * m + 3) as f64).exp());
        if tail < SERIES_TOL {
            return m;
        }
        m += 1;
    }
}

pub fn fourier_density(cfg: &TorusConfig, x: f64) -> f64 {
    let a = cfg.a();
    let mut s = 0.0;
    for m in (1..=fourier_terms(a)).rev() {
        let mf = m as f64;
        s += (-a * mf * mf).exp() * (2.0 * PI * mf * x).cos();
    }
    1.0 + 2.0 * s
}

/// Images `n` with `|n| ≤` this cover `x ∈ [0, 1)` to within [`SERIES_TOL`].
pub fn theta_terms(v: f64) -> usize {
    let sd = v.sqrt();
    let mut n = 1usize;
    loop {
        // nearest dropped image is at distance ≥ n, spacing 1
        let d = n as f64;
        let head = (-(d * d) / (2.0 * v)).exp() / (2.0 * PI * v).sqrt();
        let ratio = (-(2.0 * d + 1.0) / (2.0 * v)).exp();
        if 2.0 * head / (1.0 - ratio) < SERIES_TOL && d > 3.0 * sd {
            return n;
        }
        n += 1;
    }
}

pub fn theta_density(cfg: &TorusConfig, x: f64) -> f64 {
    let v = cfg.variance();
    let norm = 1.0 / (2.0 * PI * v).sqrt();
    let n = theta_terms(v) as i64;
    let mut s = 0.0;
    // smallest terms first
    for k in (0..=n).rev() {
        for y in if k == 0 { vec![x] } else { vec![x + k as f64, x - k as f64] } {
            s += (-(y * y) / (2.0 * v)).exp();
        }
    }
    norm * s
}

/// Density at `x`, evaluated by whichever series is shorter.
pub fn torus_density(cfg: &TorusConfig, x: f64) -> f64 {
    let x = x.rem_euclid(1.0);
    if cfg.a() >= 0.5 {
        fourier_density(cfg, x)
    } else {
        theta_density(cfg, x)
    }
}

/// `‖p - 1‖₂ = √(2 Σ_{m≥1} e^{-2a m²})`.
pub fn torus_l2(cfg: &TorusConfig) -> f64 {
    let a = cfg.a();
    (2.0 * (1..=fourier_terms(2.0 * a)).map(|m| (-2.0 * a * (m * m) as f64).exp()).sum::<f64>()).sqrt()
}

pub fn sandwich(a: f64) -> (f64, f64) {
    let lo = (-a).exp();
    (lo, (2.0 / (1.0 - (-2.0 * a).exp())).sqrt() * lo)
}

/// `‖p_t - 1‖₁` by adaptive quadrature.
///
/// The kernel decreases on `[0, ½]` and is even, so `p - 1` has one root
/// `x*` there and the mean-zero property gives `‖p - 1‖₁ = 4 ∫₀^{x*} (p - 1)`.
pub fn torus_l1(cfg: &TorusConfig) -> Result<f64> {
    let f = |x: f64| torus_density(cfg, x) - 1.0;
    if f(0.5) >= 0.0 {
        // numerically flat kernel
        return Ok(0.0);
    }
    let root = bisect(f, 0.0, 0.5, 1e-15)?;
    let cfg_q = QuadConfig { abs_tol: 1e-12, rel_tol: 1e-12, max_intervals: 4000 };
    Ok(4.0 * integrate(f, 0.0, root, cfg_q)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TorusRow {
    pub lambda: f64,
    pub t: f64,
    pub l1: f64,
    pub lower: f64,
    pub upper: f64,
}

impl TorusRow {
    pub fn inside(&self) -> bool {
        self.lower < self.l1 && self.l1 < self.upper
    }
}

pub fn torus_row(cfg: &TorusConfig) -> Result<TorusRow> {
    let (lower, upper) = sandwich(cfg.a());
    Ok(TorusRow { lambda: cfg.lambda, t: cfg.t, l1: torus_l1(cfg)?, lower, upper })
}

/// CSV with header `lambda,t,l1,lower,upper`.
pub fn write_rows<W: Write>(rows: &[TorusRow], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["lambda", "t", "l1", "lower", "upper"])?;
    for r in rows {
        out.write_record([r.lambda, r.t, r.l1, r.lower, r.upper].map(|v| format!("{v:.12e}")))?;
    }
    out.flush()?;
    Ok(())
}

/// Time at which `‖p_t - 1‖₁ = e^{-T}`, bracketed by the sandwich bounds.
pub fn time_to_level(lambda: f64, big_t: f64) -> Result<f64> {
    if !(lambda > 0.0) || !(big_t > 0.0) {
        return Err(invalid("λ and T must be positive"));
    }
    let target = (-big_t).exp();
    let g = |a: f64| torus_l1(&TorusConfig { lambda: 1.0, t: a }).unwrap_or(f64::NAN) - target;
    // e^{-a} ≤ l1 forces a ≥ T; the upper bound caps the overshoot
    let lo = big_t;
    let hi = big_t + 0.5 * (2.0 / (1.0 - (-2.0 * big_t).exp())).ln() + 1e-9;
    Ok(lambda * bisect(g, lo, hi, 1e-13)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct NoCutoffRow {
    pub lambda: f64,
    pub big_t: f64,
    pub t: f64,
    /// `t / (λ T)`.
    pub ratio: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct NoCutoffReport {
    pub rows: Vec<NoCutoffRow>,
    pub ratio_min: f64,
    pub ratio_max: f64,
    pub spread: f64,
}

pub fn no_cutoff_profile(lambdas: &[f64], big_ts: &[f64]) -> Result<NoCutoffReport> {
    let mut rows = Vec::new();
    for &l in lambdas {
        for &bt in big_ts {
            let t = time_to_level(l, bt)?;
            rows.push(NoCutoffRow { lambda: l, big_t: bt, t, ratio: t / (l * bt) });
        }
    }
    if rows.is_empty() {
        return Err(invalid("empty grid"));
    }
    let ratio_min = rows.iter().map(|r| r.ratio).fold(f64::INFINITY, f64::min);
    let ratio_max = rows.iter().map(|r| r.ratio).fold(0.0, f64::max);
    Ok(NoCutoffReport { rows, ratio_min, ratio_max, spread: ratio_max / ratio_min })
}

/// `(t, ‖p_t - 1‖₁)` on `t = λ a` for the given `a` grid, ready for the
/// cutoff locator.
pub fn torus_profile(lambda: f64, a_grid: &[f64]) -> Result<Vec<(f64, f64)>> {
    a_grid
        .iter()
        .map(|&a| Ok((lambda * a, torus_l1(&TorusConfig::new(lambda, lambda * a)?)?)))
        .collect()
}
