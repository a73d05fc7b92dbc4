//! Radial law of Brownian motion on the hyperbolic plane.
//!
//! The heat kernel of `exp(-tΔ)` on `H²` is McKean's integral
//!
//! `k(r, t) = √2 e^{-t/4} / (4π t)^{3/2} ∫_r^∞ φ e^{-φ²/4t} / √(cosh φ - cosh r) dφ`,
//!
//! and the law of the distance travelled in time `t` has density
//! `p(t, r) = 2π sinh r · k(r, t)`.

use std::f64::consts::{LN_2, PI};

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate_pieces, QuadConfig};
use crate::radial::{default_step, RadialGrid};
use crate::stats::{linear_fit, LineFit};

use super::spherical::ln_sinh;

pub const MIN_TIME: f64 = 1e-3;

/// `ln(2π sinh r · k(r, t))`.
pub fn ln_heat_density(t: f64, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    // φ = r + u²: cosh φ - cosh r = 2 sinh(r + u²/2) sinh(u²/2)
    let scale = r * r / (4.0 * t);
    let ln_integrand = |u: f64| -> f64 {
        let u2 = u * u;
        let phi = r + u2;
        let ln_den = if u == 0.0 {
            // 2 sinh(r) · u²/2 divided out against the 2u in the numerator
            return phi.ln() - (phi * phi / (4.0 * t) - scale) + LN_2 - 0.5 * ln_sinh(r);
        } else {
            LN_2 + ln_sinh(r + 0.5 * u2) + ln_sinh(0.5 * u2)
        };
        phi.ln() - (phi * phi / (4.0 * t) - scale) + (2.0 * u).ln() - 0.5 * ln_den
    };
    // e^{-(φ² - r²)/4t} < e^{-60} beyond this
    let phi_hi = (r * r + 240.0 * t).sqrt() + 1.0;
    let u_hi = (phi_hi - r).sqrt();
    let mut br = vec![0.0];
    for m in [1e-3, 1e-2, 0.1] {
        let b = m * r.sqrt().min(1.0);
        if b < u_hi {
            br.push(b);
        }
    }
    for m in [0.5, 1.0] {
        let b = m * (2.0 * t).sqrt().sqrt();
        if b < u_hi && b > *br.last().unwrap() {
            br.push(b);
        }
    }
    br.push(u_hi);
    let integral = integrate_pieces(|u| ln_integrand(u).exp(), &br, QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_intervals: 4000,
    })?
    .value;
    let ln_k = 0.5 * LN_2 - t / 4.0 - 1.5 * (4.0 * PI * t).ln() - scale + integral.ln();
    Ok((2.0 * PI).ln() + ln_sinh(r) + ln_k)
}

/// Radial law of Brownian motion at time `t`.
#[derive(Debug, Clone)]
pub struct HeatLaw {
    pub t: f64,
    pub grid: RadialGrid,
    /// `|∫ p dr - 1|` before renormalizing.
    pub raw_defect: f64,
}

/// Default radial cut-off: the law has Gaussian tails of width `√(2t)`
/// around `t`.
pub fn heat_r_max(t: f64) -> f64 {
    t + 12.0 * (2.0 * t).sqrt() + 4.0
}

pub fn heat_radial_density(t: f64, step: Option<f64>) -> Result<HeatLaw> {
    if !(t >= MIN_TIME) || !t.is_finite() {
        return Err(Error::Resolution(format!("time {t} below {MIN_TIME}")));
    }
    let r_max = heat_r_max(t);
    let h = step.unwrap_or_else(|| default_step(r_max).min((t).sqrt() / 50.0));
    let n = (r_max / h).ceil() as usize;
    let h = r_max / n as f64;
    let vals: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| ln_heat_density(t, h * (i as f64 + 0.5)).map(f64::exp))
        .collect::<Result<_>>()?;
    let mut grid = RadialGrid::new(0.0, r_max, vals)?;
    let raw_defect = grid.normalize()?;
    Ok(HeatLaw { t, grid, raw_defect })
}

/// The printed two-sided envelope `t^{-1} r / √(1 + r + t) e^{-(r-t)²/4t}`.
pub fn heat_envelope(t: f64, r: f64) -> f64 {
    r / t / (1.0 + r + t).sqrt() * (-(r - t).powi(2) / (4.0 * t)).exp()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EnvelopeFit {
    pub c1: f64,
    pub c2: f64,
    pub ratio: f64,
}

/// Smallest and largest `p / envelope` over the cells in `[t/4, 4t]`.
pub fn envelope_fit(law: &HeatLaw) -> EnvelopeFit {
    let (mut c1, mut c2) = (f64::INFINITY, 0.0f64);
    let g = &law.grid;
    for i in 0..g.n_cells() {
        let r = g.mid(i);
        if r >= law.t / 4.0 && r <= 4.0 * law.t {
            let q = g.values()[i] / heat_envelope(law.t, r);
            c1 = c1.min(q);
            c2 = c2.max(q);
        }
    }
    EnvelopeFit { c1, c2, ratio: c2 / c1 }
}

/// Mass of `|r - t| ≥ λ √t`.
pub fn tail_mass(law: &HeatLaw, lambda: f64) -> f64 {
    let w = lambda * law.t.sqrt();
    let g = &law.grid;
    1.0 - (g.cdf(law.t + w) - g.cdf((law.t - w).max(0.0)))
}

/// Fits `ln(tail mass)` against `λ²`.
pub fn tail_fit(law: &HeatLaw, lambdas: &[f64]) -> Result<LineFit> {
    let mut xs = Vec::new();
    let mut ys = Vec::new();
    for &l in lambdas {
        let m = tail_mass(law, l);
        if m > 0.0 {
            xs.push(l * l);
            ys.push(m.ln());
        }
    }
    linear_fit(&xs, &ys)
}

/// Cell midpoint with the largest density.
pub fn mode(law: &HeatLaw) -> f64 {
    let g = &law.grid;
    let i = (0..g.n_cells())
        .max_by(|&a, &b| g.values()[a].total_cmp(&g.values()[b]))
        .unwrap_or(0);
    g.mid(i)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normalized_without_help() {
        for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
            let law = heat_radial_density(t, None).unwrap();
            assert!(law.raw_defect < 1e-5, "t={t} defect {}", law.raw_defect);
            assert!((law.grid.mass() - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn small_time_rejected() {
        assert!(matches!(heat_radial_density(1e-4, None), Err(Error::Resolution(_))));
    }

    #[test]
    fn mode_near_t() {
        for t in [2.0, 5.0, 10.0] {
            let m = mode(&heat_radial_density(t, None).unwrap());
            assert!((m - t).abs() <= 2.0 * t.sqrt(), "t={t} mode={m}");
        }
    }

    #[test]
    fn envelope_and_tails() {
        for t in [0.5, 1.0, 5.0, 10.0] {
            let law = heat_radial_density(t, None).unwrap();
            let f = envelope_fit(&law);
            assert!(f.ratio <= 50.0, "t={t} {f:?}");
            let fit = tail_fit(&law, &[1.0, 1.5, 2.0, 2.5, 3.0, 3.5, 4.0]).unwrap();
            assert!(fit.slope < 0.0 && fit.r2 >= 0.9, "t={t} {fit:?}");
        }
    }

    #[test]
    fn mean_moment_of_cosh() {
        // Δ cosh r = 2 cosh r, so E cosh ρ_t = e^{2t}
        let t = 1.0;
        let law = heat_radial_density(t, None).unwrap();
        let m = law.grid.expect(f64::cosh);
        assert!((m / (2.0 * t).exp() - 1.0).abs() < 1e-4, "{m}");
    }
}
