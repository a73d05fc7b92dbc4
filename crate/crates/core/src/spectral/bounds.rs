//! Harish-Chandra type bounds and the checks built on them.

use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate, QuadConfig};
use crate::stats::linear_fit;

use super::spherical::{spherical_complementary, spherical_principal};

/// `(r + 1) e^{-r/p}`; `p = ∞` gives `r + 1`.
pub fn hc_bound(r: f64, p: f64) -> f64 {
    (r + 1.0) * (-r / p).exp()
}

/// `λ = ¼ - (½ - 1/p)²`.
pub fn lambda_from_p(p: f64) -> Result<f64> {
    if !(p >= 2.0) {
        return Err(invalid(format!("p must be >= 2, got {p}")));
    }
    let sp = 0.5 - 1.0 / p;
    Ok(0.25 - sp * sp)
}

/// Inverse of [`lambda_from_p`] on `(0, ¼]`.
pub fn p_from_lambda(lambda: f64) -> Result<f64> {
    if !(lambda > 0.0 && lambda <= 0.25) {
        return Err(Error::Domain(format!("λ = {lambda} outside (0, 1/4]")));
    }
    let sp = (0.25 - lambda).max(0.0).sqrt();
    Ok(1.0 / (0.5 - sp))
}

/// Lower envelope `C √ε e^{-r(½ - |s'|(1-ε))}` for the complementary
/// spherical function, with `C` fitted from data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LowerEnvelope {
    pub p: f64,
    pub eps: f64,
    pub c: f64,
}

impl LowerEnvelope {
    fn shape(p: f64, eps: f64, r: f64) -> f64 {
        let sp = 0.5 - 1.0 / p;
        eps.sqrt() * (-r * (0.5 - sp * (1.0 - eps))).exp()
    }

    /// Fits `C` as `safety ×` the smallest ratio `φ / shape` on `r_grid`.
    pub fn fit(p: f64, eps: f64, r_grid: &[f64], safety: f64) -> Result<Self> {
        if !(eps > 0.0 && eps < 1.0) {
            return Err(invalid(format!("ε must lie in (0, 1), got {eps}")));
        }
        let mut c = f64::INFINITY;
        for &r in r_grid {
            c = c.min(spherical_complementary(p, r)? / Self::shape(p, eps, r));
        }
        Ok(LowerEnvelope {
            p,
            eps,
            c: c * safety,
        })
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.c * Self::shape(self.p, self.eps, r)
    }
}

/// Convergence check for `∫ e^r hc_bound(r, p)^{p+ε} dr`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DecayReport {
    pub p: f64,
    pub eps: f64,
    /// Integral over `[0, 200]`.
    pub integral: f64,
    /// Slope of `ln(integrand)` fitted on `[150, 200]`; the integrand is
    /// `(r+1)^{p+ε} e^{-εr/p}`, so convergence shows as a negative slope.
    pub tail_slope: f64,
    pub converges: bool,
}

pub fn decay_exponent_check(p: f64, eps: f64) -> Result<DecayReport> {
    if !(p >= 2.0) || !(eps >= 0.0) {
        return Err(invalid(format!("need p >= 2 and ε >= 0, got p={p}, ε={eps}")));
    }
    let ln_integrand = |r: f64| r + (p + eps) * hc_bound(r, p).ln();
    let integral = integrate(|r| ln_integrand(r).exp(), 0.0, 200.0, QuadConfig {
        abs_tol: 0.0,
        rel_tol: 1e-10,
        max_intervals: 4000,
    })?
    .value;
    let rs: Vec<f64> = (0..=50).map(|i| 150.0 + i as f64).collect();
    let ys: Vec<f64> = rs.iter().map(|&r| ln_integrand(r)).collect();
    let tail_slope = linear_fit(&rs, &ys)?.slope;
    Ok(DecayReport {
        p,
        eps,
        integral,
        tail_slope,
        converges: tail_slope < -1e-3,
    })
}

/// Growth of `|φ(s, r)| √s` over `s ∈ [1, 1000]` at fixed `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SDecayReport {
    pub r: f64,
    pub sup_all: f64,
    pub sup_head: f64,
    pub sup_tail: f64,
    /// `sup_tail ≤ 2 sup_head`.
    pub bounded: bool,
}

/// Evaluates `|φ(s, r)| √s` on `s_grid`; `head` is `s ≤ 50`, `tail` is
/// `s ≥ 500`.
pub fn technical_s_decay(r: f64, s_grid: &[f64]) -> Result<SDecayReport> {
    if !(r > 0.0) {
        return Err(invalid(format!("radius must be positive, got {r}")));
    }
    let (mut all, mut head, mut tail) = (0.0f64, 0.0f64, 0.0f64);
    for &s in s_grid {
        let v = spherical_principal(s, r)?.abs() * s.abs().sqrt();
        all = all.max(v);
        if s <= 50.0 {
            head = head.max(v);
        }
        if s >= 500.0 {
            tail = tail.max(v);
        }
    }
    Ok(SDecayReport {
        r,
        sup_all: all,
        sup_head: head,
        sup_tail: tail,
        bounded: tail <= 2.0 * head,
    })
}
