//! Drift and variance of `ln Im z` along the step walk.
//!
//! One step of length `r1` in direction `θ` multiplies `Im z` by
//! `1 / (e^{r1} cos²θ + e^{-r1} sin²θ)`, independently of `z`. Hence
//! `-ln y_k / r1` is a sum of `k` i.i.d. copies of
//! `Y = ln(e^{r1} cos²θ + e^{-r1} sin²θ) / r1`, with mean `α` and variance `σ²`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quad::{integrate_pieces, QuadConfig};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CltConstants {
    pub r1: f64,
    pub alpha: f64,
    pub sigma2: f64,
}

/// `Y(θ)` for step length `r1`, written to avoid overflow at large `r1`.
pub fn step_log_ratio(r1: f64, theta: f64) -> f64 {
    let (s, c) = theta.sin_cos();
    1.0 + (c * c + (-2.0 * r1).exp() * s * s).ln() / r1
}

pub fn clt_constants(r1: f64) -> Result<CltConstants> {
    if !(r1 > 0.0) || !r1.is_finite() {
        return Err(invalid(format!("step length must be positive, got {r1}")));
    }
    let cfg = QuadConfig {
        abs_tol: 1e-13,
        rel_tol: 1e-13,
        max_intervals: 10_000,
    };
    let br = [0.0, FRAC_PI_2, PI];
    let alpha = integrate_pieces(|t| step_log_ratio(r1, t), &br, cfg)?.value / PI;
    let sigma2 = integrate_pieces(|t| (step_log_ratio(r1, t) - alpha).powi(2), &br, cfg)?.value / PI;
    Ok(CltConstants { r1, alpha, sigma2 })
}
