//! Mixing times `t(ε)` and the transition window read off a profile.

use serde::Serialize;

use crate::error::{invalid, Error, Result};

/// Thresholds on the `[0, 2]` scale.
pub const EPS_GRID: [f64; 5] = [1.9, 1.5, 1.0, 0.5, 0.1];

#[derive(Debug, Clone, Serialize)]
pub struct CutoffReport {
    /// `(ε, t(ε))` for every threshold in [`EPS_GRID`].
    pub times: Vec<(f64, f64)>,
    /// `t(1.0) α r1 / R_X`.
    pub location: f64,
    /// `(t(0.1) - t(1.9)) α r1 / √R_X`.
    pub width: f64,
    /// `(t(0.1) - t(1.9)) / t(1.0)`, free of any normalization.
    pub width_ratio: f64,
}

/// First time the profile drops to `eps`, by linear interpolation between
/// grid points.
pub fn mixing_time(profile: &[(f64, f64)], eps: f64) -> Result<f64> {
    let first = profile.first().ok_or_else(|| invalid("empty profile"))?;
    if first.1 <= eps {
        return Err(Error::Range(format!(
            "profile starts at {} which is already below {eps}",
            first.1
        )));
    }
    for w in profile.windows(2) {
        let ((t0, v0), (t1, v1)) = (w[0], w[1]);
        if v1 <= eps {
            return Ok(t0 + (t1 - t0) * (v0 - eps) / (v0 - v1));
        }
    }
    Err(Error::Range(format!("profile never drops to {eps}")))
}

/// `profile` is a list of `(time, tv)` pairs in increasing time.
pub fn cutoff_locator(profile: &[(f64, f64)], alpha_r1: f64, r_x: f64) -> Result<CutoffReport> {
    if !(alpha_r1 > 0.0) || !(r_x > 0.0) {
        return Err(invalid("drift and radius must be positive"));
    }
    let times = EPS_GRID
        .iter()
        .map(|&e| Ok((e, mixing_time(profile, e)?)))
        .collect::<Result<Vec<_>>>()?;
    let t = |e: f64| times.iter().find(|p| p.0 == e).map(|p| p.1).expect("grid value");
    let spread = t(0.1) - t(1.9);
    Ok(CutoffReport {
        location: t(1.0) * alpha_r1 / r_x,
        width: spread * alpha_r1 / r_x.sqrt(),
        width_ratio: spread / t(1.0),
        times,
    })
}
