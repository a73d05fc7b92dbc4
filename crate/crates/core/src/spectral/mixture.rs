//! Radial laws of iterated circle averages.
//!
//! After `k` steps of length `r1` in uniform directions, the distance from
//! the start has a law `m_k` on `[0, k r1]`. One more step from radius `r`
//! lands at radius `ρ` with `cosh ρ = cosh r cosh r1 - sinh r sinh r1 cos ω`,
//! `ω` uniform, which gives an explicit conditional CDF; `m_k` is built by
//! pushing the cell masses of `m_{k-1}` through it.

use rayon::prelude::*;

use crate::error::{invalid, Error, Result};
use crate::radial::{default_step, RadialGrid};

/// `P(ρ ≤ x)` for one step of length `r1` from radius `r`.
#[inline]
pub fn step_cdf(x: f64, r: f64, r1: f64) -> f64 {
    let denom = r.sinh() * r1.sinh();
    if denom == 0.0 {
        // one of the two radii vanishes: the new radius is exactly r + r1
        return if x >= r + r1 { 1.0 } else { 0.0 };
    }
    let arg = (r.cosh() * r1.cosh() - x.cosh()) / denom;
    arg.clamp(-1.0, 1.0).acos() / std::f64::consts::PI
}

/// Closed-form CDF of the two-step law.
pub fn two_step_cdf(x: f64, r1: f64) -> f64 {
    step_cdf(x, r1, r1)
}

/// The law `m_k` of the distance after `k ≥ 2` steps of length `r1`.
///
/// `step` defaults to `1e-3 · max(1, k r1 / 10)`. The result is checked
/// against the exact moment `E cosh ρ = cosh^k r1`; a relative defect above
/// `1e-3` means the grid is too coarse.
pub fn radial_mixture(k: usize, r1: f64, step: Option<f64>) -> Result<RadialGrid> {
    if k < 2 {
        return Err(invalid(format!(
            "k = {k}: the law after fewer than two steps is atomic, not a density"
        )));
    }
    if !(r1 > 0.0) || r1 > 50.0 {
        return Err(invalid(format!("step length must lie in (0, 50], got {r1}")));
    }
    let r_max = k as f64 * r1;
    let h = step.unwrap_or_else(|| default_step(r_max));
    let n = ((r_max / h).round() as usize).max(1);
    let mut grid = RadialGrid::from_cdf(0.0, r_max, n, |x| two_step_cdf(x, r1))?;
    for j in 3..=k {
        let r_out = j as f64 * r1;
        grid = push_step(&grid, r1, r_out, n * j / k)?;
    }
    let defect = grid.normalize()?;
    let expect_cosh = grid.expect(f64::cosh);
    let exact = r1.cosh().powi(k as i32);
    let rel = (expect_cosh / exact - 1.0).abs();
    if rel > 1e-3 || defect > 1e-3 {
        return Err(Error::Resolution(format!(
            "k={k}, r1={r1}, step={h}: moment defect {rel:.2e}, mass defect {defect:.2e}"
        )));
    }
    Ok(grid)
}

/// One step of length `r1` applied to the law `m`, on `n` cells of
/// `[0, r_out]`.
pub fn push_step(m: &RadialGrid, r1: f64, r_out: f64, n: usize) -> Result<RadialGrid> {
    let src: Vec<(f64, f64)> = (0..m.n_cells())
        .map(|i| (m.mid(i), m.cell_mass(i)))
        .filter(|(_, w)| *w > 0.0)
        .collect();
    let h = r_out / n as f64;
    let cdf: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let x = h * j as f64;
            src.iter().map(|&(r, w)| w * step_cdf(x, r, r1)).sum()
        })
        .collect();
    RadialGrid::from_masses(0.0, r_out, cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect())
}

/// Law of `d(o, X)` where `X` is at radius `a ~ m_a` from `o` and then
/// moved by an independent radius `b ~ m_b` in a uniform direction.
///
/// `O(n_a n_b n)`; meant for coarse grids.
pub fn convolve_radial(ma: &RadialGrid, mb: &RadialGrid, n: usize) -> Result<RadialGrid> {
    let r_out = ma.r_max() + mb.r_max();
    let pa: Vec<(f64, f64)> = (0..ma.n_cells())
        .map(|i| (ma.mid(i), ma.cell_mass(i)))
        .filter(|(_, w)| *w > 1e-16)
        .collect();
    let pb: Vec<(f64, f64)> = (0..mb.n_cells())
        .map(|i| (mb.mid(i), mb.cell_mass(i)))
        .filter(|(_, w)| *w > 1e-16)
        .collect();
    let h = r_out / n as f64;
    let cdf: Vec<f64> = (0..=n)
        .into_par_iter()
        .map(|j| {
            let x = h * j as f64;
            pa.iter()
                .map(|&(a, wa)| wa * pb.iter().map(|&(b, wb)| wb * step_cdf(x, a, b)).sum::<f64>())
                .sum()
        })
        .collect();
    RadialGrid::from_masses(0.0, r_out, cdf.windows(2).map(|w| (w[1] - w[0]).max(0.0)).collect())
}
