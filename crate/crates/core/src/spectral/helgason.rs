//! Radial Helgason–Fourier transform and the Plancherel identity.
//!
//! For a radial function `F` on `H²`, `f̂(s) = ∫ F φ_s dμ =
//! 2π ∫ F(r) φ(s, r) sinh r dr`, and Plancherel reads
//! `∫ |F|² dμ = (1/2π) ∫₀^∞ |f̂(s)|² s tanh(πs) ds`.
//! For a radial probability law `m` of distances the transform is
//! `∫ φ(s, r) dm(r)`, which turns convolution (composition of steps) into
//! products.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::quad::{integrate, QuadConfig};
use crate::radial::RadialGrid;

use super::spherical::spherical_on_midpoints;

fn check_origin(g: &RadialGrid) -> Result<()> {
    if g.r_min() != 0.0 {
        return Err(invalid("radial transforms need a grid starting at r = 0"));
    }
    Ok(())
}

/// `φ(s, ·)` at the cell midpoints of `g`.
pub fn phi_on_grid(s: f64, g: &RadialGrid) -> Result<Vec<f64>> {
    check_origin(g)?;
    Ok(spherical_on_midpoints(0.25 + s * s, g.step(), g.n_cells()))
}

/// `∫ φ(s, r) dm(r)` for a radial law `m` (the `A_r`-mixture eigenvalue).
pub fn helgason_measure(m: &RadialGrid, s: f64) -> Result<f64> {
    let phi = phi_on_grid(s, m)?;
    Ok((0..m.n_cells()).map(|i| m.cell_mass(i) * phi[i]).sum())
}

/// `f̂(s)` for the radial function whose profile is stored in `f`.
pub fn helgason_function(f: &RadialGrid, s: f64) -> Result<f64> {
    let phi = phi_on_grid(s, f)?;
    let h = f.step();
    Ok((0..f.n_cells())
        .map(|i| f.values()[i] * phi[i] * 2.0 * PI * f.mid(i).sinh() * h)
        .sum())
}

/// `∫ |F|² dμ`.
pub fn l2_energy(f: &RadialGrid) -> Result<f64> {
    check_origin(f)?;
    let h = f.step();
    Ok((0..f.n_cells())
        .map(|i| f.values()[i].powi(2) * 2.0 * PI * f.mid(i).sinh() * h)
        .sum())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PlancherelReport {
    pub space_energy: f64,
    pub spectral_energy: f64,
    pub ratio: f64,
    pub s_max: f64,
    /// `|f̂(s_max)|² s_max tanh(π s_max) / 2π`, the integrand where the
    /// spectral integral is cut.
    pub truncation_integrand: f64,
}

/// Compares both sides of Plancherel, integrating `s` over `[0, s_max]`.
pub fn plancherel_check(f: &RadialGrid, s_max: f64) -> Result<PlancherelReport> {
    if !(s_max > 0.0) {
        return Err(invalid(format!("s_max must be positive, got {s_max}")));
    }
    let space_energy = l2_energy(f)?;
    let density = |s: f64| -> f64 {
        let v = helgason_function(f, s).unwrap_or(f64::NAN);
        v * v * s * (PI * s).tanh() / (2.0 * PI)
    };
    let spectral_energy = integrate(density, 0.0, s_max, QuadConfig {
        abs_tol: 1e-9 * space_energy,
        rel_tol: 1e-8,
        max_intervals: 2000,
    })?
    .value;
    Ok(PlancherelReport {
        space_energy,
        spectral_energy,
        ratio: spectral_energy / space_energy,
        s_max,
        truncation_integrand: density(s_max),
    })
}

/// Profile of the smooth bump `exp(-1/(1 - (r/R)²))` on `[0, R]`.
pub fn smooth_bump(radius: f64, n: usize) -> Result<RadialGrid> {
    let h = radius / n as f64;
    let vals = (0..n)
        .map(|i| {
            let x = h * (i as f64 + 0.5) / radius;
            (-1.0 / (1.0 - x * x)).exp()
        })
        .collect();
    RadialGrid::new(0.0, radius, vals)
}
