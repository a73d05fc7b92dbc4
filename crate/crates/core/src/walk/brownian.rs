//! Brownian motion on the half-plane, sampled radially from the heat law.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{invalid, Result};
use crate::geometry::{distance, sphere_point_at_i, PointH};
use crate::rng::{map_chunks, walker_rng};
use crate::spectral::{heat_radial_density, HeatLaw};

/// Moves `z` by a heat-law radius in a uniform direction.
pub fn brownian_jump<R: Rng + ?Sized>(z: &PointH, law: &HeatLaw, rng: &mut R) -> PointH {
    let r = law.grid.sample(rng);
    let w = sphere_point_at_i(r, std::f64::consts::PI * rng.random::<f64>());
    PointH::new_unchecked(z.x() + z.y() * w.x(), z.y() * w.y())
}

/// Distances travelled by `n` independent Brownian particles started at `i`
/// and run for time `t`.
pub fn brownian_distances(t: f64, n: usize, seed: u64) -> Result<Vec<f64>> {
    let law = heat_radial_density(t, None)?;
    let z0 = PointH::i();
    Ok(map_chunks(n, |lo, hi| {
        (lo..hi)
            .map(|w| {
                let mut rng = walker_rng(seed, w as u64);
                distance(&z0, &brownian_jump(&z0, &law, &mut rng))
            })
            .collect::<Vec<_>>()
    })
    .concat())
}

/// Euler scheme for the diffusion generated by `y²(∂x² + ∂y²)`:
/// `dx = √2 y dW₁`, `d ln y = √2 dW₂ - dt`. The `ln y` part is exact.
pub fn sde_path<R: Rng + ?Sized>(z: &PointH, t: f64, dt: f64, rng: &mut R) -> Result<PointH> {
    if !(t >= 0.0) || !(dt > 0.0) {
        return Err(invalid("time and step must be positive"));
    }
    let n = (t / dt).ceil() as usize;
    let h = if n > 0 { t / n as f64 } else { 0.0 };
    let sh = (2.0 * h).sqrt();
    let (mut x, mut ln_y) = (z.x(), z.y().ln());
    for _ in 0..n {
        let a: f64 = rng.sample(StandardNormal);
        let b: f64 = rng.sample(StandardNormal);
        x += sh * ln_y.exp() * a;
        ln_y += sh * b - h;
    }
    Ok(PointH::new_unchecked(x, ln_y.exp()))
}
