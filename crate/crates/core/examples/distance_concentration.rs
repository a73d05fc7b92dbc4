//! Distances from a point of X_5 to uniform points: volume growth, the
//! lower tail, concentration around the median, and a dilation check.
//!
//!     cargo run --release --example distance_concentration -- [samples]

use hypercut::mixing::{
    concentration_fit, distance_histogram, histogram_geometry, iso_geometry, isoperimetric_check, Region,
    DEFAULT_START,
};
use hypercut::modular::{CosetModQ, QuotientPoint};

fn main() -> hypercut::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let q = 5;
    let r_max = 8.0;
    let geo = histogram_geometry(q, &DEFAULT_START, r_max)?;
    let x0 = QuotientPoint::from_lift(&DEFAULT_START, CosetModQ::identity(q))?;
    let h = distance_histogram(&geo, &x0, n, r_max, &[0.5, 1.0, 2.0], &[0.5, 1.0, 1.5, 2.0], 1)?;
    println!("X_{q}: R_X = {:.4}, unresolved cusp mass {:.4}", h.r_x, h.unresolved_mass);
    for v in &h.volume {
        println!("  d < {}: {:.5} vs ball fraction {:.5}", v.r, v.frac_below, v.ball_fraction);
    }
    for g in &h.gammas {
        println!("  γ={}: below R_X - γ ln R_X {:.5}, scaled {:.4}", g.gamma, g.frac_below, g.scaled_below);
    }

    let c = concentration_fit(&h.values(), 0.25, Some(h.r_x))?;
    println!("median {:.4}; Pr(|d - med| ≥ γ) ~ a^-γ with a = {:.3} (R² {:.3})", c.r_med, c.a, c.r2);

    let iso = iso_geometry(q, 1.0, 2.0)?;
    let region = Region::Ball { center: x0, radius: 0.5 };
    let rep = isoperimetric_check(&iso, &region, 1.0, 4.0, false, 20_000, 2)?;
    println!("ball of radius 0.5 dilated by 1: c = {:.4}, c' ∈ [{:.4}, {:.4}]", rep.c, rep.c_prime_lo, rep.c_prime_hi);
    Ok(())
}
