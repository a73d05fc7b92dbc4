//! The circle of length λ: heat kernel L1 distance to uniform inside its
//! two-sided bound, and mixing times that scale with λ (no cutoff).
//!
//!     cargo run --release --example flat_torus

use hypercut::torus::{fourier_density, no_cutoff_profile, theta_density, torus_row, TorusConfig};

fn main() -> hypercut::Result<()> {
    for lambda in [1.0, 10.0, 100.0] {
        for a in [0.5, 1.0, 2.0, 5.0] {
            let cfg = TorusConfig::new(lambda, a * lambda)?;
            let row = torus_row(&cfg)?;
            let gap = (theta_density(&cfg, 0.3) - fourier_density(&cfg, 0.3)).abs();
            println!(
                "λ={lambda:5} t/λ={a}: {:.6e} < L1 {:.6e} < {:.6e}  (theta vs Fourier {gap:.1e})",
                row.lower, row.l1, row.upper
            );
        }
    }
    let rep = no_cutoff_profile(&[1.0, 10.0, 100.0], &[1.0, 2.0, 4.0, 8.0])?;
    for r in &rep.rows {
        println!("λ={:5} T={}: t = {:.4}, t/(λT) = {:.4}", r.lambda, r.big_t, r.t, r.ratio);
    }
    println!("ratio spread {:.3}", rep.spread);
    Ok(())
}
