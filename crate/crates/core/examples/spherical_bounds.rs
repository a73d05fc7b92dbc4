//! Spherical functions against their bounds, and the L^p decay check.
//!
//!     cargo run --release --example spherical_bounds

use hypercut::spectral::{
    decay_exponent_check, hc_bound, lambda_from_p, spherical_complementary, spherical_principal, technical_s_decay,
    LowerEnvelope,
};

fn main() -> hypercut::Result<()> {
    println!("sup over s in [0, 40] of |φ(s, r)| against (r+1)e^(-r/2):");
    for r in [0.25, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        let mut sup = 0.0f64;
        for i in 0..=800 {
            sup = sup.max(spherical_principal(i as f64 * 0.05, r)?.abs());
        }
        println!("  r={r:5}  sup={sup:.6e}  bound={:.6e}", hc_bound(r, 2.0));
    }

    let rs: Vec<f64> = (0..=115).map(|i| 0.5 + 0.1 * i as f64).collect();
    for p in [2.5, 3.0, 4.0, 8.0] {
        let env = LowerEnvelope::fit(p, 0.1, &rs, 0.99)?;
        let r = 6.0;
        println!(
            "p={p}: λ={:.4}  envelope {:.3e} ≤ φ {:.3e} ≤ bound {:.3e}",
            lambda_from_p(p)?,
            env.eval(r),
            spherical_complementary(p, r)?,
            hc_bound(r, p)
        );
        let d = decay_exponent_check(p, 0.5)?;
        println!("       ∫ e^r bound^(p+ε) converges: {} (tail slope {:.4})", d.converges, d.tail_slope);
    }

    let grid: Vec<f64> = (0..400).map(|i| 10f64.powf(3.0 * i as f64 / 399.0)).collect();
    let s = technical_s_decay(2.0, &grid)?;
    println!("sup |φ(s, 2)| √s: head {:.4}, tail {:.4}", s.sup_head, s.sup_tail);
    Ok(())
}
