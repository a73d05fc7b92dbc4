//! TV profiles of the step walk on X_2, X_3, X_5 and the cutoff table.
//!
//!     cargo run --release --example cutoff_profile -- [walkers]

use hypercut::mixing::{covering_radius, cutoff_locator, tv_profile, TvConfig};
use hypercut::modular::QuotientGeometry;
use hypercut::spectral::clt_constants;

fn main() -> hypercut::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(100_000);
    let r1 = 1.0;
    let alpha = clt_constants(r1)?.alpha;
    for q in [2, 3, 5] {
        let r_x = covering_radius(&QuotientGeometry::with_bound(q, 0.0)?)?;
        let k_max = (3.0 * r_x / (alpha * r1)).ceil() as usize + 2;
        let prof = tv_profile(&TvConfig::new(q, r1, k_max, n, 2024))?;
        println!(
            "q={q} N={} R_X={r_x:.3} inj={:.3} cells/sheet={} starved={}",
            prof.degree, prof.injectivity_radius, prof.cells_per_sheet, prof.starved_bins
        );
        for p in &prof.points {
            println!("  k={:3} tv={:.4} [{:.4}, {:.4}]", p.k, p.tv, p.ci_lo, p.ci_hi);
        }
        println!("  early k <= {:.2}, late k >= {:.2}", 0.5 * r_x / (alpha * r1), 3.0 * r_x / (alpha * r1));
        // with few walkers the plug-in TV can stall above the lowest level
        match cutoff_locator(&prof.tv(), alpha * r1, r_x) {
            Ok(c) => println!("  location {:.3}, width {:.3}", c.location, c.width),
            Err(e) => println!("  cutoff table unavailable: {e}"),
        }
    }
    Ok(())
}
