//! The radial heat kernel: normalization, envelope, Gaussian tails, and a
//! check of the Brownian sampler against it.
//!
//!     cargo run --release --example heat_kernel

use hypercut::spectral::heat::{envelope_fit, mode, tail_fit};
use hypercut::spectral::heat_radial_density;
use hypercut::stats::{ks_statistic, sorted};
use hypercut::walk::brownian_distances;

fn main() -> hypercut::Result<()> {
    let lambdas = [0.5, 1.0, 1.5, 2.0, 2.5, 3.0];
    for t in [0.5, 1.0, 2.0, 5.0, 10.0] {
        let law = heat_radial_density(t, None)?;
        let env = envelope_fit(&law);
        let fit = tail_fit(&law, &lambdas)?;
        println!(
            "t={t:4}: |∫p - 1| = {:.2e}  mode {:.3}  envelope ratio {:.3}  tail slope {:.4} (R² {:.4})",
            law.raw_defect,
            mode(&law),
            env.ratio,
            fit.slope,
            fit.r2
        );
    }
    let t = 2.0;
    let law = heat_radial_density(t, None)?;
    let d = brownian_distances(t, 50_000, 9)?;
    println!("Brownian samples at t={t}: KS = {:.5}", ks_statistic(&sorted(&d), |r| law.grid.cdf(r)));
    Ok(())
}
