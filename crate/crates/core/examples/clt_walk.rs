//! The step walk in the plane: drift and variance of ln Im z, the CLT and
//! tail shapes.
//!
//!     cargo run --release --example clt_walk -- [walkers]

use hypercut::spectral::clt_constants;
use hypercut::walk::{clt_from_stats, tails_from_stats, walk_discrete, WalkConfig, DEFAULT_LAMBDAS};

fn main() -> hypercut::Result<()> {
    let n: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    for r1 in [0.5, 1.0, 2.0, 5.0] {
        let c = clt_constants(r1)?;
        println!("r1={r1}: α={:.6} σ²={:.6}", c.alpha, c.sigma2);
    }
    let r1 = 1.0;
    let stats = walk_discrete(&WalkConfig::new(r1, 200, n, 7))?;
    let clt = clt_from_stats(&stats, clt_constants(r1)?);
    println!(
        "k=200 n={n}: drift/step {:.5} (tolerance {:.5}), scaled variance {:.5}, AD {:.3} -> {}",
        clt.mean_per_step,
        clt.mean_tolerance,
        clt.scaled_variance,
        clt.anderson_darling,
        if clt.pass { "pass" } else { "fail" }
    );
    println!("distance quantiles 1/10/50/90/99%: {:.3?}", stats.dist_quantiles);
    for f in tails_from_stats(&stats, &DEFAULT_LAMBDAS)?.families {
        println!("  {:?}: slope {:.4} R² {:.4}", f.family, f.slope, f.r2);
    }
    Ok(())
}
