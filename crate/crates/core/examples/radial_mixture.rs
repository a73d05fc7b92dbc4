//! Radial law of the k-step walk: closed form at k = 2, sampling, and the
//! spherical transform turning convolution into powers.
//!
//!     cargo run --release --example radial_mixture

use hypercut::rng::walker_rng;
use hypercut::spectral::{helgason_measure, radial_mixture, spherical_principal, two_step_cdf};
use hypercut::stats::{ks_statistic, sorted};
use hypercut::walk::step_discrete;
use hypercut::{distance, PointH};

fn main() -> hypercut::Result<()> {
    let r1 = 1.0;
    let mut rng = walker_rng(5, 0);
    let o = PointH::i();
    let sample: Vec<f64> = (0..100_000)
        .map(|_| {
            let z = step_discrete(&step_discrete(&o, r1, &mut rng), r1, &mut rng);
            distance(&o, &z)
        })
        .collect();
    let ks = ks_statistic(&sorted(&sample), |x| two_step_cdf(x, r1));
    println!("two steps of length {r1}: KS against the closed form = {ks:.5}");

    for k in [2, 3, 5] {
        let m = radial_mixture(k, r1, None)?;
        println!("k={k}: support [0, {}], mean distance {:.5}", m.r_max(), m.mean());
        for s in [0.0, 1.0, 4.0] {
            println!(
                "    s={s}: transform {:+.6e}  φ(s, r1)^k {:+.6e}",
                helgason_measure(&m, s)?,
                spherical_principal(s, r1)?.powi(k as i32)
            );
        }
    }
    Ok(())
}
