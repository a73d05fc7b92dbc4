//! Distances, Möbius maps and hyperbolic circles in the upper half-plane.
//!
//!     cargo run --release --example geodesics

use hypercut::geometry::{ball_volume, inverse_ball_radius, mobius_apply, sphere_point};
use hypercut::{distance, MobiusReal, PointH};

fn main() -> hypercut::Result<()> {
    let z = PointH::new(0.3, 0.8)?;
    let w = PointH::new(-1.2, 2.5)?;
    println!("d(z, w) = {:.12}", distance(&z, &w));

    // isometries preserve distance
    let g = MobiusReal::new(2.0, 1.0, 3.0, 2.0)?;
    let (gz, gw) = (mobius_apply(&g, &z)?, mobius_apply(&g, &w)?);
    println!("d(gz, gw) = {:.12}", distance(&gz, &gw));

    println!("points on the circle of radius 1.5 around z:");
    for k in 0..6 {
        let theta = std::f64::consts::PI * k as f64 / 6.0;
        let p = sphere_point(&z, 1.5, theta)?;
        println!("  θ={theta:.3}  p = {:.5} + {:.5}i  d = {:.12}", p.x(), p.y(), distance(&z, &p));
    }

    for r in [0.5, 1.0, 2.0, 5.0] {
        let v = ball_volume(r)?;
        println!("area of B({r}) = {v:.6}, radius back = {:.12}", inverse_ball_radius(v)?);
    }
    Ok(())
}
