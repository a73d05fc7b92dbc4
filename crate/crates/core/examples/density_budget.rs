//! Eigenvalue budgets for families of covers and the requirements they meet.
//!
//!     cargo run --release --example density_budget

use hypercut::density::{density_condition_check, normal_cover_requirement, EigenvalueBudget, GrowthFunction};

fn main() -> hypercut::Result<()> {
    let ps = [2.5, 3.0, 4.0, 6.0, 8.0];
    let ns = [1e3, 1e4, 1e5, 1e6];
    let g = GrowthFunction::linear(1.2);
    for (name, make) in [
        ("A=1 synthetic", EigenvalueBudget::synthetic_a1 as fn(f64, &[f64]) -> hypercut::Result<EigenvalueBudget>),
        ("uniform M=N", EigenvalueBudget::uniform),
    ] {
        let budgets = ns.iter().map(|&n| make(n, &ps)).collect::<hypercut::Result<Vec<_>>>()?;
        println!("{name}:");
        for b in &budgets {
            let c = density_condition_check(b, 1.0, 0.5, 1.0)?;
            println!("  N={:.0e} total {} density condition {}", b.degree(), b.total(), c.pass);
        }
        let rep = normal_cover_requirement(&budgets, &g)?;
        for r in &rep.rows {
            println!(
                "  N={:.0e} g={:.3} req0={:.4e} integral={:.4e} limit={:.4e}",
                r.n, r.g, r.req0, r.req_integral, r.req_limit
            );
        }
        println!("  all requirements vanishing: {}", rep.pass);
    }
    Ok(())
}
