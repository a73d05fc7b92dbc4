//! Random permutation covers of the level-2 quotient and how fast the walk
//! spreads over their sheets, next to the congruence cover X_4.
//!
//!     cargo run --release --example random_cover -- [walkers]

use hypercut::mixing::DEFAULT_START;
use hypercut::modular::cover::{reduce_gamma2, sheet_mixing_profile, CoverState};
use hypercut::modular::{coset_index, random_cover, CosetModQ, QuotientPoint};
use hypercut::rng::walker_rng;
use hypercut::walk::{sheet_profile, SheetState};

fn main() -> hypercut::Result<()> {
    let n_walkers: usize = std::env::args().nth(1).and_then(|s| s.parse().ok()).unwrap_or(20_000);
    let (r1, k_max) = (1.0, 12);
    let mut word = Vec::new();
    let z = reduce_gamma2(&DEFAULT_START, &mut word)?;
    for n in [4, 8, 16] {
        let cover = random_cover(n, &mut walker_rng(99, n as u64))?;
        let prof = sheet_mixing_profile(&cover, CoverState { z, sheet: 0 }, r1, k_max, n_walkers, 3)?;
        println!("random cover of degree {n} (transitive: {}):", cover.is_transitive());
        println!("  TV by step {:.3?}", prof);
    }
    let table = coset_index(4)?;
    let p = QuotientPoint::from_lift(&DEFAULT_START, CosetModQ::identity(4))?;
    let prof = sheet_profile(&table, &SheetState::from_point(&table, &p), r1, k_max, n_walkers, 3)?;
    println!("congruence cover X_4 (degree {}):", table.len());
    println!("  TV by step {:.3?}", prof);
    Ok(())
}
