//! Walks on the congruence covers `X_q`.
//!
//! A state is a point of the fundamental domain together with the index of
//! its sheet in the coset table. After each move in the plane the point is
//! reduced back, and the reducing matrix acts on the sheet from the left.

use rand::Rng;

use crate::error::Result;
use crate::geometry::{sphere_point_at_i, PointH};
use crate::modular::{reduce_fundamental, CosetTable, QuotientPoint};
use crate::rng::{map_chunks, walker_rng};
use crate::spectral::HeatLaw;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheetState {
    pub z: PointH,
    pub sheet: usize,
}

impl SheetState {
    pub fn from_point(table: &CosetTable, p: &QuotientPoint) -> Self {
        SheetState {
            z: p.base(),
            sheet: table.index_of(&p.sheet()),
        }
    }

    pub fn to_point(&self, table: &CosetTable) -> Result<QuotientPoint> {
        QuotientPoint::new(self.z, table.element(self.sheet))
    }
}

fn move_by<R: Rng + ?Sized>(table: &CosetTable, s: &SheetState, r: f64, rng: &mut R) -> Result<SheetState> {
    let u = sphere_point_at_i(r, std::f64::consts::PI * rng.random::<f64>());
    let w = PointH::new_unchecked(s.z.x() + s.z.y() * u.x(), s.z.y() * u.y());
    let (z, g) = reduce_fundamental(&w)?;
    Ok(SheetState {
        z,
        sheet: table.left_mul(&g, s.sheet),
    })
}

pub fn quotient_step<R: Rng + ?Sized>(
    table: &CosetTable,
    s: &SheetState,
    r1: f64,
    rng: &mut R,
) -> Result<SheetState> {
    move_by(table, s, r1, rng)
}

pub fn quotient_brownian<R: Rng + ?Sized>(
    table: &CosetTable,
    s: &SheetState,
    law: &HeatLaw,
    rng: &mut R,
) -> Result<SheetState> {
    let r = law.grid.sample(rng);
    move_by(table, s, r, rng)
}

/// Total variation (in `[0, 2]`) of the sheet marginal from uniform after
/// each of `k_max` steps from `start`.
pub fn sheet_profile(
    table: &CosetTable,
    start: &SheetState,
    r1: f64,
    k_max: usize,
    n_walkers: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = table.len();
    let chunks = map_chunks(n_walkers, |lo, hi| -> Result<Vec<u64>> {
        let mut counts = vec![0u64; (k_max + 1) * n];
        for w in lo..hi {
            let mut rng = walker_rng(seed, w as u64);
            let mut s = *start;
            counts[s.sheet] += 1;
            for k in 1..=k_max {
                s = quotient_step(table, &s, r1, &mut rng)?;
                counts[k * n + s.sheet] += 1;
            }
        }
        Ok(counts)
    });
    let mut total = vec![0u64; (k_max + 1) * n];
    for c in chunks {
        total.iter_mut().zip(c?).for_each(|(t, v)| *t += v);
    }
    Ok((0..=k_max)
        .map(|k| {
            total[k * n..(k + 1) * n]
                .iter()
                .map(|&c| (c as f64 / n_walkers as f64 - 1.0 / n as f64).abs())
                .sum()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::{coset_index, CosetModQ, QuotientGeometry};

    #[test]
    fn step_has_length_on_quotient() {
        let geo = QuotientGeometry::new(3, 1.5, 4.0).unwrap();
        let t = geo.table();
        let start = QuotientPoint::new(PointH::new(0.2, 1.1).unwrap(), CosetModQ::identity(3)).unwrap();
        let mut s = SheetState::from_point(t, &start);
        let mut rng = walker_rng(2, 0);
        for _ in 0..50 {
            let n = quotient_step(t, &s, 1.0, &mut rng).unwrap();
            if n.z.y() < 4.0 && s.z.y() < 4.0 {
                let d = geo
                    .distance(&s.to_point(t).unwrap(), &n.to_point(t).unwrap(), 1.5)
                    .unwrap()
                    .unwrap();
                // distance on the quotient is at most the step
                assert!(d <= 1.0 + 1e-9, "{d}");
            }
            s = n;
        }
    }

    #[test]
    fn sheets_are_all_visited() {
        let t = coset_index(2).unwrap();
        let mut s = SheetState {
            z: PointH::new(0.2, 1.1).unwrap(),
            sheet: 0,
        };
        let mut seen = vec![false; t.len()];
        let mut rng = walker_rng(1, 0);
        for _ in 0..2000 {
            s = quotient_step(&t, &s, 1.0, &mut rng).unwrap();
            seen[s.sheet] = true;
        }
        assert!(seen.iter().all(|v| *v));
    }

    #[test]
    fn sheet_marginal_equilibrates() {
        let t = coset_index(3).unwrap();
        let s = SheetState { z: PointH::new(0.2, 1.1).unwrap(), sheet: 0 };
        let p = sheet_profile(&t, &s, 1.0, 15, 20_000, 4).unwrap();
        assert!((p[0] - 2.0 * (1.0 - 1.0 / 12.0)).abs() < 1e-12);
        assert!(p[15] < 0.1, "{p:?}");
    }
}
