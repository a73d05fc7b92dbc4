//! Random `n`-sheeted covers of `Γ(2)\H`.
//!
//! `Γ(2)` (modulo ±1) is free on `A = [[1,2],[0,1]]` and `B = [[1,0],[2,1]]`,
//! so any pair of permutations `(σ_A, σ_B)` of `n` sheets defines an action
//! and hence an index-`n` subgroup. A point of the cover is a point of the
//! `Γ(2)` domain plus a sheet; reducing a lifted point by a word in `A`, `B`
//! moves the sheet by the same word.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{sphere_point_at_i, PointH};

use super::reduce::MAX_REDUCTION_STEPS;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Letter {
    A,
    AInv,
    B,
    BInv,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RandomCover {
    sigma_a: Vec<usize>,
    sigma_b: Vec<usize>,
    inv_a: Vec<usize>,
    inv_b: Vec<usize>,
}

fn check_perm(p: &[usize], name: &str) -> Result<Vec<usize>> {
    let mut inv = vec![usize::MAX; p.len()];
    for (i, &j) in p.iter().enumerate() {
        if j >= p.len() || inv[j] != usize::MAX {
            return Err(invalid(format!("{name} is not a permutation of 0..{}", p.len())));
        }
        inv[j] = i;
    }
    Ok(inv)
}

impl RandomCover {
    /// Builds a cover from 0-based permutations.
    pub fn new(sigma_a: Vec<usize>, sigma_b: Vec<usize>) -> Result<Self> {
        if sigma_a.is_empty() || sigma_a.len() != sigma_b.len() {
            return Err(invalid("permutations must be non-empty and of equal length"));
        }
        let inv_a = check_perm(&sigma_a, "sigma_A")?;
        let inv_b = check_perm(&sigma_b, "sigma_B")?;
        Ok(RandomCover {
            sigma_a,
            sigma_b,
            inv_a,
            inv_b,
        })
    }

    pub fn trivial() -> Self {
        RandomCover::new(vec![0], vec![0]).expect("valid")
    }

    pub fn n(&self) -> usize {
        self.sigma_a.len()
    }

    pub fn sigma_a(&self) -> &[usize] {
        &self.sigma_a
    }

    pub fn sigma_b(&self) -> &[usize] {
        &self.sigma_b
    }

    #[inline]
    pub fn apply(&self, letter: Letter, sheet: usize) -> usize {
        match letter {
            Letter::A => self.sigma_a[sheet],
            Letter::AInv => self.inv_a[sheet],
            Letter::B => self.sigma_b[sheet],
            Letter::BInv => self.inv_b[sheet],
        }
    }

    /// Moves `sheet` along a word, letters in the order they were applied.
    pub fn transfer(&self, word: &[Letter], sheet: usize) -> usize {
        word.iter().fold(sheet, |s, &l| self.apply(l, s))
    }

    /// Whether the sheets form a single orbit (the cover is connected).
    pub fn is_transitive(&self) -> bool {
        let n = self.n();
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(s) = stack.pop() {
            for l in [Letter::A, Letter::AInv, Letter::B, Letter::BInv] {
                let t = self.apply(l, s);
                if !seen[t] {
                    seen[t] = true;
                    stack.push(t);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }
}

/// Uniformly random pair of permutations; connectivity is reported by
/// [`RandomCover::is_transitive`], not enforced.
pub fn random_cover<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RandomCover> {
    if n == 0 {
        return Err(invalid("a cover needs at least one sheet"));
    }
    let mut a: Vec<usize> = (0..n).collect();
    let mut b: Vec<usize> = (0..n).collect();
    a.shuffle(rng);
    b.shuffle(rng);
    RandomCover::new(a, b)
}

/// Is `z` in `{|x| ≤ 1, |z - ½| ≥ ½, |z + ½| ≥ ½}` (up to `1e-12`)?
pub fn in_gamma2_domain(z: &PointH) -> bool {
    let (x, y) = (z.x(), z.y());
    x.abs() <= 1.0 + 1e-12
        && (x - 0.5).powi(2) + y * y >= 0.25 - 1e-12
        && (x + 0.5).powi(2) + y * y >= 0.25 - 1e-12
}

/// Moves `z` into the `Γ(2)` domain, appending the applied letters to `word`.
pub fn reduce_gamma2(z: &PointH, word: &mut Vec<Letter>) -> Result<PointH> {
    let (mut x, mut y) = (z.x(), z.y());
    for _ in 0..MAX_REDUCTION_STEPS {
        let k = (x / 2.0).round();
        if k != 0.0 {
            x -= 2.0 * k;
            let letter = if k > 0.0 { Letter::AInv } else { Letter::A };
            word.extend(std::iter::repeat_n(letter, k.abs() as usize));
        }
        let r_plus = (x - 0.5).powi(2) + y * y;
        let r_minus = (x + 0.5).powi(2) + y * y;
        if r_plus < 0.25 - 1e-12 {
            // B⁻¹: z -> z / (1 - 2z)
            let (re, im) = (1.0 - 2.0 * x, -2.0 * y);
            let den = re * re + im * im;
            (x, y) = ((x * re - 2.0 * y * y) / den, y / den);
            word.push(Letter::BInv);
        } else if r_minus < 0.25 - 1e-12 {
            // B: z -> z / (1 + 2z)
            let (re, im) = (1.0 + 2.0 * x, 2.0 * y);
            let den = re * re + im * im;
            (x, y) = ((x * re + 2.0 * y * y) / den, y / den);
            word.push(Letter::B);
        } else {
            if !(y > 0.0) || !y.is_finite() {
                return Err(Error::NumericRange(format!("reduction left the half-plane at {z}")));
            }
            return Ok(PointH::new_unchecked(x, y));
        }
    }
    Err(Error::Degenerate(MAX_REDUCTION_STEPS))
}

/// One walker on the cover.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoverState {
    pub z: PointH,
    pub sheet: usize,
}

/// One step of length `r1` in a uniform direction, then reduction.
pub fn cover_step<R: Rng + ?Sized>(
    cover: &RandomCover,
    s: &CoverState,
    r1: f64,
    word: &mut Vec<Letter>,
    rng: &mut R,
) -> Result<CoverState> {
    let w = sphere_point_at_i(r1, std::f64::consts::PI * rng.random::<f64>());
    let lifted = PointH::new_unchecked(s.z.x() + s.z.y() * w.x(), s.z.y() * w.y());
    word.clear();
    let z = reduce_gamma2(&lifted, word)?;
    Ok(CoverState {
        z,
        sheet: cover.transfer(word, s.sheet),
    })
}

/// Total-variation distance (sum convention, in `[0, 2]`) of the sheet
/// marginal from uniform after each of `k_max` steps.
///
/// A coarse spectral probe: a cover with a small gap keeps the sheet
/// distribution away from uniform for longer.
pub fn sheet_mixing_profile(
    cover: &RandomCover,
    start: CoverState,
    r1: f64,
    k_max: usize,
    n_walkers: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    let n = cover.n();
    let chunks = crate::rng::map_chunks(n_walkers, |lo, hi| -> Result<Vec<u64>> {
        let mut counts = vec![0u64; (k_max + 1) * n];
        let mut word = Vec::new();
        for w in lo..hi {
            let mut rng = crate::rng::walker_rng(seed, w as u64);
            let mut s = start;
            counts[s.sheet] += 1;
            for k in 1..=k_max {
                s = cover_step(cover, &s, r1, &mut word, &mut rng)?;
                counts[k * n + s.sheet] += 1;
            }
        }
        Ok(counts)
    });
    let mut total = vec![0u64; (k_max + 1) * n];
    for c in chunks {
        for (t, v) in total.iter_mut().zip(c?) {
            *t += v;
        }
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
    use crate::geometry::{distance, mobius_apply, MobiusReal};
    use crate::rng::walker_rng;

    fn perms(n: usize) -> Vec<Vec<usize>> {
        if n == 0 {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for p in perms(n - 1) {
            for pos in 0..=p.len() {
                let mut q = p.clone();
                q.insert(pos, n - 1);
                out.push(q);
            }
        }
        out
    }

    // Oracle: closure of the generated group, then orbit of 0.
    fn transitive_by_closure(a: &[usize], b: &[usize]) -> bool {
        let n = a.len();
        let compose = |p: &[usize], q: &[usize]| -> Vec<usize> { (0..n).map(|i| p[q[i]]).collect() };
        let mut group = vec![(0..n).collect::<Vec<_>>()];
        let mut i = 0;
        while i < group.len() {
            for g in [a, b] {
                let h = compose(g, &group[i]);
                if !group.contains(&h) {
                    group.push(h);
                }
            }
            i += 1;
        }
        let orbit: std::collections::HashSet<usize> = group.iter().map(|g| g[0]).collect();
        orbit.len() == n
    }

    #[test]
    fn transitive_count_n3() {
        let ps = perms(3);
        let mut ours = 0;
        let mut oracle = 0;
        for a in &ps {
            for b in &ps {
                let c = RandomCover::new(a.clone(), b.clone()).unwrap();
                ours += c.is_transitive() as usize;
                oracle += transitive_by_closure(a, b) as usize;
            }
        }
        assert_eq!(ours, oracle);
        assert_eq!(ours, 26);
    }

    #[test]
    fn rejects_non_permutations() {
        assert!(RandomCover::new(vec![0, 0], vec![0, 1]).is_err());
        assert!(RandomCover::new(vec![0, 1], vec![0]).is_err());
        assert!(random_cover(0, &mut walker_rng(0, 0)).is_err());
    }

    #[test]
    fn cancellation_leaves_sheet() {
        let c = random_cover(7, &mut walker_rng(3, 0)).unwrap();
        for s in 0..7 {
            assert_eq!(c.transfer(&[Letter::A, Letter::AInv], s), s);
            assert_eq!(c.transfer(&[Letter::BInv, Letter::B], s), s);
        }
    }

    #[test]
    fn reduction_word_maps_point() {
        let mut rng = walker_rng(4, 0);
        for _ in 0..500 {
            let z = PointH::new(rng.random_range(-9.0..9.0), 10f64.powf(rng.random_range(-3.0..1.0))).unwrap();
            let mut word = Vec::new();
            let w = reduce_gamma2(&z, &mut word).unwrap();
            assert!(in_gamma2_domain(&w));
            let mut g = MobiusReal::identity();
            for l in &word {
                let m = match l {
                    Letter::A => MobiusReal::new(1.0, 2.0, 0.0, 1.0),
                    Letter::AInv => MobiusReal::new(1.0, -2.0, 0.0, 1.0),
                    Letter::B => MobiusReal::new(1.0, 0.0, 2.0, 1.0),
                    Letter::BInv => MobiusReal::new(1.0, 0.0, -2.0, 1.0),
                }
                .unwrap();
                g = m.compose(&g);
            }
            assert!(distance(&mobius_apply(&g, &z).unwrap(), &w) < 1e-6);
        }
    }

    #[test]
    fn trivial_cover_walk_matches_base_walk() {
        let c = RandomCover::trivial();
        let mut r1 = walker_rng(8, 0);
        let mut r2 = walker_rng(8, 0);
        let mut s = CoverState {
            z: PointH::new(0.1, 1.5).unwrap(),
            sheet: 0,
        };
        let mut z = s.z;
        let mut word = Vec::new();
        for _ in 0..50 {
            s = cover_step(&c, &s, 1.0, &mut word, &mut r1).unwrap();
            let th = std::f64::consts::PI * r2.random::<f64>();
            let w = sphere_point_at_i(1.0, th);
            let lifted = PointH::new(z.x() + z.y() * w.x(), z.y() * w.y()).unwrap();
            z = reduce_gamma2(&lifted, &mut Vec::new()).unwrap();
            assert_eq!(s.sheet, 0);
            assert_eq!(s.z, z);
        }
    }

    #[test]
    fn connected_cover_sheet_marginal_mixes() {
        let c = RandomCover::new(vec![1, 2, 0], vec![0, 2, 1]).unwrap();
        assert!(c.is_transitive());
        let start = CoverState {
            z: PointH::new(0.0, 2.0).unwrap(),
            sheet: 0,
        };
        let prof = sheet_mixing_profile(&c, start, 1.0, 40, 4000, 1).unwrap();
        assert!((prof[0] - 4.0 / 3.0).abs() < 1e-12);
        assert!(prof[40] < 0.1, "{prof:?}");
    }
}
