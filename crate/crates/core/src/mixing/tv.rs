//! Total-variation profiles of the step walk on `X_q`.

use std::io::Write;

use rand::Rng;
use rand_distr::{Binomial, Distribution};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::PointH;
use crate::modular::{CosetModQ, QuotientGeometry, QuotientPoint};
use crate::rng::{walker_rng, CHUNK};
use crate::walk::{quotient_step, SheetState};

use super::partition::CellPartition;

/// Default start: a point of the fundamental domain with trivial stabilizer.
pub const DEFAULT_START: PointH = PointH::new_unchecked(0.2, 1.1);
pub const BOOTSTRAP_RESAMPLES: usize = 200;
const INJ_REACH: f64 = 8.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct TvConfig {
    pub q: u32,
    pub r1: f64,
    pub k_max: usize,
    pub n_walkers: usize,
    pub seed: u64,
    #[serde(default = "default_start")]
    pub x0: PointH,
    /// Sheet of the start as `(a, b, c, d)` mod `q`; identity if absent.
    #[serde(default)]
    pub sheet: Option<[i64; 4]>,
    #[serde(default = "default_y_cap")]
    pub y_cap: f64,
    /// Cell measure bound as a fraction of `μ(X_q)`.
    #[serde(default = "default_resolution")]
    pub resolution: f64,
    /// Required injectivity radius at the start.
    #[serde(default = "default_r0")]
    pub r0: f64,
    #[serde(default = "default_bootstrap")]
    pub bootstrap: usize,
}

fn default_start() -> PointH {
    DEFAULT_START
}
fn default_y_cap() -> f64 {
    10.0
}
fn default_resolution() -> f64 {
    1e-3
}
fn default_r0() -> f64 {
    0.1
}
fn default_bootstrap() -> usize {
    BOOTSTRAP_RESAMPLES
}

impl Default for TvConfig {
    fn default() -> Self {
        TvConfig::new(3, 1.0, 30, 100_000, 0)
    }
}

impl TvConfig {
    pub fn new(q: u32, r1: f64, k_max: usize, n_walkers: usize, seed: u64) -> Self {
        TvConfig {
            q,
            r1,
            k_max,
            n_walkers,
            seed,
            x0: DEFAULT_START,
            sheet: None,
            y_cap: default_y_cap(),
            resolution: default_resolution(),
            r0: default_r0(),
            bootstrap: BOOTSTRAP_RESAMPLES,
        }
    }

    pub fn start_sheet(&self) -> Result<CosetModQ> {
        match self.sheet {
            None => Ok(CosetModQ::identity(self.q)),
            Some([a, b, c, d]) => CosetModQ::new(self.q, a, b, c, d),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TvPoint {
    pub k: usize,
    pub tv: f64,
    pub ci_lo: f64,
    pub ci_hi: f64,
    /// Mean bootstrap TV minus the plug-in value.
    pub bias: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct TvProfile {
    pub config: TvConfig,
    pub degree: usize,
    pub area: f64,
    pub injectivity_radius: f64,
    pub cells_per_sheet: usize,
    pub partition_dims: (usize, usize),
    pub max_cell_fraction: f64,
    /// Bins whose expected count at equilibrium is below 5.
    pub starved_bins: usize,
    pub points: Vec<TvPoint>,
}

impl TvProfile {
    pub fn tv(&self) -> Vec<(f64, f64)> {
        self.points.iter().map(|p| (p.k as f64, p.tv)).collect()
    }

    /// CSV with header `k,tv,ci_lo,ci_hi`.
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["k", "tv", "ci_lo", "ci_hi"])?;
        for p in &self.points {
            out.write_record([
                p.k.to_string(),
                format!("{:.10e}", p.tv),
                format!("{:.10e}", p.ci_lo),
                format!("{:.10e}", p.ci_hi),
            ])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// `Σ |c/n - p|` over bins.
fn l1_gap(counts: &[u64], n: f64, target: &[f64]) -> f64 {
    counts.iter().zip(target).map(|(&c, &p)| (c as f64 / n - p).abs()).sum()
}

fn multinomial<R: Rng + ?Sized>(n: u64, probs: &[f64], out: &mut [u64], rng: &mut R) {
    let mut left = n;
    let mut mass = 1.0;
    for (o, &p) in out.iter_mut().zip(probs) {
        if left == 0 || p <= 0.0 {
            *o = 0;
            continue;
        }
        let pr = (p / mass).clamp(0.0, 1.0);
        let draw = Binomial::new(left, pr).expect("valid").sample(rng);
        *o = draw;
        left -= draw;
        mass -= p;
    }
}

/// Walk histograms on `X_q` compared with the normalized volume.
pub fn tv_profile(cfg: &TvConfig) -> Result<TvProfile> {
    if cfg.n_walkers == 0 || !(cfg.r1 > 0.0) {
        return Err(invalid("need walkers and a positive step"));
    }
    let sheet = cfg.start_sheet()?;
    let start = QuotientPoint::new(cfg.x0, sheet)?;
    let geo = QuotientGeometry::with_bound(cfg.q, INJ_REACH + 2.0 * crate::distance(&PointH::i(), &cfg.x0))?;
    // beyond the reach only a lower bound is known, which is all we need
    let inj = match geo.injectivity_radius(&start, INJ_REACH) {
        Ok(i) => i,
        Err(Error::Range(_)) => crate::modular::Injectivity {
            radius: 0.5 * INJ_REACH,
            stabilizer_order: 1,
        },
        Err(e) => return Err(e),
    };
    if inj.radius < cfg.r0 || inj.stabilizer_order > 1 {
        return Err(Error::Domain(format!(
            "start has injectivity radius {} (floor {}) and stabilizer order {}",
            inj.radius, cfg.r0, inj.stabilizer_order
        )));
    }
    let table = geo.table();
    let n_sheets = table.len();
    let area = geo.area();
    let part = CellPartition::with_resolution(cfg.y_cap, cfg.resolution * area)?;
    let bins = part.bins_per_sheet();
    let total_bins = n_sheets * bins;
    let target: Vec<f64> = (0..total_bins).map(|b| part.bin_measure(b % bins) / area).collect();
    let n = cfg.n_walkers;
    let stride = cfg.k_max + 1;
    let s0 = SheetState::from_point(table, &start);

    let n_chunks = n.div_ceil(CHUNK);
    let counts = (0..n_chunks)
        .into_par_iter()
        .try_fold(
            || vec![0u64; stride * total_bins],
            |mut acc, c| -> Result<Vec<u64>> {
                for w in c * CHUNK..((c + 1) * CHUNK).min(n) {
                    let mut rng = walker_rng(cfg.seed, w as u64);
                    let mut s = s0;
                    for k in 0..=cfg.k_max {
                        if k > 0 {
                            s = quotient_step(table, &s, cfg.r1, &mut rng)?;
                        }
                        acc[k * total_bins + s.sheet * bins + part.locate(&s.z)] += 1;
                    }
                }
                Ok(acc)
            },
        )
        .try_reduce(
            || vec![0u64; stride * total_bins],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                Ok(a)
            },
        )?;

    let nf = n as f64;
    let points = (0..=cfg.k_max)
        .into_par_iter()
        .map(|k| {
            let row = &counts[k * total_bins..(k + 1) * total_bins];
            let tv = l1_gap(row, nf, &target);
            let probs: Vec<f64> = row.iter().map(|&c| c as f64 / nf).collect();
            let mut rng = walker_rng(cfg.seed ^ 0xB007_5742_u64, k as u64);
            let mut buf = vec![0u64; total_bins];
            let mut boot: Vec<f64> = (0..cfg.bootstrap)
                .map(|_| {
                    multinomial(n as u64, &probs, &mut buf, &mut rng);
                    l1_gap(&buf, nf, &target)
                })
                .collect();
            boot.sort_by(f64::total_cmp);
            // basic (pivotal) interval: resampling adds the plug-in bias a
            // second time, so percentile intervals would sit above the value
            let (ci_lo, ci_hi, bias) = if boot.is_empty() {
                (tv, tv, 0.0)
            } else {
                (
                    (2.0 * tv - crate::stats::quantile_sorted(&boot, 0.975)).clamp(0.0, 2.0),
                    (2.0 * tv - crate::stats::quantile_sorted(&boot, 0.025)).clamp(0.0, 2.0),
                    crate::stats::mean(&boot) - tv,
                )
            };
            TvPoint { k, tv, ci_lo, ci_hi, bias }
        })
        .collect();
    let starved_bins = target.iter().filter(|p| **p * nf < 5.0).count();
    Ok(TvProfile {
        config: *cfg,
        degree: n_sheets,
        area,
        injectivity_radius: inj.radius,
        cells_per_sheet: part.len(),
        partition_dims: part.dims(),
        max_cell_fraction: part.max_measure() / area,
        starved_bins,
        points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn point_mass_at_start() {
        let p = tv_profile(&TvConfig::new(2, 1.0, 0, 2000, 1)).unwrap();
        let t = p.points[0].tv;
        assert!(t > 1.95 && t < 2.0, "{t}");
    }

    #[test]
    fn profile_decreases() {
        let mut cfg = TvConfig::new(2, 1.0, 20, 50_000, 3);
        cfg.bootstrap = 50;
        let p = tv_profile(&cfg).unwrap();
        for w in p.points.windows(2) {
            // intervals are bias corrected, so compare them with each other
            assert!(w[1].ci_lo <= w[0].ci_hi, "{:?}", w);
        }
        assert!(p.points.last().unwrap().tv < 0.5);
    }

    #[test]
    fn deck_translate_gives_same_profile() {
        let mut a = TvConfig::new(3, 1.0, 8, 40_000, 5);
        a.bootstrap = 100;
        let mut b = a;
        b.sheet = Some([1, 1, 0, 1]);
        b.seed = 6;
        let (pa, pb) = (tv_profile(&a).unwrap(), tv_profile(&b).unwrap());
        for (x, y) in pa.points.iter().zip(&pb.points) {
            let half = 0.5 * ((x.ci_hi - x.ci_lo) + (y.ci_hi - y.ci_lo));
            assert!((x.tv - y.tv).abs() <= half + 0.01, "{x:?} {y:?}");
        }
    }

    #[test]
    fn refining_partition_changes_little() {
        let mut a = TvConfig::new(2, 1.0, 6, 60_000, 9);
        a.bootstrap = 50;
        a.resolution = 2e-3;
        let mut b = a;
        b.resolution = 5e-4;
        let (pa, pb) = (tv_profile(&a).unwrap(), tv_profile(&b).unwrap());
        assert!(pb.cells_per_sheet > pa.cells_per_sheet);
        // after one step the law sits on a circle and has no density, so
        // only k ≥ 2 is resolution independent
        for (x, y) in pa.points.iter().zip(&pb.points).skip(2) {
            let (bx, by) = (x.tv - x.bias, y.tv - y.bias);
            assert!((bx - by).abs() < 0.05, "{x:?} {y:?}");
        }
    }

    #[test]
    fn rejects_elliptic_start() {
        let mut cfg = TvConfig::new(1, 1.0, 1, 10, 1);
        cfg.x0 = PointH::i();
        assert!(matches!(tv_profile(&cfg), Err(Error::Domain(_))));
    }
}
