//! The step walk: move distance `r1` in a uniformly random direction.

use std::io::Write;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{distance, sphere_point_at_i, PointH};
use crate::rng::{map_chunks, walker_rng};
use crate::stats::{quantile_sorted, sorted};

/// Parameters of an ensemble of step walks in the plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct WalkConfig {
    pub r1: f64,
    pub k: usize,
    pub n_walkers: usize,
    pub seed: u64,
    #[serde(default = "default_start")]
    pub z0: PointH,
}

fn default_start() -> PointH {
    PointH::i()
}

impl WalkConfig {
    pub fn new(r1: f64, k: usize, n_walkers: usize, seed: u64) -> Self {
        WalkConfig {
            r1,
            k,
            n_walkers,
            seed,
            z0: PointH::i(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.r1 > 0.0) || !self.r1.is_finite() {
            return Err(invalid(format!("step length must be positive, got {}", self.r1)));
        }
        if self.n_walkers == 0 {
            return Err(invalid("need at least one walker"));
        }
        if self.k as f64 * self.r1 > crate::geometry::MAX_RADIUS {
            return Err(Error::NumericRange(format!(
                "k r1 = {} exceeds {}",
                self.k as f64 * self.r1,
                crate::geometry::MAX_RADIUS
            )));
        }
        Ok(())
    }
}

/// One step of length `r1` from `z`, direction `θ` uniform on `[0, π)`.
#[inline]
pub fn step_discrete<R: Rng + ?Sized>(z: &PointH, r1: f64, rng: &mut R) -> PointH {
    let w = sphere_point_at_i(r1, std::f64::consts::PI * rng.random::<f64>());
    PointH::new_unchecked(z.x() + z.y() * w.x(), z.y() * w.y())
}

/// Moments of one observable at one step.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct Moments {
    pub mean: f64,
    pub var: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct StepSummary {
    pub step: usize,
    pub ln_y: Moments,
    pub dist: Moments,
    pub x2: Moments,
}

/// Per-step aggregates plus the full final-step samples.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WalkStats {
    pub config: WalkConfig,
    pub steps: Vec<StepSummary>,
    /// `ln(y_k / y_0)` per walker.
    pub final_ln_y: Vec<f64>,
    pub final_dist: Vec<f64>,
    /// `(x_k - x_0)² / y_0²`.
    pub final_x2: Vec<f64>,
    /// Quantiles 1%, 10%, 50%, 90%, 99% of the final distance.
    pub dist_quantiles: [f64; 5],
}

struct Chunk {
    sums: Vec<[f64; 6]>,
    ln_y: Vec<f64>,
    dist: Vec<f64>,
    x2: Vec<f64>,
    traj: Vec<(usize, usize, f64, f64)>,
}

/// Runs the ensemble. Trajectories of the first `record` walkers are
/// returned as `(walker, step, x, y)` rows.
pub fn walk_discrete_with_trajectories(
    cfg: &WalkConfig,
    record: usize,
) -> Result<(WalkStats, Vec<(usize, usize, f64, f64)>)> {
    cfg.validate()?;
    let z0 = cfg.z0;
    let k = cfg.k;
    let chunks = map_chunks(cfg.n_walkers, |lo, hi| -> Result<Chunk> {
        let mut c = Chunk {
            sums: vec![[0.0; 6]; k + 1],
            ln_y: Vec::with_capacity(hi - lo),
            dist: Vec::with_capacity(hi - lo),
            x2: Vec::with_capacity(hi - lo),
            traj: Vec::new(),
        };
        for w in lo..hi {
            let mut rng = walker_rng(cfg.seed, w as u64);
            let mut z = z0;
            let mut ln_y = 0.0;
            for step in 0..=k {
                if step > 0 {
                    let th = std::f64::consts::PI * rng.random::<f64>();
                    let u = sphere_point_at_i(cfg.r1, th);
                    ln_y += u.y().ln();
                    z = PointH::new_unchecked(z.x() + z.y() * u.x(), z.y() * u.y());
                }
                let d = distance(&z0, &z);
                if d > step as f64 * cfg.r1 + 1e-9 * (1.0 + step as f64) {
                    return Err(Error::NumericRange(format!(
                        "walker {w} at distance {d} after {step} steps of {}",
                        cfg.r1
                    )));
                }
                let x2 = ((z.x() - z0.x()) / z0.y()).powi(2);
                let s = &mut c.sums[step];
                s[0] += ln_y;
                s[1] += ln_y * ln_y;
                s[2] += d;
                s[3] += d * d;
                s[4] += x2;
                s[5] += x2 * x2;
                if w < record {
                    c.traj.push((w, step, z.x(), z.y()));
                }
                if step == k {
                    c.ln_y.push(ln_y);
                    c.dist.push(d);
                    c.x2.push(x2);
                }
            }
        }
        Ok(c)
    });
    let mut sums = vec![[0.0; 6]; k + 1];
    let (mut ln_y, mut dist, mut x2, mut traj) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for c in chunks {
        let c = c?;
        for (t, s) in sums.iter_mut().zip(&c.sums) {
            for j in 0..6 {
                t[j] += s[j];
            }
        }
        ln_y.extend(c.ln_y);
        dist.extend(c.dist);
        x2.extend(c.x2);
        traj.extend(c.traj);
    }
    let n = cfg.n_walkers as f64;
    let moments = |s: f64, ss: f64| {
        let mean = s / n;
        let var = if n > 1.0 { ((ss - n * mean * mean) / (n - 1.0)).max(0.0) } else { 0.0 };
        Moments { mean, var }
    };
    let steps = sums
        .iter()
        .enumerate()
        .map(|(step, s)| StepSummary {
            step,
            ln_y: moments(s[0], s[1]),
            dist: moments(s[2], s[3]),
            x2: moments(s[4], s[5]),
        })
        .collect();
    let sd = sorted(&dist);
    let dist_quantiles = [0.01, 0.1, 0.5, 0.9, 0.99].map(|q| quantile_sorted(&sd, q));
    Ok((
        WalkStats {
            config: *cfg,
            steps,
            final_ln_y: ln_y,
            final_dist: dist,
            final_x2: x2,
            dist_quantiles,
        },
        traj,
    ))
}

pub fn walk_discrete(cfg: &WalkConfig) -> Result<WalkStats> {
    Ok(walk_discrete_with_trajectories(cfg, 0)?.0)
}

/// Trajectory dump with header `walker,step,x,y`.
pub fn write_trajectories<W: Write>(rows: &[(usize, usize, f64, f64)], w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["walker", "step", "x", "y"])?;
    for (a, b, x, y) in rows {
        out.write_record([a.to_string(), b.to_string(), format!("{x:.17e}"), format!("{y:.17e}")])?;
    }
    out.flush()?;
    Ok(())
}
