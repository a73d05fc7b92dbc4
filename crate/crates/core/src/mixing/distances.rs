//! Distances from a base point to uniform points of `X_q`.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::{ball_volume, distance, inverse_ball_radius, PointH};
use crate::modular::{max_base_distance, truncated_fraction, QuotientGeometry, QuotientPoint};
use crate::rng::{map_chunks, walker_rng};

/// Cusp cap for uniform samples; the cut-off mass is about 1%.
pub const SAMPLE_Y_CAP: f64 = 100.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GammaRow {
    pub gamma: f64,
    pub below_radius: f64,
    pub frac_below: f64,
    pub frac_above: f64,
    /// `frac_below · R_X^γ`.
    pub scaled_below: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct VolumeRow {
    pub r: f64,
    pub frac_below: f64,
    pub ball_fraction: f64,
    pub rel_err: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistanceHistogram {
    pub q: u32,
    pub r_x: f64,
    pub r_max: f64,
    pub n_samples: usize,
    /// Distances of the sampled points, `None` beyond `r_max`.
    #[serde(skip)]
    pub samples: Vec<Option<f64>>,
    /// Share of `μ(X)` above the sampling cap, whose distances are not
    /// resolved (all of it lies at distance at least `cusp_distance`).
    pub unresolved_mass: f64,
    pub cusp_distance: f64,
    pub gammas: Vec<GammaRow>,
    pub volume: Vec<VolumeRow>,
    /// `max / min` of `scaled_below` over the γ rows.
    pub scaled_spread: f64,
}

impl DistanceHistogram {
    /// Resolved distances, with `+∞` for samples beyond `r_max`.
    pub fn values(&self) -> Vec<f64> {
        self.samples.iter().map(|d| d.unwrap_or(f64::INFINITY)).collect()
    }

    /// Share of `μ(X)` at distance below `r`, counting the unresolved cusp
    /// mass only when `r` exceeds `cusp_distance`.
    pub fn fraction_below(&self, r: f64) -> f64 {
        let n = self.samples.len() as f64;
        let hits = self.samples.iter().filter(|d| matches!(d, Some(v) if *v < r)).count() as f64;
        hits / n * (1.0 - self.unresolved_mass)
    }
}

/// `R_X`, the radius of a ball with the area of `X_q`.
pub fn covering_radius(geo: &QuotientGeometry) -> Result<f64> {
    inverse_ball_radius(geo.area())
}

pub fn distance_histogram(
    geo: &QuotientGeometry,
    x0: &QuotientPoint,
    n_samples: usize,
    r_max: f64,
    gammas: &[f64],
    radii: &[f64],
    seed: u64,
) -> Result<DistanceHistogram> {
    if n_samples == 0 {
        return Err(invalid("need samples"));
    }
    let r_x = covering_radius(geo)?;
    if r_max < r_x + 3.0 * r_x.ln() {
        return Err(invalid(format!("R_max {r_max} is below R_X + 3 ln R_X = {}", r_x + 3.0 * r_x.ln())));
    }
    let samples = map_chunks(n_samples, |lo, hi| -> Result<Vec<Option<f64>>> {
        (lo..hi)
            .map(|i| {
                let mut rng = walker_rng(seed, i as u64);
                let p = geo.sample_uniform(SAMPLE_Y_CAP, &mut rng);
                geo.distance(x0, &p, r_max)
            })
            .collect()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?
    .concat();
    let y0 = x0.base().y();
    let mut h = DistanceHistogram {
        q: geo.q(),
        r_x,
        r_max,
        n_samples,
        samples,
        unresolved_mass: truncated_fraction(SAMPLE_Y_CAP),
        // above the cap: translates climb, anything else drops below 1/Y
        cusp_distance: (SAMPLE_Y_CAP / y0).ln().min((y0 * SAMPLE_Y_CAP).ln()),
        gammas: Vec::new(),
        volume: Vec::new(),
        scaled_spread: f64::NAN,
    };
    let n = n_samples as f64;
    for &g in gammas {
        let lo = r_x - g * r_x.ln();
        let hi = r_x + g * r_x.ln();
        let frac_below = h.fraction_below(lo);
        let above = h.samples.iter().filter(|d| d.is_none_or(|v| v > hi)).count() as f64 / n;
        h.gammas.push(GammaRow {
            gamma: g,
            below_radius: lo,
            frac_below,
            frac_above: above * (1.0 - h.unresolved_mass),
            scaled_below: frac_below * r_x.powf(g),
        });
    }
    for &r in radii {
        let f = h.fraction_below(r);
        let b = ball_volume(r)? / geo.area();
        h.volume.push(VolumeRow { r, frac_below: f, ball_fraction: b, rel_err: (f - b).abs() / b });
    }
    let s: Vec<f64> = h.gammas.iter().map(|g| g.scaled_below).filter(|v| *v > 0.0).collect();
    if !s.is_empty() {
        h.scaled_spread = s.iter().cloned().fold(0.0, f64::max) / s.iter().cloned().fold(f64::INFINITY, f64::min);
    }
    Ok(h)
}

/// Geometry able to answer every query of [`distance_histogram`] from `x0`.
pub fn histogram_geometry(q: u32, x0: &PointH, r_max: f64) -> Result<QuotientGeometry> {
    QuotientGeometry::with_bound(q, r_max + distance(&PointH::i(), x0) + max_base_distance(SAMPLE_Y_CAP))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modular::CosetModQ;
    use crate::mixing::DEFAULT_START;

    #[test]
    fn small_balls_match_volume() {
        let q = 3;
        let geo = histogram_geometry(q, &DEFAULT_START, 6.5).unwrap();
        let x0 = QuotientPoint::new(DEFAULT_START, CosetModQ::identity(q)).unwrap();
        let h = distance_histogram(&geo, &x0, 20_000, 6.5, &[0.0, 1.0], &[0.5, 0.6], 4).unwrap();
        for v in &h.volume {
            assert!(v.rel_err < 0.1, "{v:?}");
        }
        // γ = 0: everything below R_X is at most the ball fraction, i.e. ≤ 1
        assert!(h.gammas[0].frac_below <= 1.0);
    }

    #[test]
    fn short_reach_is_refused() {
        let geo = histogram_geometry(2, &DEFAULT_START, 3.0).unwrap();
        let x0 = QuotientPoint::new(DEFAULT_START, CosetModQ::identity(2)).unwrap();
        assert!(distance_histogram(&geo, &x0, 10, 1.0, &[], &[], 0).is_err());
    }
}
