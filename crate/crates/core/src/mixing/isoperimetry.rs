//! Monte-Carlo check of the dilation inequality `c' ≥ c / (κ(1-c) + c)`.
//!
//! For a region `Y ⊂ X` with `c = μ(Y)/μ(X)` and its `r`-neighbourhood
//! `Y_r` with `c' = μ(Y_r)/μ(X)`, the inequality holds with
//! `κ = (r+1)² e^{-2r/p}` whenever the spectrum of `X` below `¼` is
//! controlled by `p`.

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::{ball_volume, PointH};
use crate::modular::{max_base_distance, truncated_fraction, QuotientGeometry, QuotientPoint};
use crate::rng::{map_chunks, walker_rng};

use super::partition::CellPartition;

/// Cusp cap for the Monte-Carlo points.
pub const MC_Y_CAP: f64 = 100.0;
pub const MAX_DILATION: f64 = 5.0;

pub fn kappa(r: f64, p: f64) -> f64 {
    (r + 1.0).powi(2) * (-2.0 * r / p).exp()
}

pub fn dilation_bound(c: f64, r: f64, p: f64) -> f64 {
    c / (kappa(r, p) * (1.0 - c) + c)
}

/// The region being dilated.
#[derive(Debug, Clone)]
pub enum Region {
    /// Union of `(sheet index, cell index)` pairs of a partition.
    Cells { partition: CellPartition, cells: Vec<(usize, usize)> },
    /// A metric ball, assumed embedded.
    Ball { center: QuotientPoint, radius: f64 },
    Everything,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    Inconclusive,
    /// `p` was not certified, so nothing is asserted.
    Uncertified,
}

#[derive(Debug, Clone, Serialize)]
pub struct IsoReport {
    pub r: f64,
    pub p: f64,
    pub kappa: f64,
    pub c: f64,
    /// Bracket for `c'`: points within `r` of a grid of `Y`, and within
    /// `r + mesh` of it.
    pub c_prime_lo: f64,
    pub c_prime_hi: f64,
    pub mesh: f64,
    pub std_err: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

/// Grid corners inside the fundamental domain, `m` subdivisions per cell
/// side, and the largest subcell diagonal.
fn cell_grid(part: &CellPartition, cells: &[(usize, usize)], m: usize) -> (Vec<(PointH, usize)>, f64) {
    let mut pts = Vec::new();
    let mut mesh = 0.0f64;
    for &(sheet, ci) in cells {
        let c = part.cells()[ci];
        let hx = (c.x1 - c.x0) / m as f64;
        let hu = (c.u1 - c.u0) / m as f64;
        for i in 0..=m {
            for j in 0..=m {
                let x = c.x0 + hx * i as f64;
                let u = c.u0 + hu * j as f64;
                // ds² = u² dx² + du² / u²
                mesh = mesh.max(((c.u1 * hx).powi(2) + (hu / c.u0).powi(2)).sqrt());
                if u * u * (1.0 - x * x) <= 1.0 + 1e-13 {
                    pts.push((PointH::new_unchecked(x, 1.0 / u), sheet));
                }
            }
        }
    }
    (pts, mesh)
}

/// Geometry large enough for [`isoperimetric_check`] at dilation `r`.
pub fn iso_geometry(q: u32, r: f64, region_y_cap: f64) -> Result<QuotientGeometry> {
    QuotientGeometry::with_bound(q, r + 0.5 + max_base_distance(MC_Y_CAP) + max_base_distance(region_y_cap))
}

pub fn isoperimetric_check(
    geo: &QuotientGeometry,
    region: &Region,
    r: f64,
    p: f64,
    certified: bool,
    n_mc: usize,
    seed: u64,
) -> Result<IsoReport> {
    if !(0.0..=MAX_DILATION).contains(&r) || !(p >= 2.0) || n_mc == 0 {
        return Err(invalid(format!("need 0 ≤ r ≤ {MAX_DILATION}, p ≥ 2, samples; got r={r}, p={p}")));
    }
    let table = geo.table();
    let area = geo.area();
    let (c, mesh, grid) = match region {
        Region::Everything => (1.0, 0.0, Vec::new()),
        Region::Ball { radius, .. } => (ball_volume(*radius)? / area, 0.0, Vec::new()),
        Region::Cells { partition, cells } => {
            let c = cells.iter().map(|&(_, i)| partition.cells()[i].measure).sum::<f64>() / area;
            let (pts, mesh) = cell_grid(partition, cells, 4);
            let grid = pts
                .into_iter()
                .map(|(z, s)| QuotientPoint::new(z, table.element(s)))
                .collect::<Result<Vec<_>>>()?;
            (c, mesh, grid)
        }
    };
    if !(c > 0.0 && c <= 1.0) {
        return Err(invalid(format!("region fraction {c} outside (0, 1]")));
    }
    let reach = r + mesh;
    // per sample: 0 outside, 1 within r + mesh only, 2 within r
    let hits = map_chunks(n_mc, |lo, hi| -> Result<Vec<u8>> {
        (lo..hi)
            .map(|i| {
                let mut rng = walker_rng(seed, i as u64);
                let x = geo.sample_uniform(MC_Y_CAP, &mut rng);
                let _: f64 = rng.random();
                Ok(match region {
                    Region::Everything => 2,
                    Region::Ball { center, radius } => match geo.distance(center, &x, radius + r)? {
                        Some(_) => 2,
                        None => 0,
                    },
                    Region::Cells { partition, cells } => {
                        let s = table.index_of(&x.sheet());
                        let here = (s, partition.locate(&x.base()));
                        if x.base().y() <= partition.y_cap() && cells.contains(&here) {
                            2
                        } else {
                            let mut best = 0u8;
                            for g in &grid {
                                if let Some(d) = geo.distance(g, &x, reach)? {
                                    if d <= r {
                                        best = 2;
                                        break;
                                    }
                                    best = 1;
                                }
                            }
                            best
                        }
                    }
                })
            })
            .collect()
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?
    .concat();
    let n = n_mc as f64;
    // the whole space needs no sampling, cusp included
    let kept = if matches!(region, Region::Everything) { 1.0 } else { 1.0 - truncated_fraction(MC_Y_CAP) };
    let within = hits.iter().filter(|h| **h == 2).count() as f64 / n;
    let near = hits.iter().filter(|h| **h >= 1).count() as f64 / n;
    let c_prime_lo = within * kept;
    let c_prime_hi = (near * kept + (1.0 - kept)).min(1.0);
    let std_err = (within * (1.0 - within) / n).sqrt();
    let bound = dilation_bound(c, r, p);
    let verdict = if !certified {
        Verdict::Uncertified
    } else if c_prime_lo >= bound - 3.0 * std_err {
        Verdict::Pass
    } else if 3.0 * std_err > 0.05 {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    };
    Ok(IsoReport {
        r,
        p,
        kappa: kappa(r, p),
        c,
        c_prime_lo,
        c_prime_hi,
        mesh,
        std_err,
        bound,
        verdict,
    })
}
