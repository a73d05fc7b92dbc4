//! Piecewise-constant densities on a radial interval.
//!
//! Shared by the mixture measures, the heat kernel and the torus code. A
//! grid stores one density value per cell; within a cell the density is
//! taken to be flat, so the CDF is piecewise linear and exact inverse-CDF
//! sampling is cheap.

use std::io::Write;

use rand::Rng;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct RadialGrid {
    r_min: f64,
    r_max: f64,
    values: Vec<f64>,
    cumulative: Vec<f64>,
}

impl RadialGrid {
    pub fn new(r_min: f64, r_max: f64, values: Vec<f64>) -> Result<Self> {
        if !(r_max > r_min) || !r_min.is_finite() || !r_max.is_finite() {
            return Err(invalid(format!("bad radial interval [{r_min}, {r_max}]")));
        }
        if values.is_empty() {
            return Err(invalid("radial grid needs at least one cell"));
        }
        if let Some(v) = values.iter().find(|v| !(**v >= 0.0) || !v.is_finite()) {
            return Err(invalid(format!("density values must be finite and >= 0, got {v}")));
        }
        let mut g = RadialGrid {
            r_min,
            r_max,
            values,
            cumulative: Vec::new(),
        };
        g.rebuild();
        Ok(g)
    }

    /// Builds the grid whose cell masses are the increments of `cdf`.
    pub fn from_cdf<F: Fn(f64) -> f64>(r_min: f64, r_max: f64, n: usize, cdf: F) -> Result<Self> {
        let h = (r_max - r_min) / n as f64;
        let mut prev = cdf(r_min);
        let mut values = Vec::with_capacity(n);
        for i in 1..=n {
            let cur = cdf(if i == n { r_max } else { r_min + h * i as f64 });
            values.push(((cur - prev) / h).max(0.0));
            prev = cur;
        }
        RadialGrid::new(r_min, r_max, values)
    }

    /// Builds the grid from per-cell masses.
    pub fn from_masses(r_min: f64, r_max: f64, masses: Vec<f64>) -> Result<Self> {
        let h = (r_max - r_min) / masses.len().max(1) as f64;
        RadialGrid::new(r_min, r_max, masses.into_iter().map(|m| m / h).collect())
    }

    fn rebuild(&mut self) {
        let h = self.step();
        let mut acc = 0.0;
        self.cumulative = std::iter::once(0.0)
            .chain(self.values.iter().map(|v| {
                acc += v * h;
                acc
            }))
            .collect();
    }

    pub fn r_min(&self) -> f64 {
        self.r_min
    }
    pub fn r_max(&self) -> f64 {
        self.r_max
    }
    pub fn n_cells(&self) -> usize {
        self.values.len()
    }
    pub fn values(&self) -> &[f64] {
        &self.values
    }
    pub fn step(&self) -> f64 {
        (self.r_max - self.r_min) / self.values.len() as f64
    }
    pub fn edge(&self, i: usize) -> f64 {
        if i == self.values.len() {
            self.r_max
        } else {
            self.r_min + self.step() * i as f64
        }
    }
    pub fn mid(&self, i: usize) -> f64 {
        self.r_min + self.step() * (i as f64 + 0.5)
    }
    pub fn cell_mass(&self, i: usize) -> f64 {
        self.cumulative[i + 1] - self.cumulative[i]
    }

    /// Total mass.
    pub fn mass(&self) -> f64 {
        *self.cumulative.last().unwrap()
    }

    /// Scales to unit mass and returns the pre-normalization defect
    /// `|mass - 1|`.
    pub fn normalize(&mut self) -> Result<f64> {
        let m = self.mass();
        if !(m > 0.0) {
            return Err(crate::error::Error::Degenerate(0));
        }
        for v in &mut self.values {
            *v /= m;
        }
        self.rebuild();
        Ok((m - 1.0).abs())
    }

    /// Piecewise-linear CDF.
    pub fn cdf(&self, r: f64) -> f64 {
        if r <= self.r_min {
            return 0.0;
        }
        if r >= self.r_max {
            return self.mass();
        }
        let pos = (r - self.r_min) / self.step();
        let i = (pos.floor() as usize).min(self.values.len() - 1);
        self.cumulative[i] + (pos - i as f64) * self.cell_mass(i)
    }

    /// `∫ f dm` by the midpoint value in each cell.
    pub fn expect<F: Fn(f64) -> f64>(&self, f: F) -> f64 {
        (0..self.n_cells()).map(|i| self.cell_mass(i) * f(self.mid(i))).sum()
    }

    pub fn mean(&self) -> f64 {
        self.expect(|r| r) / self.mass()
    }

    /// Inverse-CDF draw (the grid should be normalized).
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let u = rng.random::<f64>() * self.mass();
        let i = self.cumulative.partition_point(|c| *c <= u).clamp(1, self.values.len()) - 1;
        let m = self.cell_mass(i);
        let frac = if m > 0.0 { (u - self.cumulative[i]) / m } else { 0.5 };
        self.edge(i) + frac.clamp(0.0, 1.0) * self.step()
    }

    /// `sup |F - G|` evaluated on the union of both grids' edges.
    pub fn sup_cdf_gap(&self, other: &RadialGrid) -> f64 {
        self.sup_gap_with(|r| other.cdf(r))
            .max(other.sup_gap_with(|r| self.cdf(r)))
    }

    /// `sup |F - G|` over this grid's edges against an arbitrary CDF.
    pub fn sup_gap_with<F: Fn(f64) -> f64>(&self, g: F) -> f64 {
        (0..=self.n_cells())
            .map(|i| (self.cumulative[i] - g(self.edge(i))).abs())
            .fold(0.0, f64::max)
    }

    /// CSV with header `r,density` (one row per cell midpoint).
    pub fn write_csv<W: Write>(&self, w: W) -> Result<()> {
        let mut out = csv::Writer::from_writer(w);
        out.write_record(["r", "density"])?;
        for i in 0..self.n_cells() {
            out.write_record([format!("{:.10e}", self.mid(i)), format!("{:.10e}", self.values[i])])?;
        }
        out.flush()?;
        Ok(())
    }
}

/// Default grid step for radial measures reaching `r_max`.
pub fn default_step(r_max: f64) -> f64 {
    1e-3 * (r_max / 10.0).max(1.0)
}
