//! Measurable partitions of `X_q` for histogram estimates.
//!
//! On the fundamental domain the measure `dx dy / y²` is Lebesgue in
//! `(x, u = 1/y)`, and `F ∩ {y ≤ Y}` becomes `|x| ≤ ½, 1/Y ≤ u ≤ 1/√(1-x²)`.
//! Cells are an `nx × nu` grid in these coordinates clipped by the curved
//! edge; the clipped measures come from the antiderivative of `1/√(1-x²)`.
//! Everything above `Y` forms one cusp cell per sheet.

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::geometry::PointH;
use crate::modular::MODULAR_AREA;

const U_TOP: f64 = 1.154_700_538_379_251_5; // 2/√3

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Cell {
    pub x0: f64,
    pub x1: f64,
    pub u0: f64,
    pub u1: f64,
    pub measure: f64,
}

/// Cell grid on one sheet; the same grid is used on every sheet.
#[derive(Debug, Clone, Serialize)]
pub struct CellPartition {
    y_cap: f64,
    nx: usize,
    nu: usize,
    cells: Vec<Cell>,
    #[serde(skip)]
    lookup: Vec<Option<usize>>,
}

/// `|x|` where the edge `u = 1/√(1-x²)` reaches height `u`.
fn edge_root(u: f64) -> f64 {
    if u <= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (u * u)).sqrt().min(0.5)
    }
}

/// `∫_a^b min(max(1/√(1-x²) - u0, 0), u1 - u0) dx` for `0 ≤ a ≤ b ≤ ½`.
fn clipped_half(a: f64, b: f64, u0: f64, u1: f64) -> f64 {
    let xa = edge_root(u0);
    let xb = edge_root(u1);
    let mut s = 0.0;
    // rising part between the two roots
    let (lo, hi) = (a.max(xa), b.min(xb));
    if hi > lo {
        s += hi.asin() - lo.asin() - u0 * (hi - lo);
    }
    // full-height part beyond the upper root
    let lo = a.max(xb);
    if b > lo {
        s += (u1 - u0) * (b - lo);
    }
    s
}

fn clipped(x0: f64, x1: f64, u0: f64, u1: f64) -> f64 {
    if x1 <= 0.0 {
        clipped_half(-x1, -x0, u0, u1)
    } else if x0 >= 0.0 {
        clipped_half(x0, x1, u0, u1)
    } else {
        clipped_half(0.0, -x0, u0, u1) + clipped_half(0.0, x1, u0, u1)
    }
}

impl CellPartition {
    pub fn new(y_cap: f64, nx: usize, nu: usize) -> Result<Self> {
        if !(y_cap >= 2.0) || !y_cap.is_finite() {
            return Err(invalid(format!("cusp cap must be at least 2, got {y_cap}")));
        }
        if nx == 0 || nu == 0 {
            return Err(invalid("partition needs at least one column and band"));
        }
        let u_lo = 1.0 / y_cap;
        let du = (U_TOP - u_lo) / nu as f64;
        let mut cells = Vec::new();
        let mut lookup = vec![None; nx * nu];
        for i in 0..nx {
            let x0 = -0.5 + i as f64 / nx as f64;
            let x1 = -0.5 + (i + 1) as f64 / nx as f64;
            for j in 0..nu {
                let u0 = u_lo + j as f64 * du;
                let u1 = if j + 1 == nu { U_TOP } else { u_lo + (j + 1) as f64 * du };
                let m = clipped(x0, x1, u0, u1);
                if m > 1e-14 {
                    lookup[i * nu + j] = Some(cells.len());
                    cells.push(Cell { x0, x1, u0, u1, measure: m });
                }
            }
        }
        Ok(CellPartition { y_cap, nx, nu, cells, lookup })
    }

    /// The coarsest square grid whose cells all have measure at most
    /// `max_measure`.
    pub fn with_resolution(y_cap: f64, max_measure: f64) -> Result<Self> {
        if !(max_measure > 0.0) {
            return Err(invalid("cell measure bound must be positive"));
        }
        for m in 1..=2000 {
            let p = Self::new(y_cap, m, m)?;
            if p.max_measure() <= max_measure {
                return Ok(p);
            }
        }
        Err(crate::Error::Resolution(format!("cannot reach cell measure {max_measure}")))
    }

    pub fn y_cap(&self) -> f64 {
        self.y_cap
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.nx, self.nu)
    }

    /// Number of bounded cells per sheet (the cusp cell excluded).
    pub fn len(&self) -> usize {
        self.cells.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cells.is_empty()
    }

    pub fn cells(&self) -> &[Cell] {
        &self.cells
    }

    pub fn max_measure(&self) -> f64 {
        self.cells.iter().map(|c| c.measure).fold(0.0, f64::max)
    }

    /// Measure of the bounded part of one sheet, `π/3 - 1/Y`.
    pub fn truncated_total(&self) -> f64 {
        MODULAR_AREA - 1.0 / self.y_cap
    }

    /// Cells per sheet including the cusp, which gets index `len()`.
    pub fn bins_per_sheet(&self) -> usize {
        self.cells.len() + 1
    }

    /// Measure of bin `b` on one sheet.
    pub fn bin_measure(&self, b: usize) -> f64 {
        if b == self.cells.len() {
            1.0 / self.y_cap
        } else {
            self.cells[b].measure
        }
    }

    /// Bin of a point of the fundamental domain.
    pub fn locate(&self, z: &PointH) -> usize {
        if z.y() > self.y_cap {
            return self.cells.len();
        }
        let u_lo = 1.0 / self.y_cap;
        let du = (U_TOP - u_lo) / self.nu as f64;
        let i = (((z.x() + 0.5) * self.nx as f64).floor().max(0.0) as usize).min(self.nx - 1);
        let j = ((((1.0 / z.y()) - u_lo) / du).floor().max(0.0) as usize).min(self.nu - 1);
        // a point on the curved edge may round into an empty cell
        for jj in (0..=j).rev() {
            if let Some(c) = self.lookup[i * self.nu + jj] {
                return c;
            }
        }
        (0..self.nu)
            .find_map(|jj| self.lookup[i * self.nu + jj])
            .expect("every column has a cell")
    }
}
