//! Eigenvalue budgets of cover families and the requirements that make
//! distances concentrate.
//!
//! A budget lists, for a cover of degree `N`, the exceptional spectrum as
//! pairs `(p_i, m_i)`: `m_i` eigenfunctions whose matrix coefficients are in
//! `L^{p'}` exactly for `p' > p_i`. `M(p)` counts those with `p_i ≥ p`.
//! Budgets are inputs; nothing here computes spectra.

use std::io::Write;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::quad::{integrate_pieces, QuadConfig};
use crate::spectral::hc_bound;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetEntry {
    pub p: f64,
    pub m: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EigenvalueBudget {
    entries: Vec<BudgetEntry>,
    n: f64,
    label: String,
}

impl EigenvalueBudget {
    /// Entries are sorted by `p`; repeated `p` values are merged.
    pub fn new(n: f64, mut entries: Vec<BudgetEntry>, label: impl Into<String>) -> Result<Self> {
        if !(n >= 1.0) {
            return Err(invalid(format!("cover degree must be at least 1, got {n}")));
        }
        if let Some(e) = entries.iter().find(|e| !(e.p > 2.0) || !e.p.is_finite() || e.m == 0) {
            return Err(invalid(format!("budget entry needs p > 2 and m ≥ 1, got {e:?}")));
        }
        entries.sort_by(|a, b| a.p.total_cmp(&b.p));
        let mut merged: Vec<BudgetEntry> = Vec::with_capacity(entries.len());
        for e in entries {
            match merged.last_mut() {
                Some(l) if l.p == e.p => l.m += e.m,
                _ => merged.push(e),
            }
        }
        Ok(EigenvalueBudget { entries: merged, n, label: label.into() })
    }

    /// `m(p_i) = round(N^{2/p_i})`, the shape of a density bound with `A = 1`.
    pub fn synthetic_a1(n: f64, ps: &[f64]) -> Result<Self> {
        let e = ps.iter().map(|&p| BudgetEntry { p, m: n.powf(2.0 / p).round().max(1.0) as u64 }).collect();
        Self::new(n, e, format!("A=1 synthetic, N={n}"))
    }

    /// `M(p) = N` for every `p` up to the last grid point.
    pub fn uniform(n: f64, ps: &[f64]) -> Result<Self> {
        let mut e: Vec<BudgetEntry> = ps.iter().map(|&p| BudgetEntry { p, m: 0 }).collect();
        if let Some(last) = e.last_mut() {
            last.m = n.round() as u64;
        }
        e.retain(|x| x.m > 0);
        Self::new(n, e, format!("uniform M=N, N={n}"))
    }

    pub fn entries(&self) -> &[BudgetEntry] {
        &self.entries
    }

    pub fn degree(&self) -> f64 {
        self.n
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.m).sum()
    }

    /// Largest `p_i`; `M` vanishes beyond it.
    pub fn p_max(&self) -> Option<f64> {
        self.entries.last().map(|e| e.p)
    }

    pub fn without(&self, index: usize) -> Self {
        let mut b = self.clone();
        b.entries.remove(index);
        b
    }
}

#[allow(non_snake_case)]
pub fn M_of_p(b: &EigenvalueBudget, p: f64) -> u64 {
    b.entries.iter().filter(|e| e.p >= p).map(|e| e.m).sum()
}

/// `lim_{p→2⁺} M(p)`, the number of exceptional eigenvalues.
pub fn exceptional_count(b: &EigenvalueBudget) -> u64 {
    b.total()
}

#[derive(Debug, Clone, Serialize)]
pub struct DensityCheck {
    pub pass: bool,
    /// Breakpoint with the largest `M(p) / (C N^{1 - A(p-2)/p + ε})`.
    pub worst_p: Option<f64>,
    pub worst_ratio: f64,
    pub exceptional_ok: bool,
    pub has_p_max: bool,
}

/// Checks `M(p) ≤ C N^{1 - A(p-2)/p + ε}` at every breakpoint, the
/// exceptional count `≤ C N`, and that `M` vanishes somewhere.
pub fn density_condition_check(b: &EigenvalueBudget, a: f64, eps: f64, c: f64) -> Result<DensityCheck> {
    if !(a >= 1.0) || !(eps > 0.0) || !(c > 0.0) {
        return Err(invalid(format!("need A ≥ 1, ε > 0, C > 0; got {a}, {eps}, {c}")));
    }
    let n = b.n;
    let mut worst = (None, 0.0f64);
    for e in &b.entries {
        let allowed = c * n.powf(1.0 - a * (e.p - 2.0) / e.p + eps);
        let ratio = M_of_p(b, e.p) as f64 / allowed;
        if ratio > worst.1 {
            worst = (Some(e.p), ratio);
        }
    }
    let exceptional_ok = exceptional_count(b) as f64 <= c * n;
    // a finite budget always vanishes past its last breakpoint
    let has_p_max = true;
    Ok(DensityCheck {
        pass: worst.1 <= 1.0 && exceptional_ok && has_p_max,
        worst_p: worst.0,
        worst_ratio: worst.1,
        exceptional_ok,
        has_p_max,
    })
}

/// `g(R) = s R + δ ln R + c`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GrowthFunction {
    pub s: f64,
    #[serde(default)]
    pub delta: f64,
    #[serde(default)]
    pub c: f64,
}

impl GrowthFunction {
    pub fn linear(s: f64) -> Self {
        GrowthFunction { s, delta: 0.0, c: 0.0 }
    }

    pub fn eval(&self, r: f64) -> f64 {
        self.s * r + self.delta * r.ln() + self.c
    }

    /// Is `g(R) ≥ R + δ₀ ln R` on `[r0, 10⁶]` for the given `δ₀ > 2`, and
    /// does it stay so (leading coefficient)?
    pub fn satisfies_growth(&self, delta0: f64, r0: f64) -> bool {
        let eventually = self.s > 1.0 || (self.s == 1.0 && self.delta >= delta0);
        let on_grid = (0..=600).all(|i| {
            let r = r0 * (1e6 / r0).powf(i as f64 / 600.0);
            self.eval(r) >= r + delta0 * r.ln()
        });
        delta0 > 2.0 && eventually && on_grid
    }

    pub fn is_non_decreasing_from(&self, r0: f64) -> bool {
        // g' = s + δ/R
        self.s >= 0.0 && (self.delta >= 0.0 || self.s * r0 + self.delta >= 0.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RequirementRow {
    pub n: f64,
    /// `G = g(ln N)`.
    pub g: f64,
    /// `G³ Σ e^{-2G/p_i} m_i`
    pub req0: f64,
    /// `G³ ∫₂^∞ M(p) e^{-2G/p} p^{-2} dp`
    pub req_integral: f64,
    /// `G² M(2⁺) e^{-G}`
    pub req_limit: f64,
    /// `|req0 - G req_limit - 2G req_integral| / req0`, zero by summation by
    /// parts.
    pub identity_gap: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct RequirementReport {
    pub rows: Vec<RequirementRow>,
    /// Each column strictly decreasing with last value below
    /// [`VANISHING_LEVEL`]; a finite-range stand-in for `o(1)`.
    pub req0_vanishing: bool,
    pub integral_vanishing: bool,
    pub limit_vanishing: bool,
    pub pass: bool,
}

pub const VANISHING_LEVEL: f64 = 0.1;

fn vanishing(xs: &[f64]) -> bool {
    xs.windows(2).all(|w| w[1] < w[0]) && xs.last().is_some_and(|v| *v < VANISHING_LEVEL)
}

pub fn requirement_row(b: &EigenvalueBudget, g: &GrowthFunction) -> Result<RequirementRow> {
    let n = b.n;
    let gv = g.eval(n.ln());
    let req0 = gv.powi(3) * b.entries.iter().map(|e| (-2.0 * gv / e.p).exp() * e.m as f64).sum::<f64>();
    let mut bps = vec![2.0];
    bps.extend(b.entries.iter().map(|e| e.p));
    let integral = if b.entries.is_empty() {
        0.0
    } else {
        let f = |p: f64| M_of_p(b, p) as f64 * (-2.0 * gv / p).exp() / (p * p);
        // M is constant on (p_{i-1}, p_i], so each piece is smooth
        let tol = 1e-14 * f(2.0 + 1e-12).max(f(*bps.last().unwrap())).max(1e-300);
        integrate_pieces(f, &bps, QuadConfig { abs_tol: tol, rel_tol: 1e-12, max_intervals: 2000 })?.value
    };
    let req_integral = gv.powi(3) * integral;
    let req_limit = gv * gv * exceptional_count(b) as f64 * (-gv).exp();
    let identity_gap = if req0 > 0.0 {
        (req0 - gv * req_limit - 2.0 * gv * req_integral).abs() / req0
    } else {
        0.0
    };
    Ok(RequirementRow { n, g: gv, req0, req_integral, req_limit, identity_gap })
}

pub fn normal_cover_requirement(budgets: &[EigenvalueBudget], g: &GrowthFunction) -> Result<RequirementReport> {
    if budgets.windows(2).any(|w| w[1].n <= w[0].n) {
        return Err(invalid("cover degrees must increase strictly"));
    }
    let rows = budgets.iter().map(|b| requirement_row(b, g)).collect::<Result<Vec<_>>>()?;
    let col = |f: fn(&RequirementRow) -> f64| rows.iter().map(f).collect::<Vec<_>>();
    let empty = budgets.iter().all(|b| b.entries.is_empty());
    let req0_vanishing = empty || vanishing(&col(|r| r.req0));
    let integral_vanishing = empty || vanishing(&col(|r| r.req_integral));
    let limit_vanishing = empty || vanishing(&col(|r| r.req_limit));
    Ok(RequirementReport {
        pass: req0_vanishing && integral_vanishing && limit_vanishing,
        rows,
        req0_vanishing,
        integral_vanishing,
        limit_vanishing,
    })
}

/// CSV with header `N_q,req0,req_integral,req_limit`.
pub fn write_requirements<W: Write>(r: &RequirementReport, w: W) -> Result<()> {
    let mut out = csv::Writer::from_writer(w);
    out.write_record(["N_q", "req0", "req_integral", "req_limit"])?;
    for row in &r.rows {
        out.write_record([
            format!("{}", row.n),
            format!("{:.10e}", row.req0),
            format!("{:.10e}", row.req_integral),
            format!("{:.10e}", row.req_limit),
        ])?;
    }
    out.flush()?;
    Ok(())
}

/// `(p/2)(R_X + γ ln R_X)`.
pub fn lp_radius_dilation(p: f64, r_x: f64, gamma: f64) -> Result<f64> {
    if !(p >= 2.0) || !(r_x > 0.0) {
        return Err(invalid(format!("need p ≥ 2 and R_X > 0, got {p}, {r_x}")));
    }
    Ok(0.5 * p * (r_x + gamma * r_x.ln()))
}

/// Projection norms of a ball indicator: onto functions pulled back from the
/// base, `N^{-1/2}`, and onto a subspace of dimension `dim_w`, `√(dim_w/N)`,
/// both times `ball_norm`.
pub fn covering_norm_bounds(n: f64, dim_w: f64, ball_norm: f64) -> Result<(f64, f64)> {
    if !(n >= 1.0) || !(dim_w >= 0.0) {
        return Err(invalid("need N ≥ 1 and dim W ≥ 0"));
    }
    Ok((ball_norm / n.sqrt(), (dim_w / n).sqrt() * ball_norm))
}

/// Bound on `‖A_r(b - π)‖²` from the three-part decomposition: the part
/// from the base (gap `p0`), the tempered part, and the exceptional budget.
pub fn bound_total(r: f64, b: &EigenvalueBudget, p0: f64) -> f64 {
    let n = b.n;
    let base = hc_bound(r, p0).powi(2) / n;
    let tempered = hc_bound(r, 2.0).powi(2);
    let exceptional = (r + 1.0).powi(2) / n * b.entries.iter().map(|e| (-2.0 * r / e.p).exp() * e.m as f64).sum::<f64>();
    base + tempered + exceptional
}
