//! Spherical functions of the hyperbolic plane.
//!
//! `φ(s, r)` is the eigenvalue of the circle-averaging operator `A_r` on the
//! Laplace eigenspace with parameter `s`, i.e. the Legendre function
//! `P_{-½+is}(cosh r)`. Two evaluation routes are provided: the
//! Harish-Chandra integral (accurate, one quadrature per value) and the
//! radial ODE (one sweep for a whole grid of radii).

use std::f64::consts::{PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::quad::{integrate, QuadConfig};

/// `ln sinh x` for `x > 0`, without overflow.
#[inline]
pub(crate) fn ln_sinh(x: f64) -> f64 {
    if x > 20.0 {
        x - std::f64::consts::LN_2 + (-(-2.0 * x).exp()).ln_1p()
    } else {
        x.sinh().ln()
    }
}

/// Which spectral family a parameter belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SphericalParam {
    /// `λ = ¼ + s²`.
    Principal { s: f64 },
    /// `λ = ¼ - s'²`, `|s'| < ½`.
    Complementary { sp: f64 },
    /// The constant eigenfunction, `λ = 0`.
    Trivial,
}

impl SphericalParam {
    pub fn principal(s: f64) -> Result<Self> {
        if !s.is_finite() {
            return Err(invalid(format!("spectral parameter must be finite, got {s}")));
        }
        Ok(SphericalParam::Principal { s })
    }

    pub fn complementary(sp: f64) -> Result<Self> {
        if !(sp.abs() < 0.5) {
            return Err(invalid(format!("complementary parameter needs |s'| < 1/2, got {sp}")));
        }
        Ok(SphericalParam::Complementary { sp })
    }

    /// The complementary parameter with integrability exponent `p`.
    pub fn from_p(p: f64) -> Result<Self> {
        if p == f64::INFINITY {
            return Ok(SphericalParam::Trivial);
        }
        if !(p >= 2.0) {
            return Err(invalid(format!("p must be >= 2, got {p}")));
        }
        Ok(SphericalParam::Complementary { sp: 0.5 - 1.0 / p })
    }

    pub fn lambda(&self) -> f64 {
        match *self {
            SphericalParam::Principal { s } => 0.25 + s * s,
            SphericalParam::Complementary { sp } => 0.25 - sp * sp,
            SphericalParam::Trivial => 0.0,
        }
    }

    /// `p = 1/(½ - |s'|)`; 2 on the principal series.
    pub fn p(&self) -> f64 {
        match *self {
            SphericalParam::Principal { .. } => 2.0,
            SphericalParam::Complementary { sp } => 1.0 / (0.5 - sp.abs()),
            SphericalParam::Trivial => f64::INFINITY,
        }
    }

    pub fn eval(&self, r: f64) -> Result<f64> {
        match *self {
            SphericalParam::Principal { s } => spherical_principal(s, r),
            SphericalParam::Complementary { sp } => spherical_sp(sp, r),
            SphericalParam::Trivial => Ok(1.0),
        }
    }
}

fn check_radius(r: f64) -> Result<()> {
    if !(r >= 0.0) || !r.is_finite() {
        return Err(invalid(format!("radius must be finite and >= 0, got {r}")));
    }
    if r > crate::geometry::MAX_RADIUS {
        return Err(Error::NumericRange(format!("radius {r} too large")));
    }
    Ok(())
}

// (√2/π) r ∫₀¹ kernel(x) / √(cosh r − cosh rx) dx with x = 1 − u².
// The difference of cosines is 2 sinh(r(1+x)/2) sinh(r(1−x)/2), evaluated
// in log form so neither cancellation nor overflow occurs. The kernel is
// passed pre-scaled by e^{-log_kernel_shift}, undone at the end.
fn harish_chandra<K: Fn(f64) -> f64>(r: f64, log_kernel_shift: f64, kernel: K) -> Result<f64> {
    let pref = SQRT_2 / PI * r;
    let integrand = |u: f64| {
        if u <= 0.0 {
            // limit of 2u / √(2 sinh(r) · r u²/2)
            return 2.0 * kernel(1.0) * (-0.5 * (r.ln() + ln_sinh(r))).exp();
        }
        let u2 = u * u;
        let x = 1.0 - u2;
        let ln_den = std::f64::consts::LN_2 + ln_sinh(r * (2.0 - u2) / 2.0) + ln_sinh(r * u2 / 2.0);
        2.0 * u * kernel(x) * (-0.5 * ln_den).exp()
    };
    let cfg = QuadConfig {
        abs_tol: 1e-11 / pref.max(1e-300),
        rel_tol: 1e-12,
        max_intervals: 20_000,
    };
    let est = integrate(integrand, 0.0, 1.0, cfg)?;
    Ok(pref * est.value * log_kernel_shift.exp())
}

/// `φ_{½+is}(r) = (√2/π) r ∫₀¹ cos(srx) / √(cosh r - cosh rx) dx`.
pub fn spherical_principal(s: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    harish_chandra(r, 0.0, |x| (s * r * x).cos())
}

/// Complementary-series spherical function for `s' ∈ (-½, ½]`:
/// `(√2/π) r ∫₀¹ cosh(s'rx) / √(cosh r - cosh rx) dx`.
fn spherical_sp(sp: f64, r: f64) -> Result<f64> {
    check_radius(r)?;
    if r == 0.0 {
        return Ok(1.0);
    }
    let a = sp.abs();
    // factor out e^{a r} so the kernel stays in [0, 1]
    let shift = a * r;
    harish_chandra(r, shift, |x| {
        0.5 * ((a * r * (x - 1.0)).exp() + (-a * r * (x + 1.0)).exp())
    })
}

/// Spherical function on the complementary series indexed by `p ≥ 2`
/// (`s' = ½ - 1/p`). `p = ∞` gives the constant function 1.
pub fn spherical_complementary(p: f64, r: f64) -> Result<f64> {
    match SphericalParam::from_p(p)? {
        SphericalParam::Trivial => {
            check_radius(r)?;
            Ok(1.0)
        }
        SphericalParam::Complementary { sp } => spherical_sp(sp, r),
        SphericalParam::Principal { .. } => unreachable!(),
    }
}

/// Solves `φ'' + coth r φ' + λ φ = 0`, `φ(0) = 1`, sampling `φ` at
/// `r_0 + i h` for `i < n` where `r_0 = h/2` (cell midpoints of a grid
/// starting at zero). Uses a Taylor start and RK4 with `sub` substeps per
/// cell.
pub fn spherical_on_midpoints(lambda: f64, h: f64, n: usize) -> Vec<f64> {
    let a = lambda;
    let r0 = 0.5 * h;
    let c2 = -a / 4.0;
    let c4 = a * (a + 2.0 / 3.0) / 64.0;
    let mut phi = 1.0 + c2 * r0 * r0 + c4 * r0.powi(4);
    let mut dphi = 2.0 * c2 * r0 + 4.0 * c4 * r0.powi(3);
    let sub = ((h * a.sqrt().max(1.0)) / 2e-3).ceil().max(10.0) as usize;
    let dt = h / sub as f64;
    let f = |r: f64, p: f64, dp: f64| -> (f64, f64) {
        let coth = if r < 1e-4 { 1.0 / r + r / 3.0 } else { 1.0 / r.tanh() };
        (dp, -coth * dp - a * p)
    };
    let mut out = Vec::with_capacity(n);
    let mut r = r0;
    for _ in 0..n {
        out.push(phi);
        for _ in 0..sub {
            let (k1p, k1d) = f(r, phi, dphi);
            let (k2p, k2d) = f(r + dt / 2.0, phi + dt / 2.0 * k1p, dphi + dt / 2.0 * k1d);
            let (k3p, k3d) = f(r + dt / 2.0, phi + dt / 2.0 * k2p, dphi + dt / 2.0 * k2d);
            let (k4p, k4d) = f(r + dt, phi + dt * k3p, dphi + dt * k3d);
            phi += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
            dphi += dt / 6.0 * (k1d + 2.0 * k2d + 2.0 * k3d + k4d);
            r += dt;
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    // Laplace-type integral for the conical function, independent of the
    // Harish-Chandra form.
    fn legendre_oracle(s: f64, r: f64) -> f64 {
        // cosh r + sinh r cos t, written without cancellation near t = π
        let base_of = |t: f64| r.exp() * (t / 2.0).cos().powi(2) + (-r).exp() * (t / 2.0).sin().powi(2);
        let f = |t: f64| {
            let base = base_of(t);
            base.powf(-0.5) * (s * base.ln()).cos()
        };
        let cfg = QuadConfig {
            abs_tol: 1e-13,
            rel_tol: 1e-12,
            max_intervals: 20_000,
        };
        integrate(f, 0.0, PI, cfg).unwrap().value / PI
    }

    #[test]
    fn origin_is_one() {
        for s in [0.0, 3.0, 40.0] {
            assert_eq!(spherical_principal(s, 0.0).unwrap(), 1.0);
        }
        assert_eq!(spherical_complementary(3.0, 0.0).unwrap(), 1.0);
    }

    #[test]
    fn matches_legendre_integral() {
        for &r in &[0.1, 0.5, 1.0, 2.0, 5.0, 12.0] {
            for &s in &[0.0, 0.3, 1.0, 4.0, 15.0] {
                let a = spherical_principal(s, r).unwrap();
                let b = legendre_oracle(s, r);
                assert!((a - b).abs() < 1e-9, "s={s} r={r}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn frozen_values() {
        // reference values of P_{-1/2}(cosh 1) and P_{-1/4}(cosh 3)
        let v = spherical_principal(0.0, 1.0).unwrap();
        assert!((v - 0.940_862_159_249_349_8).abs() < 1e-11, "{v}");
        let v = spherical_complementary(4.0, 3.0).unwrap();
        assert!((v - 0.708_371_633_086_773_2).abs() < 1e-10, "{v}");
        assert!(v < 4.0 * (-0.75f64).exp());
    }

    #[test]
    fn complementary_edge_cases() {
        for r in [0.3, 2.0, 7.0] {
            let a = spherical_complementary(2.0, r).unwrap();
            let b = spherical_principal(0.0, r).unwrap();
            assert!((a - b).abs() < 1e-12);
            assert_eq!(spherical_complementary(f64::INFINITY, r).unwrap(), 1.0);
            // s' → ½ tends to the constant function
            let near = spherical_complementary(1e6, r).unwrap();
            assert!((near - 1.0).abs() < 1e-4, "{near}");
        }
        assert!(spherical_complementary(1.5, 1.0).is_err());
    }

    #[test]
    fn complementary_matches_legendre_at_imaginary_s() {
        // P_{-½+s'}(cosh r) via the Laplace integral with real exponent
        for &(p, r) in &[(3.0f64, 1.0f64), (8.0, 4.0)] {
            let sp = 0.5 - 1.0 / p;
            let f = |t: f64| {
                (r.exp() * (t / 2.0).cos().powi(2) + (-r).exp() * (t / 2.0).sin().powi(2)).powf(-0.5 + sp)
            };
            let oracle = integrate(f, 0.0, PI, QuadConfig::abs(1e-13)).unwrap().value / PI;
            let v = spherical_complementary(p, r).unwrap();
            assert!((v - oracle).abs() < 1e-9, "p={p} r={r}: {v} vs {oracle}");
        }
    }

    #[test]
    fn ode_route_agrees() {
        let h = 1e-3;
        for &s in &[0.0, 2.0, 10.0] {
            let vals = spherical_on_midpoints(0.25 + s * s, h, 4000);
            for &i in &[0usize, 10, 999, 2500, 3999] {
                let r = h * (i as f64 + 0.5);
                let q = spherical_principal(s, r).unwrap();
                assert!((vals[i] - q).abs() < 1e-8, "s={s} r={r}: {} vs {q}", vals[i]);
            }
        }
    }

    #[test]
    fn dictionary() {
        let p = SphericalParam::from_p(4.0).unwrap();
        assert!((p.lambda() - 3.0 / 16.0).abs() < 1e-15);
        assert!((p.p() - 4.0).abs() < 1e-12);
        assert_eq!(SphericalParam::principal(1.0).unwrap().lambda(), 1.25);
        assert!(SphericalParam::complementary(0.5).is_err());
    }
}
