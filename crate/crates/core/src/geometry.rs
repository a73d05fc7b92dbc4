//! Primitives on the upper half-plane: points, Möbius maps, the hyperbolic
//! distance, circles around a point and hyperbolic-area sampling.

use std::f64::consts::{PI, TAU};
use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// Largest radius accepted by routines that evaluate `cosh r`.
pub const MAX_RADIUS: f64 = 700.0;

/// A point `x + iy` of the upper half-plane.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PointH {
    x: f64,
    y: f64,
}

impl PointH {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if !x.is_finite() || !y.is_finite() {
            return Err(invalid(format!("non-finite coordinates ({x}, {y})")));
        }
        if y <= 0.0 {
            return Err(invalid(format!("imaginary part must be positive, got {y}")));
        }
        Ok(PointH { x, y })
    }

    /// The origin `i`.
    pub const fn i() -> Self {
        PointH { x: 0.0, y: 1.0 }
    }

    pub(crate) const fn new_unchecked(x: f64, y: f64) -> Self {
        PointH { x, y }
    }

    #[inline]
    pub fn x(&self) -> f64 {
        self.x
    }

    #[inline]
    pub fn y(&self) -> f64 {
        self.y
    }

    pub fn translate(&self, dx: f64) -> Self {
        PointH {
            x: self.x + dx,
            y: self.y,
        }
    }
}

impl fmt::Display for PointH {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{:+}i", self.x, self.y)
    }
}

/// Hyperbolic distance.
///
/// Evaluated as `2 asinh(|z - w| / (2 sqrt(y y')))`, which equals the usual
/// `acosh(1 + |z - w|^2 / (2 y y'))` but keeps full precision near zero.
#[inline]
pub fn distance(z: &PointH, w: &PointH) -> f64 {
    let dx = w.x - z.x;
    let dy = w.y - z.y;
    let chord = (dx * dx + dy * dy).sqrt();
    2.0 * (0.5 * chord / (z.y * w.y).sqrt()).asinh()
}

/// `cosh d(z, w)`, cheaper than [`distance`] when only comparisons are needed.
#[inline]
pub fn cosh_distance(z: &PointH, w: &PointH) -> f64 {
    let dx = w.x - z.x;
    let dy = w.y - z.y;
    1.0 + (dx * dx + dy * dy) / (2.0 * z.y * w.y)
}

/// An element of PSL2(R), stored normalized to determinant one.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct MobiusReal {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
}

impl MobiusReal {
    /// Builds a map from any matrix with positive determinant, dividing all
    /// entries by `sqrt(det)`.
    pub fn new(a: f64, b: f64, c: f64, d: f64) -> Result<Self> {
        let det = a * d - b * c;
        if !(det > 0.0) || !det.is_finite() {
            return Err(invalid(format!(
                "matrix [[{a}, {b}], [{c}, {d}]] has non-positive determinant {det}"
            )));
        }
        let s = det.sqrt();
        Ok(MobiusReal {
            a: a / s,
            b: b / s,
            c: c / s,
            d: d / s,
        })
    }

    pub const fn identity() -> Self {
        MobiusReal {
            a: 1.0,
            b: 0.0,
            c: 0.0,
            d: 1.0,
        }
    }

    pub fn translation(t: f64) -> Self {
        MobiusReal {
            a: 1.0,
            b: t,
            c: 0.0,
            d: 1.0,
        }
    }

    /// Rotation about `i`: `[[sin θ, cos θ], [-cos θ, sin θ]]`.
    pub fn rotation(theta: f64) -> Self {
        let (s, c) = theta.sin_cos();
        MobiusReal {
            a: s,
            b: c,
            c: -c,
            d: s,
        }
    }

    /// `diag(e^{r/2}, e^{-r/2})`, moving `i` to `e^r i`.
    pub fn dilation(r: f64) -> Self {
        let e = (0.5 * r).exp();
        MobiusReal {
            a: e,
            b: 0.0,
            c: 0.0,
            d: 1.0 / e,
        }
    }

    /// The affine map `w -> x + y w`, sending `i` to `z`.
    pub fn affine_to(z: &PointH) -> Self {
        let s = z.y.sqrt();
        MobiusReal {
            a: s,
            b: z.x / s,
            c: 0.0,
            d: 1.0 / s,
        }
    }

    pub fn det(&self) -> f64 {
        self.a * self.d - self.b * self.c
    }

    pub fn compose(&self, other: &MobiusReal) -> MobiusReal {
        MobiusReal {
            a: self.a * other.a + self.b * other.c,
            b: self.a * other.b + self.b * other.d,
            c: self.c * other.a + self.d * other.c,
            d: self.c * other.b + self.d * other.d,
        }
    }

    pub fn inverse(&self) -> MobiusReal {
        MobiusReal {
            a: self.d,
            b: -self.b,
            c: -self.c,
            d: self.a,
        }
    }

    /// Projective equality (up to global sign) within `tol`.
    pub fn approx_eq(&self, other: &MobiusReal, tol: f64) -> bool {
        let close = |s: f64| {
            (self.a - s * other.a).abs() <= tol
                && (self.b - s * other.b).abs() <= tol
                && (self.c - s * other.c).abs() <= tol
                && (self.d - s * other.d).abs() <= tol
        };
        close(1.0) || close(-1.0)
    }
}

impl PartialEq for MobiusReal {
    fn eq(&self, other: &Self) -> bool {
        self.approx_eq(other, 1e-12)
    }
}

/// Applies `(az + b)/(cz + d)`.
pub fn mobius_apply(g: &MobiusReal, z: &PointH) -> Result<PointH> {
    let re = g.c * z.x + g.d;
    let im = g.c * z.y;
    let denom = re * re + im * im;
    let num_re = (g.a * z.x + g.b) * re + g.a * g.c * z.y * z.y;
    let x = num_re / denom;
    let y = z.y / denom;
    if !x.is_finite() || !y.is_finite() || y <= 0.0 {
        return Err(Error::NumericRange(format!(
            "mobius image of {z} under [[{}, {}], [{}, {}]] out of range",
            g.a, g.b, g.c, g.d
        )));
    }
    Ok(PointH { x, y })
}

/// The point at distance `r` from `z` in direction `theta ∈ [0, π)`.
///
/// Computed through the matrix action `k_θ a_r` at `i`, then transported to
/// `z` by the affine map sending `i` to `z`. At `z = i` the imaginary part is
/// `1 / (e^r cos²θ + e^{-r} sin²θ)`.
pub fn sphere_point(z: &PointH, r: f64, theta: f64) -> Result<PointH> {
    if !(r >= 0.0) {
        return Err(invalid(format!("radius must be non-negative, got {r}")));
    }
    if r > MAX_RADIUS {
        return Err(Error::NumericRange(format!("radius {r} exceeds {MAX_RADIUS}")));
    }
    let w = sphere_point_at_i(r, theta);
    Ok(PointH {
        x: z.x + z.y * w.x,
        y: z.y * w.y,
    })
}

/// [`sphere_point`] around `i`, for callers that have already validated `r`.
#[inline]
pub(crate) fn sphere_point_at_i(r: f64, theta: f64) -> PointH {
    let (s, c) = theta.sin_cos();
    let ep = r.exp();
    let em = 1.0 / ep;
    // k_θ a_r · i with k_θ a_r = [[e^{r/2}s, e^{-r/2}c], [-e^{r/2}c, e^{-r/2}s]]
    let denom = ep * c * c + em * s * s;
    PointH {
        x: s * c * (em - ep) / denom,
        y: 1.0 / denom,
    }
}

/// Area of a hyperbolic disc of radius `r`: `2π(cosh r - 1)`.
pub fn ball_volume(r: f64) -> Result<f64> {
    if !(r >= 0.0) {
        return Err(invalid(format!("radius must be non-negative, got {r}")));
    }
    if r > MAX_RADIUS {
        return Err(Error::NumericRange(format!("radius {r} exceeds {MAX_RADIUS}")));
    }
    // 2π(cosh r - 1) = 4π sinh²(r/2)
    let s = (0.5 * r).sinh();
    Ok(2.0 * TAU * s * s)
}

/// Radius of the disc whose area is `area`.
pub fn inverse_ball_radius(area: f64) -> Result<f64> {
    if !(area >= 0.0) || !area.is_finite() {
        return Err(invalid(format!("area must be finite and non-negative, got {area}")));
    }
    Ok(2.0 * (area / (2.0 * TAU)).sqrt().asinh())
}

/// Axis-aligned region `[x0, x1] × [y0, y1]`; `y1` may be infinite.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Rect {
    pub x0: f64,
    pub x1: f64,
    pub y0: f64,
    pub y1: f64,
}

impl Rect {
    pub fn new(x0: f64, x1: f64, y0: f64, y1: f64) -> Result<Self> {
        if !(x1 > x0) || !(y1 > y0) || !(y0 > 0.0) || !x0.is_finite() || !x1.is_finite() {
            return Err(invalid(format!(
                "degenerate region [{x0}, {x1}] x [{y0}, {y1}]"
            )));
        }
        Ok(Rect { x0, x1, y0, y1 })
    }

    /// Hyperbolic area `∫∫ dx dy / y²`.
    pub fn measure(&self) -> f64 {
        (self.x1 - self.x0) * (1.0 / self.y0 - 1.0 / self.y1)
    }

    pub fn contains(&self, z: &PointH) -> bool {
        z.x >= self.x0 && z.x <= self.x1 && z.y >= self.y0 && z.y <= self.y1
    }
}

/// Draws a point of `region` with law proportional to `dx dy / y²`.
///
/// In the coordinates `(x, 1/y)` the hyperbolic area is Lebesgue measure,
/// so both coordinates are drawn uniformly there.
pub fn sample_hyperbolic_measure<R: Rng + ?Sized>(region: &Rect, rng: &mut R) -> PointH {
    let u_lo = 1.0 / region.y1;
    let u_hi = 1.0 / region.y0;
    loop {
        let x = region.x0 + (region.x1 - region.x0) * rng.random::<f64>();
        let u = u_hi - (u_hi - u_lo) * rng.random::<f64>();
        if u > 0.0 {
            return PointH { x, y: 1.0 / u };
        }
    }
}

/// Uniform direction angle in `[0, π)`.
#[inline]
pub fn random_angle<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    PI * rng.random::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(x: f64, y: f64) -> PointH {
        PointH::new(x, y).unwrap()
    }

    #[test]
    fn rejects_invalid_points() {
        assert!(PointH::new(0.0, 0.0).is_err());
        assert!(PointH::new(0.0, -1.0).is_err());
        assert!(PointH::new(f64::NAN, 1.0).is_err());
        assert!(PointH::new(0.0, f64::INFINITY).is_err());
    }

    #[test]
    fn distance_examples() {
        assert_eq!(distance(&PointH::i(), &PointH::i()), 0.0);
        for r in [0.1, 1.0, 5.0, 30.0] {
            let d = distance(&PointH::i(), &pt(0.0, f64::exp(r)));
            assert!((d - r).abs() < 1e-12 * r.max(1.0), "r={r} d={d}");
        }
        // acosh(1.5) = ln(1.5 + sqrt(1.25))
        let d = distance(&PointH::i(), &pt(1.0, 1.0));
        assert!((d - 0.962_423_650_119_206_9).abs() < 1e-14);
    }

    #[test]
    fn mobius_examples() {
        let z = pt(0.3, 0.7);
        assert_eq!(mobius_apply(&MobiusReal::identity(), &z).unwrap(), z);
        let t = MobiusReal::new(1.0, 1.0, 0.0, 1.0).unwrap();
        assert_eq!(mobius_apply(&t, &PointH::i()).unwrap(), pt(1.0, 1.0));
        let s = MobiusReal::new(0.0, -1.0, 1.0, 0.0).unwrap();
        let w = mobius_apply(&s, &pt(0.0, 2.0)).unwrap();
        assert!(w.x().abs() < 1e-15 && (w.y() - 0.5).abs() < 1e-15);
        assert!(MobiusReal::new(1.0, 2.0, 2.0, 1.0).is_err());
    }

    #[test]
    fn mobius_normalizes_and_compares_projectively() {
        let g = MobiusReal::new(2.0, 0.0, 0.0, 2.0).unwrap();
        assert!((g.det() - 1.0).abs() < 1e-12);
        assert_eq!(g, MobiusReal::identity());
        let neg = MobiusReal {
            a: -1.0,
            b: 0.0,
            c: 0.0,
            d: -1.0,
        };
        assert_eq!(neg, MobiusReal::identity());
    }

    #[test]
    fn mobius_overflow_is_reported() {
        let g = MobiusReal {
            a: 1e200,
            b: 0.0,
            c: 1e200,
            d: 1e-200,
        };
        assert!(matches!(
            mobius_apply(&g, &PointH::i()),
            Err(Error::NumericRange(_))
        ));
    }

    #[test]
    fn sphere_point_examples() {
        let r = 1.7;
        let p = sphere_point(&PointH::i(), r, PI / 2.0).unwrap();
        assert!(p.x().abs() < 1e-14 && (p.y() - r.exp()).abs() < 1e-12);
        let p = sphere_point(&PointH::i(), 0.0, 1.234).unwrap();
        assert!((p.x()).abs() < 1e-15 && (p.y() - 1.0).abs() < 1e-15);
        let p = sphere_point(&PointH::i(), 1.0, PI / 4.0).unwrap();
        assert!((p.y() - 1.0 / 1f64.cosh()).abs() < 1e-14);
        assert!((distance(&PointH::i(), &p) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn sphere_point_matches_matrix_action() {
        let z = pt(-0.4, 2.5);
        for &(r, th) in &[(0.5, 0.2), (3.0, 1.1), (7.0, 2.9)] {
            let g = MobiusReal::affine_to(&z)
                .compose(&MobiusReal::rotation(th))
                .compose(&MobiusReal::dilation(r));
            let via_matrix = mobius_apply(&g, &PointH::i()).unwrap();
            let direct = sphere_point(&z, r, th).unwrap();
            assert!(distance(&via_matrix, &direct) < 1e-10);
        }
    }

    #[test]
    fn sphere_traces_circle() {
        let z = pt(1.5, 0.3);
        for r in [0.01, 0.5, 2.0, 9.0] {
            let mut worst: f64 = 0.0;
            for j in 0..720 {
                let th = PI * j as f64 / 720.0;
                let p = sphere_point(&z, r, th).unwrap();
                worst = worst.max((distance(&z, &p) - r).abs());
            }
            assert!(worst <= 1e-9, "r={r} worst={worst}");
        }
    }

    #[test]
    fn sphere_rejects_bad_radius() {
        assert!(sphere_point(&PointH::i(), -0.1, 0.0).is_err());
        assert!(sphere_point(&PointH::i(), 701.0, 0.0).is_err());
    }

    #[test]
    fn ball_volume_examples() {
        assert_eq!(ball_volume(0.0).unwrap(), 0.0);
        let v = ball_volume(1.0).unwrap();
        assert!((v - TAU * (1f64.cosh() - 1.0)).abs() < 1e-13);
        assert!((inverse_ball_radius(v).unwrap() - 1.0).abs() < 1e-12);
        // area of X_5 = 60 * π/3
        let r = inverse_ball_radius(60.0 * PI / 3.0).unwrap();
        assert!((r - 11f64.acosh()).abs() < 1e-12);
        assert!((r - 3.088_969_904_256_659).abs() < 1e-9);
    }

    #[test]
    fn ball_volume_increasing_convex() {
        let h = 0.01;
        let vals: Vec<f64> = (1..2000).map(|i| ball_volume(i as f64 * h).unwrap()).collect();
        for w in vals.windows(3) {
            assert!(w[1] > w[0]);
            assert!(w[2] - 2.0 * w[1] + w[0] > 0.0);
        }
    }

    #[test]
    fn sampler_rejects_degenerate_region() {
        assert!(Rect::new(0.0, 0.0, 1.0, 2.0).is_err());
        assert!(Rect::new(0.0, 1.0, 1.0, 1.0).is_err());
        assert!(Rect::new(0.0, 1.0, 0.0, 1.0).is_err());
    }

    #[test]
    fn cusp_strip_has_unit_measure() {
        let r = Rect::new(-0.5, 0.5, 1.0, f64::INFINITY).unwrap();
        assert!((r.measure() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn sampler_stays_in_region() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let r = Rect::new(0.25, 0.3, 2.0, 2.1).unwrap();
        for _ in 0..1000 {
            assert!(r.contains(&sample_hyperbolic_measure(&r, &mut rng)));
        }
    }
}
