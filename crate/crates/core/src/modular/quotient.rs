//! The congruence covers `X_q = Γ(q)\H`.
//!
//! A point of `X_q` is stored as a base point in the fundamental domain `F`
//! of PSL2(Z) together with a sheet `c ∈ PSL2(Z/qZ)`, under the
//! identification `(z, c) ~ (γz, γc)` for `γ ∈ PSL2(Z)`. The deck group acts
//! by `(z, c) -> (z, c h)`, which commutes with the identification.
//!
//! Distances are minima over lattice translates. The candidates are all
//! `γ` with `d(i, γi) ≤ B`, enumerated once per geometry; since
//! `a² + b² + c² + d² = 2 cosh d(i, γi)`, the enumeration bound doubles as a
//! certificate that nothing closer was missed.

use std::collections::{HashSet, VecDeque};
use std::f64::consts::PI;

use rand::Rng;
use serde::Serialize;

use crate::error::{invalid, Error, Result};
use crate::geometry::{distance, PointH};

use super::group::{coset_index, CosetModQ, CosetTable, GroupElement};
use super::reduce::{in_fundamental_domain, reduce_fundamental};

/// Hyperbolic area of the modular surface.
pub const MODULAR_AREA: f64 = PI / 3.0;

/// Most group elements an enumeration may hold.
pub const MAX_BALL_ELEMENTS: f64 = 3.0e7;

/// A point of `X_q`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuotientPoint {
    base: PointH,
    sheet: CosetModQ,
}

impl QuotientPoint {
    pub fn new(base: PointH, sheet: CosetModQ) -> Result<Self> {
        if !in_fundamental_domain(&base) {
            return Err(invalid(format!("{base} is outside the fundamental domain")));
        }
        Ok(QuotientPoint { base, sheet })
    }

    /// The point represented by `(z, sheet)` for arbitrary `z`.
    pub fn from_lift(z: &PointH, sheet: CosetModQ) -> Result<Self> {
        let (w, gamma) = reduce_fundamental(z)?;
        let q = sheet.modulus();
        Ok(QuotientPoint {
            base: w,
            sheet: gamma.mod_q(q).mul(&sheet),
        })
    }

    pub fn base(&self) -> PointH {
        self.base
    }

    pub fn sheet(&self) -> CosetModQ {
        self.sheet
    }

    /// Image under the deck transformation `h`.
    pub fn deck(&self, h: &CosetModQ) -> Self {
        QuotientPoint {
            base: self.base,
            sheet: self.sheet.mul(h),
        }
    }
}

/// Largest `d(i, z)` over `z ∈ F` with `Im z ≤ y_cap`.
pub fn max_base_distance(y_cap: f64) -> f64 {
    distance(&PointH::i(), &PointH::new_unchecked(0.5, y_cap))
}

/// Estimated number of PSL2(Z) elements with `d(i, γi) ≤ b`: one tile
/// `γF` of area π/3 per element.
pub fn estimated_ball_count(b: f64) -> f64 {
    6.0 * (b.cosh() - 1.0) + 2.0
}

/// All `γ ∈ PSL2(Z)` with `d(i, γi) ≤ b`, sorted by that distance.
///
/// Breadth-first over left multiplication by `S`, `T`, `T⁻¹`, pruned at the
/// norm bound. Complete: reducing `γi` into `F` one step at a time never
/// increases `d(i, ·)` (translations toward the strip shrink it, `S` fixes
/// `i`), so every element in the ball is joined to the stabilizer of `i`
/// by a path inside the ball.
pub fn enumerate_ball(b: f64) -> Result<Vec<(GroupElement, f64)>> {
    if !(b >= 0.0) {
        return Err(invalid(format!("enumeration radius must be >= 0, got {b}")));
    }
    let est = estimated_ball_count(b);
    if est > MAX_BALL_ELEMENTS || b > 40.0 {
        return Err(Error::Capacity {
            what: "PSL2(Z) elements in enumeration ball",
            limit: MAX_BALL_ELEMENTS,
            requested: est,
        });
    }
    let limit = 2.0 * b.cosh() * (1.0 + 1e-12);
    let mut seen: HashSet<GroupElement> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(GroupElement::IDENTITY);
    queue.push_back(GroupElement::IDENTITY);
    while let Some(g) = queue.pop_front() {
        for h in [GroupElement::S, GroupElement::T, GroupElement::T_INV] {
            let hg = h.mul(&g)?;
            if hg.norm2() <= limit && seen.insert(hg) {
                queue.push_back(hg);
            }
        }
    }
    let mut out: Vec<(GroupElement, f64)> = seen
        .into_iter()
        .map(|g| (g, (0.5 * g.norm2()).max(1.0).acosh()))
        .collect();
    out.sort_by(|x, y| x.1.total_cmp(&y.1).then(x.0.cmp(&y.0)));
    Ok(out)
}

#[inline]
fn apply_fast(g: &GroupElement, z: &PointH) -> PointH {
    let [a, b, c, d] = g.entries().map(|v| v as f64);
    let re = c * z.x() + d;
    let im = c * z.y();
    let den = re * re + im * im;
    PointH::new_unchecked(((a * z.x() + b) * re + a * c * z.y() * z.y()) / den, z.y() / den)
}

/// Injectivity radius of a point, with the order of its stabilizer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Injectivity {
    pub radius: f64,
    pub stabilizer_order: usize,
}

/// Enumerated candidates for one modulus, bucketed by residue class.
#[derive(Debug, Clone)]
pub struct QuotientGeometry {
    table: CosetTable,
    bound: f64,
    classes: Vec<Vec<(GroupElement, f64)>>,
}

impl QuotientGeometry {
    /// Prepares distance queries of reach `r_max` between points with
    /// `Im ≤ y_cap`.
    pub fn new(q: u32, r_max: f64, y_cap: f64) -> Result<Self> {
        Self::with_bound(q, r_max + 2.0 * max_base_distance(y_cap))
    }

    /// Prepares queries whose certificate radius `R + d(i,z) + d(i,w)` is
    /// at most `bound`.
    pub fn with_bound(q: u32, bound: f64) -> Result<Self> {
        let table = coset_index(q)?;
        let mut classes = vec![Vec::new(); table.len()];
        for (g, d) in enumerate_ball(bound)? {
            classes[table.index_of(&g.mod_q(q))].push((g, d));
        }
        Ok(QuotientGeometry {
            table,
            bound,
            classes,
        })
    }

    pub fn table(&self) -> &CosetTable {
        &self.table
    }

    pub fn q(&self) -> u32 {
        self.table.q()
    }

    /// Number of sheets `N_q`.
    pub fn degree(&self) -> usize {
        self.table.len()
    }

    pub fn area(&self) -> f64 {
        self.degree() as f64 * MODULAR_AREA
    }

    pub fn bound(&self) -> f64 {
        self.bound
    }

    fn check_reach(&self, r_max: f64, z: &PointH, w: &PointH) -> Result<()> {
        let need = r_max + distance(&PointH::i(), z) + distance(&PointH::i(), w);
        if need > self.bound + 1e-12 {
            return Err(Error::Capacity {
                what: "certificate radius R + d(i,z) + d(i,w)",
                limit: self.bound,
                requested: need,
            });
        }
        Ok(())
    }

    fn check_modulus(&self, p: &QuotientPoint) -> Result<()> {
        if p.sheet.modulus() != self.q() {
            return Err(invalid(format!(
                "point has modulus {}, geometry has {}",
                p.sheet.modulus(),
                self.q()
            )));
        }
        Ok(())
    }

    /// `d_X(p, p2)` if it is at most `r_max`, `None` otherwise.
    pub fn distance(&self, p: &QuotientPoint, p2: &QuotientPoint, r_max: f64) -> Result<Option<f64>> {
        self.check_modulus(p)?;
        self.check_modulus(p2)?;
        // a fixed argument order makes the result bitwise symmetric
        let key = |q: &QuotientPoint| (q.base.x(), q.base.y(), self.table.index_of(&q.sheet));
        let (p, p2) = if key(p2).partial_cmp(&key(p)) == Some(std::cmp::Ordering::Less) { (p2, p) } else { (p, p2) };
        let (z, w) = (p.base, p2.base);
        self.check_reach(r_max, &z, &w)?;
        let slack = distance(&PointH::i(), &z) + distance(&PointH::i(), &w);
        let class = self.table.index_of(&p.sheet.mul(&p2.sheet.inverse()));
        let mut best = f64::INFINITY;
        for (g, dg) in &self.classes[class] {
            if dg - slack > best.min(r_max) {
                break;
            }
            best = best.min(distance(&z, &apply_fast(g, &w)));
        }
        Ok((best <= r_max).then_some(best))
    }

    /// Half the shortest displacement of `p` under `Γ(q)`, ignoring elements
    /// that fix the point (counted in `stabilizer_order`).
    pub fn injectivity_radius(&self, p: &QuotientPoint, r_max: f64) -> Result<Injectivity> {
        self.check_modulus(p)?;
        let z = p.base;
        self.check_reach(r_max, &z, &z)?;
        let slack = 2.0 * distance(&PointH::i(), &z);
        let id = self.table.index_of(&CosetModQ::identity(self.q()));
        let mut best = f64::INFINITY;
        let mut stab = 0;
        for (g, dg) in &self.classes[id] {
            if dg - slack > best.min(r_max) {
                break;
            }
            let d = distance(&z, &apply_fast(g, &z));
            if d < 1e-9 {
                stab += 1;
            } else {
                best = best.min(d);
            }
        }
        if best > r_max {
            return Err(Error::Range(format!(
                "no displacement at most {r_max}; injectivity radius exceeds {}",
                0.5 * r_max
            )));
        }
        Ok(Injectivity {
            radius: 0.5 * best,
            stabilizer_order: stab,
        })
    }

    /// Uniform sheet and a `μ`-distributed base point with `Im ≤ y_cap`.
    pub fn sample_uniform<R: Rng + ?Sized>(&self, y_cap: f64, rng: &mut R) -> QuotientPoint {
        let base = sample_fundamental_domain(y_cap, rng);
        let sheet = self.table.element(rng.random_range(0..self.degree()));
        QuotientPoint { base, sheet }
    }
}

/// Fraction of the area of `X_q` above `Im = y_cap` (the same on every
/// sheet): `(1/Y) / (π/3)`.
pub fn truncated_fraction(y_cap: f64) -> f64 {
    (1.0 / y_cap) / MODULAR_AREA
}

/// Draws from `μ` restricted to `F ∩ {Im ≤ y_cap}`.
///
/// In coordinates `(x, u = 1/y)` the measure is Lebesgue and the region is
/// `|x| ≤ ½, 1/Y ≤ u ≤ 1/√(1 - x²)`; rejection from the enclosing box.
pub fn sample_fundamental_domain<R: Rng + ?Sized>(y_cap: f64, rng: &mut R) -> PointH {
    let u_lo = 1.0 / y_cap;
    let u_hi = 2.0 / 3f64.sqrt();
    loop {
        let x = rng.random::<f64>() - 0.5;
        let u = u_lo + (u_hi - u_lo) * rng.random::<f64>();
        if u * u * (1.0 - x * x) <= 1.0 {
            return PointH::new_unchecked(x, 1.0 / u);
        }
    }
}

/// Uniform sample on `X_q` truncated at `y_cap`, with the excluded cusp
/// fraction.
pub fn sample_uniform_quotient<R: Rng + ?Sized>(
    table: &CosetTable,
    y_cap: f64,
    rng: &mut R,
) -> Result<(QuotientPoint, f64)> {
    if !(y_cap >= 2.0) {
        return Err(invalid(format!("cusp cap must be at least 2, got {y_cap}")));
    }
    let base = sample_fundamental_domain(y_cap, rng);
    let sheet = table.element(rng.random_range(0..table.len()));
    Ok((QuotientPoint { base, sheet }, truncated_fraction(y_cap)))
}

/// One-off quotient distance; builds the enumeration for this query only.
pub fn quotient_distance(p: &QuotientPoint, p2: &QuotientPoint, r_max: f64) -> Result<Option<f64>> {
    if r_max > 30.0 {
        return Err(invalid(format!("R_max must be at most 30, got {r_max}")));
    }
    let bound = r_max + distance(&PointH::i(), &p.base) + distance(&PointH::i(), &p2.base);
    QuotientGeometry::with_bound(p.sheet.modulus(), bound)?.distance(p, p2, r_max)
}

/// One-off injectivity radius.
pub fn injectivity_radius(p: &QuotientPoint, r_max: f64) -> Result<Injectivity> {
    let bound = r_max + 2.0 * distance(&PointH::i(), &p.base);
    QuotientGeometry::with_bound(p.sheet.modulus(), bound)?.injectivity_radius(p, r_max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::walker_rng;

    fn qp(x: f64, y: f64, q: u32) -> QuotientPoint {
        QuotientPoint::new(PointH::new(x, y).unwrap(), CosetModQ::identity(q)).unwrap()
    }

    // Independent oracle: every integer matrix of determinant one with
    // entries bounded by the norm certificate.
    fn brute_ball(b: f64) -> Vec<GroupElement> {
        let lim = 2.0 * b.cosh();
        let e = lim.sqrt().floor() as i64;
        let mut out = HashSet::new();
        for a in -e..=e {
            for bb in -e..=e {
                for c in -e..=e {
                    for d in -e..=e {
                        if a * d - bb * c == 1 && ((a * a + bb * bb + c * c + d * d) as f64) <= lim {
                            out.insert(GroupElement::new(a, bb, c, d).unwrap());
                        }
                    }
                }
            }
        }
        let mut v: Vec<_> = out.into_iter().collect();
        v.sort();
        v
    }

    #[test]
    fn enumeration_is_complete() {
        for b in [0.5, 2.0, 3.5] {
            let mut got: Vec<_> = enumerate_ball(b).unwrap().into_iter().map(|x| x.0).collect();
            got.sort();
            assert_eq!(got, brute_ball(b), "b={b}");
        }
    }

    #[test]
    fn ball_count_estimate() {
        let n = enumerate_ball(8.0).unwrap().len() as f64;
        let est = estimated_ball_count(8.0);
        assert!((n / est - 1.0).abs() < 0.1, "n={n} est={est}");
    }

    #[test]
    fn capacity_error() {
        assert!(matches!(enumerate_ball(25.0), Err(Error::Capacity { .. })));
    }

    #[test]
    fn self_distance_zero() {
        let p = qp(0.2, 1.3, 3);
        assert_eq!(quotient_distance(&p, &p, 4.0).unwrap(), Some(0.0));
    }

    #[test]
    fn level_one_distance_matches_brute_force() {
        let z = PointH::i();
        let w = PointH::new(0.0, 2.0).unwrap();
        let oracle = brute_ball(6.0)
            .iter()
            .map(|g| distance(&z, &g.apply(&w).unwrap()))
            .fold(f64::INFINITY, f64::min);
        let got = quotient_distance(&qp(0.0, 1.0, 1), &qp(0.0, 2.0, 1), 4.0).unwrap().unwrap();
        assert!((got - oracle).abs() < 1e-12);
        assert!((got - 2f64.ln()).abs() < 1e-12);
    }

    #[test]
    fn level_two_translation_class() {
        let a = GroupElement::translation(2).mod_q(2);
        let p = QuotientPoint::new(PointH::i(), CosetModQ::identity(2)).unwrap();
        let p2 = p.deck(&a);
        let d = quotient_distance(&p, &p2, 6.0).unwrap().unwrap();
        // T² ≡ I mod 2, so the class is Γ(2) itself and i is its own translate
        assert_eq!(d, 0.0);
        let t = GroupElement::T.mod_q(2);
        let d = quotient_distance(&p, &p.deck(&t), 6.0).unwrap().unwrap();
        let oracle = brute_ball(6.0)
            .iter()
            .filter(|g| g.mod_q(2) == t)
            .map(|g| distance(&PointH::i(), &g.apply(&PointH::i()).unwrap()))
            .fold(f64::INFINITY, f64::min);
        assert!((d - oracle).abs() < 1e-12);
        assert!(d <= 3f64.acosh());
    }

    #[test]
    fn injectivity_examples() {
        let inj = injectivity_radius(&qp(0.0, 1.0, 2), 6.0).unwrap();
        assert!((inj.radius - 0.5 * 3f64.acosh()).abs() < 1e-12);
        assert_eq!(inj.stabilizer_order, 1);
        let inj = injectivity_radius(&qp(0.0, 1.0, 1), 6.0).unwrap();
        assert_eq!(inj.stabilizer_order, 2);
        assert!((inj.radius - 0.5 * 1.5f64.acosh()).abs() < 1e-12);
        let generic = injectivity_radius(&qp(0.13, 1.4, 1), 6.0).unwrap();
        assert_eq!(generic.stabilizer_order, 1);
        assert!(generic.radius > 0.0);
        let high = injectivity_radius(&qp(0.0, 8.0, 5), 6.0).unwrap();
        let cusp = 0.5 * distance(&PointH::new(0.0, 8.0).unwrap(), &PointH::new(5.0, 8.0).unwrap());
        assert!(high.radius <= cusp + 1e-12);
    }

    #[test]
    fn pseudometric_and_deck_invariance() {
        let q = 3;
        let geo = QuotientGeometry::new(q, 5.0, 4.0).unwrap();
        let mut rng = walker_rng(9, 0);
        let pts: Vec<_> = (0..30).map(|_| geo.sample_uniform(4.0, &mut rng)).collect();
        let h = geo.table().element(5);
        for a in &pts {
            for b in &pts {
                let dab = geo.distance(a, b, 5.0).unwrap();
                let dba = geo.distance(b, a, 5.0).unwrap();
                match (dab, dba) {
                    (Some(x), Some(y)) => assert!((x - y).abs() < 1e-9),
                    (None, None) => {}
                    other => panic!("asymmetric reach {other:?}"),
                }
                let dh = geo.distance(&a.deck(&h), &b.deck(&h), 5.0).unwrap();
                assert_eq!(dab, dh);
            }
        }
    }

    #[test]
    fn from_lift_round_trip() {
        let q = 5;
        let t = coset_index(q).unwrap();
        let c = t.element(17);
        let z = PointH::new(3.3, 0.07).unwrap();
        let p = QuotientPoint::from_lift(&z, c).unwrap();
        // the lift and the reduced point are the same point of X_q
        let direct = QuotientPoint::from_lift(&p.base(), p.sheet()).unwrap();
        assert_eq!(direct, p);
        assert_eq!(quotient_distance(&p, &QuotientPoint::from_lift(&z, c).unwrap(), 1.0).unwrap(), Some(0.0));
    }

    #[test]
    fn cusp_fraction() {
        assert!((truncated_fraction(10.0) - 0.3 / PI).abs() < 1e-15);
        let mut rng = walker_rng(1, 0);
        let t = coset_index(2).unwrap();
        assert!(sample_uniform_quotient(&t, 1.0, &mut rng).is_err());
        for _ in 0..1000 {
            let (p, _) = sample_uniform_quotient(&t, 3.0, &mut rng).unwrap();
            assert!(in_fundamental_domain(&p.base()) && p.base().y() <= 3.0);
        }
    }
}
