//! Exact PSL2(Z) elements and their images in PSL2(Z/qZ).

use std::collections::{HashMap, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::geometry::{mobius_apply, MobiusReal, PointH};

/// Largest modulus accepted by [`coset_index`].
pub const MAX_MODULUS: u32 = 101;

/// An element of PSL2(Z) in canonical projective form.
///
/// Entries are machine integers with checked arithmetic; every product that
/// would overflow is reported instead of wrapping. At the distance scales
/// used here entries stay below `2 cosh(40)`, far inside `i64`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct GroupElement {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

fn overflow() -> Error {
    Error::NumericRange("integer overflow in PSL2(Z) arithmetic".into())
}

impl GroupElement {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = a
            .checked_mul(d)
            .zip(b.checked_mul(c))
            .and_then(|(x, y)| x.checked_sub(y))
            .ok_or_else(overflow)?;
        if det != 1 {
            return Err(invalid(format!(
                "[[{a}, {b}], [{c}, {d}]] has determinant {det}, not 1"
            )));
        }
        Ok(Self::canonical(a, b, c, d))
    }

    /// Picks the lexicographically larger of `±(a, b, c, d)`.
    fn canonical(a: i64, b: i64, c: i64, d: i64) -> Self {
        if (a, b, c, d) < (-a, -b, -c, -d) {
            GroupElement {
                a: -a,
                b: -b,
                c: -c,
                d: -d,
            }
        } else {
            GroupElement { a, b, c, d }
        }
    }

    pub const IDENTITY: GroupElement = GroupElement {
        a: 1,
        b: 0,
        c: 0,
        d: 1,
    };
    /// `z -> -1/z`, canonical form of `[[0, -1], [1, 0]]`.
    pub const S: GroupElement = GroupElement {
        a: 0,
        b: 1,
        c: -1,
        d: 0,
    };
    pub const T: GroupElement = GroupElement {
        a: 1,
        b: 1,
        c: 0,
        d: 1,
    };
    pub const T_INV: GroupElement = GroupElement {
        a: 1,
        b: -1,
        c: 0,
        d: 1,
    };

    pub fn translation(n: i64) -> Self {
        GroupElement {
            a: 1,
            b: n,
            c: 0,
            d: 1,
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn mul(&self, o: &GroupElement) -> Result<GroupElement> {
        let f = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or_else(overflow)
        };
        Ok(Self::canonical(
            f(self.a, o.a, self.b, o.c)?,
            f(self.a, o.b, self.b, o.d)?,
            f(self.c, o.a, self.d, o.c)?,
            f(self.c, o.b, self.d, o.d)?,
        ))
    }

    pub fn inverse(&self) -> GroupElement {
        Self::canonical(self.d, -self.b, -self.c, self.a)
    }

    /// `a² + b² + c² + d² = 2 cosh d(i, g i)`.
    pub fn norm2(&self) -> f64 {
        let [a, b, c, d] = self.entries().map(|v| v as f64);
        a * a + b * b + c * c + d * d
    }

    pub fn to_mobius(&self) -> MobiusReal {
        MobiusReal {
            a: self.a as f64,
            b: self.b as f64,
            c: self.c as f64,
            d: self.d as f64,
        }
    }

    pub fn apply(&self, z: &PointH) -> Result<PointH> {
        mobius_apply(&self.to_mobius(), z)
    }

    pub fn mod_q(&self, q: u32) -> CosetModQ {
        let m = q as i64;
        let r = |v: i64| v.rem_euclid(m) as u32;
        CosetModQ::canonical(q, [r(self.a), r(self.b), r(self.c), r(self.d)])
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// An element of PSL2(Z/qZ), in canonical projective form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CosetModQ {
    q: u32,
    m: [u32; 4],
}

impl CosetModQ {
    pub fn new(q: u32, a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        if q == 0 {
            return Err(invalid("modulus must be at least 1"));
        }
        let m = q as i64;
        let r = |v: i64| v.rem_euclid(m);
        let (a, b, c, d) = (r(a), r(b), r(c), r(d));
        if (a * d - b * c).rem_euclid(m) != 1 % m {
            return Err(invalid(format!(
                "[[{a}, {b}], [{c}, {d}]] is not unimodular mod {q}"
            )));
        }
        Ok(Self::canonical(q, [a as u32, b as u32, c as u32, d as u32]))
    }

    fn canonical(q: u32, m: [u32; 4]) -> Self {
        let neg = m.map(|v| (q - v) % q);
        CosetModQ {
            q,
            m: if neg < m { neg } else { m },
        }
    }

    pub fn identity(q: u32) -> Self {
        Self::canonical(q, [1 % q, 0, 0, 1 % q])
    }

    pub fn modulus(&self) -> u32 {
        self.q
    }

    pub fn entries(&self) -> [u32; 4] {
        self.m
    }

    pub fn mul(&self, o: &CosetModQ) -> CosetModQ {
        debug_assert_eq!(self.q, o.q);
        let q = self.q as u64;
        let [a, b, c, d] = self.m.map(u64::from);
        let [e, f, g, h] = o.m.map(u64::from);
        let r = |v: u64| (v % q) as u32;
        Self::canonical(
            self.q,
            [r(a * e + b * g), r(a * f + b * h), r(c * e + d * g), r(c * f + d * h)],
        )
    }

    pub fn inverse(&self) -> CosetModQ {
        let q = self.q;
        let [a, b, c, d] = self.m;
        Self::canonical(q, [d, (q - b) % q, (q - c) % q, a])
    }

    fn code(&self) -> usize {
        let q = self.q as usize;
        self.m.iter().fold(0, |acc, &v| acc * q + v as usize)
    }
}

impl fmt::Display for CosetModQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c, d] = self.m;
        write!(f, "[[{a}, {b}], [{c}, {d}]] mod {}", self.q)
    }
}

/// `|PSL2(Z/qZ)|` from the product formula.
pub fn closed_form_order(q: u32) -> u64 {
    let mut n = q as u64;
    let mut order = n * n * n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            order = order / (p * p) * (p * p - 1);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        order = order / (n * n) * (n * n - 1);
    }
    if q > 2 {
        order / 2
    } else {
        order
    }
}

/// Enumeration of PSL2(Z/qZ) with integer lifts and a dense index.
#[derive(Debug, Clone)]
pub struct CosetTable {
    q: u32,
    elements: Vec<CosetModQ>,
    lifts: Vec<GroupElement>,
    index: Index,
}

#[derive(Debug, Clone)]
enum Index {
    Dense(Vec<u32>),
    Sparse(HashMap<CosetModQ, u32>),
}

const DENSE_LIMIT: usize = 1 << 24;

impl CosetTable {
    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[CosetModQ] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> CosetModQ {
        self.elements[i]
    }

    /// An integer matrix reducing to element `i`.
    pub fn lift(&self, i: usize) -> GroupElement {
        self.lifts[i]
    }

    pub fn index_of(&self, c: &CosetModQ) -> usize {
        match &self.index {
            Index::Dense(v) => v[c.code()] as usize,
            Index::Sparse(m) => m[c] as usize,
        }
    }

    /// Index of `element(i) * g`, with `g` given as an integer matrix.
    pub fn right_mul(&self, i: usize, g: &GroupElement) -> usize {
        self.index_of(&self.elements[i].mul(&g.mod_q(self.q)))
    }

    /// Index of `g * element(i)`.
    pub fn left_mul(&self, g: &GroupElement, i: usize) -> usize {
        self.index_of(&g.mod_q(self.q).mul(&self.elements[i]))
    }
}

/// Enumerates PSL2(Z/qZ) exhaustively and attaches an integer lift to each
/// element by breadth-first search in the Cayley graph of `S`, `T`, `T⁻¹`.
pub fn coset_index(q: u32) -> Result<CosetTable> {
    if q == 0 {
        return Err(invalid("modulus must be at least 1"));
    }
    if q > MAX_MODULUS {
        return Err(Error::Capacity {
            what: "modulus for coset enumeration",
            limit: MAX_MODULUS as f64,
            requested: q as f64,
        });
    }
    let qq = q as u64;
    let mut elements = Vec::new();
    for a in 0..qq {
        for b in 0..qq {
            for c in 0..qq {
                for d in 0..qq {
                    if (a * d + qq * qq - b * c) % qq == 1 % qq {
                        let m = [a as u32, b as u32, c as u32, d as u32];
                        let e = CosetModQ::canonical(q, m);
                        if e.m == m {
                            elements.push(e);
                        }
                    }
                }
            }
        }
    }
    let n_codes = (q as usize).pow(4);
    let index = if n_codes <= DENSE_LIMIT {
        let mut v = vec![u32::MAX; n_codes];
        for (i, e) in elements.iter().enumerate() {
            v[e.code()] = i as u32;
        }
        Index::Dense(v)
    } else {
        Index::Sparse(elements.iter().enumerate().map(|(i, e)| (*e, i as u32)).collect())
    };
    let mut table = CosetTable {
        q,
        lifts: vec![GroupElement::IDENTITY; elements.len()],
        elements,
        index,
    };
    let mut seen = vec![false; table.len()];
    let start = table.index_of(&CosetModQ::identity(q));
    seen[start] = true;
    let mut queue = VecDeque::from([start]);
    while let Some(i) = queue.pop_front() {
        for g in [GroupElement::S, GroupElement::T, GroupElement::T_INV] {
            let lift = g.mul(&table.lifts[i])?;
            let j = table.index_of(&lift.mod_q(q));
            if !seen[j] {
                seen[j] = true;
                table.lifts[j] = lift;
                queue.push_back(j);
            }
        }
    }
    debug_assert!(seen.iter().all(|s| *s));
    Ok(table)
}
