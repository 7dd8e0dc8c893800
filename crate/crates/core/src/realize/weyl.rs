//! The Weyl algebra over Laurent positions: `s1, s2, s3` (invertible) and
//! derivatives `d1, d2, d3`, normal ordered with positions on the left.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;

use super::poly::{Key, Terms};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct WeylElement(pub(crate) Terms);

fn binomial(n: u32, k: u32) -> BigInt {
    let mut acc = BigInt::from(1);
    for j in 0..k {
        acc = acc * (n - j) / (j + 1);
    }
    acc
}

/// `m (m-1) ... (m-k+1)`, for any integer `m`.
fn falling(m: i64, k: u32) -> BigInt {
    (0..k as i64).fold(BigInt::from(1), |acc, j| acc * (m - j))
}

/// `d^n s^m = sum_k C(n,k) falling(m,k) s^(m-k) d^(n-k)` in one variable.
fn reorder(n: u8, m: i16) -> Vec<(u8, i16, BigInt)> {
    (0..=n)
        .map(|k| {
            let c = binomial(n as u32, k as u32) * falling(m as i64, k as u32);
            (n - k, m - k as i16, c)
        })
        .filter(|(_, _, c)| c != &BigInt::from(0))
        .collect()
}

impl WeylElement {
    pub fn zero() -> Self {
        WeylElement(Terms::zero())
    }

    pub fn one() -> Self {
        WeylElement::constant(Scalar::one())
    }

    pub fn constant(s: Scalar) -> Self {
        WeylElement(Terms::constant(s))
    }

    pub fn s_pow(i: usize, e: i16) -> Self {
        WeylElement(Terms::monomial(Key::position(i, e), Scalar::one()))
    }

    pub fn s(i: usize) -> Self {
        WeylElement::s_pow(i, 1)
    }

    pub fn d(i: usize) -> Self {
        WeylElement(Terms::monomial(Key::momentum(i), Scalar::one()))
    }

    /// Builds from normal-ordered terms `c * s^a d^b`.
    pub fn from_terms(terms: impl IntoIterator<Item = (Key, Scalar)>) -> Self {
        let mut t = Terms::zero();
        for (k, c) in terms {
            t.add_term(k, &c);
        }
        WeylElement(t)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Key, &Scalar)> {
        self.0 .0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        self.0.as_scalar()
    }

    pub fn scale(&self, s: &Scalar) -> Self {
        WeylElement(self.0.scale(s))
    }

    pub fn map_coefficients(&self, f: impl FnMut(&Scalar) -> Scalar) -> Self {
        WeylElement(self.0.map_coefficients(f))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = WeylElement::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Inverse of a single term `c * s^a` (no derivatives).
    pub fn inverse(&self) -> Option<Self> {
        let (k, c) = self.0.single()?;
        if k.r != [0; 3] {
            return None;
        }
        let inv = c.as_constant()?.inv()?;
        Some(WeylElement(Terms::monomial(Key { q: k.q.map(|a| -a), r: [0; 3] }, Scalar::from_gauss(inv))))
    }

    pub fn commutator(&self, o: &WeylElement) -> WeylElement {
        &(self * o) - &(o * self)
    }

    pub fn anticommutator(&self, o: &WeylElement) -> WeylElement {
        &(self * o) + &(o * self)
    }

    pub fn sym3(a: &WeylElement, b: &WeylElement, c: &WeylElement) -> WeylElement {
        let mut s = WeylElement::zero();
        for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
            s = &s + &(&(x * y) * z);
        }
        s.scale(&Scalar::from_ratio(1, 6))
    }
}

/// `(s^a d^b)(s^c d^e)` in normal order.
fn mul_keys(x: &Key, y: &Key) -> Vec<(Key, BigInt)> {
    let mut acc: Vec<(Key, BigInt)> = vec![(Key { q: x.q, r: [0; 3] }, BigInt::from(1))];
    for i in 0..3 {
        let parts = reorder(x.r[i], y.q[i]);
        let mut next = Vec::with_capacity(acc.len() * parts.len());
        for (k, c) in &acc {
            for (dn, sm, pc) in &parts {
                let mut k2 = *k;
                k2.q[i] += sm;
                k2.r[i] = *dn;
                next.push((k2, c * pc));
            }
        }
        acc = next;
    }
    for (k, _) in acc.iter_mut() {
        for i in 0..3 {
            k.r[i] += y.r[i];
        }
    }
    acc
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.render(f, "s", "d")
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, o: &WeylElement) -> WeylElement {
        WeylElement(self.0.plus(&o.0))
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, o: &WeylElement) -> WeylElement {
        WeylElement(self.0.minus(&o.0))
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, o: &WeylElement) -> WeylElement {
        let mut out = Terms::zero();
        for (ka, ca) in &self.0 .0 {
            for (kb, cb) in &o.0 .0 {
                let c = ca * cb;
                for (k, n) in mul_keys(ka, kb) {
                    out.add_term(k, &(&c * &Scalar::from_rational(n.into())));
                }
            }
        }
        WeylElement(out)
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&Scalar::from_int(-1))
    }
}
