//! Classical phase space: commutative Laurent polynomials in `x1, x2, x3`
//! and polynomials in `p1, p2, p3`, with the canonical Poisson bracket.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use super::poly::{Key, Terms};
use crate::scalar::Scalar;

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PhaseElement(pub(crate) Terms);

impl PhaseElement {
    pub fn zero() -> Self {
        PhaseElement(Terms::zero())
    }

    pub fn one() -> Self {
        PhaseElement::constant(Scalar::one())
    }

    pub fn constant(s: Scalar) -> Self {
        PhaseElement(Terms::constant(s))
    }

    /// `x_i^e` (0-based `i`; `e` may be negative).
    pub fn x_pow(i: usize, e: i16) -> Self {
        PhaseElement(Terms::monomial(Key::position(i, e), Scalar::one()))
    }

    pub fn x(i: usize) -> Self {
        PhaseElement::x_pow(i, 1)
    }

    pub fn p(i: usize) -> Self {
        PhaseElement(Terms::monomial(Key::momentum(i), Scalar::one()))
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Key, Scalar)>) -> Self {
        let mut t = Terms::zero();
        for (k, c) in terms {
            t.add_term(k, &c);
        }
        PhaseElement(t)
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
        PhaseElement(self.0.scale(s))
    }

    pub fn map_coefficients(&self, f: impl FnMut(&Scalar) -> Scalar) -> Self {
        PhaseElement(self.0.map_coefficients(f))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = PhaseElement::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Multiplicative inverse of a single term `c * x^a` (no momenta).
    pub fn inverse(&self) -> Option<Self> {
        let (k, c) = self.0.single()?;
        if k.r != [0; 3] {
            return None;
        }
        let inv = c.as_constant()?.inv()?;
        let k = Key { q: k.q.map(|a| -a), r: [0; 3] };
        Some(PhaseElement(Terms::monomial(k, Scalar::from_gauss(inv))))
    }

    pub fn d_dx(&self, i: usize) -> Self {
        let mut out = Terms::zero();
        for (k, c) in &self.0 .0 {
            if k.q[i] != 0 {
                let mut k2 = *k;
                k2.q[i] -= 1;
                out.add_term(k2, &(c * &Scalar::from_int(k.q[i] as i64)));
            }
        }
        PhaseElement(out)
    }

    pub fn d_dp(&self, i: usize) -> Self {
        let mut out = Terms::zero();
        for (k, c) in &self.0 .0 {
            if k.r[i] != 0 {
                let mut k2 = *k;
                k2.r[i] -= 1;
                out.add_term(k2, &(c * &Scalar::from_int(k.r[i] as i64)));
            }
        }
        PhaseElement(out)
    }

    /// Sorted list of the monomial keys in render order.
    pub fn keys(&self) -> Vec<Key> {
        self.0.sorted().into_iter().map(|(k, _)| *k).collect()
    }
}

/// `{a, b} = sum_k da/dx_k db/dp_k - da/dp_k db/dx_k`.
pub fn poisson_bracket(a: &PhaseElement, b: &PhaseElement) -> PhaseElement {
    let mut out = PhaseElement::zero();
    for k in 0..3 {
        out = &out + &(&a.d_dx(k) * &b.d_dp(k));
        out = &out - &(&a.d_dp(k) * &b.d_dx(k));
    }
    out
}

impl fmt::Display for PhaseElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.render(f, "x", "p")
    }
}

impl Add for &PhaseElement {
    type Output = PhaseElement;
    fn add(self, o: &PhaseElement) -> PhaseElement {
        PhaseElement(self.0.plus(&o.0))
    }
}

impl Sub for &PhaseElement {
    type Output = PhaseElement;
    fn sub(self, o: &PhaseElement) -> PhaseElement {
        PhaseElement(self.0.minus(&o.0))
    }
}

impl Mul for &PhaseElement {
    type Output = PhaseElement;
    fn mul(self, o: &PhaseElement) -> PhaseElement {
        let mut out = Terms::zero();
        for (ka, ca) in &self.0 .0 {
            for (kb, cb) in &o.0 .0 {
                out.add_term(ka.times(kb), &(ca * cb));
            }
        }
        PhaseElement(out)
    }
}

impl Neg for &PhaseElement {
    type Output = PhaseElement;
    fn neg(self) -> PhaseElement {
        self.scale(&Scalar::from_int(-1))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random(rng: &mut ChaCha8Rng) -> PhaseElement {
        let n = rng.random_range(1..=3);
        PhaseElement::from_terms((0..n).map(|_| {
            let k = Key {
                q: std::array::from_fn(|_| rng.random_range(-2..=2)),
                r: std::array::from_fn(|_| rng.random_range(0..=2)),
            };
            (k, Scalar::from_int(rng.random_range(-3..=3)))
        }))
    }

    #[test]
    fn canonical_pairs() {
        assert_eq!(poisson_bracket(&PhaseElement::x(0), &PhaseElement::p(0)), PhaseElement::one());
        assert!(poisson_bracket(&PhaseElement::x(0), &PhaseElement::p(1)).is_zero());
        let inv = PhaseElement::x_pow(1, -1);
        assert_eq!(poisson_bracket(&inv, &PhaseElement::p(1)).to_string(), "-x2^-2");
    }

    #[test]
    fn bracket_axioms() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let (a, b, c) = (random(&mut rng), random(&mut rng), random(&mut rng));
            assert_eq!(poisson_bracket(&a, &b), -&poisson_bracket(&b, &a));
            let leibniz = &(&poisson_bracket(&a, &b) * &c) + &(&b * &poisson_bracket(&a, &c));
            assert_eq!(poisson_bracket(&a, &(&b * &c)), leibniz);
            let jac = &(&poisson_bracket(&poisson_bracket(&a, &b), &c)
                + &poisson_bracket(&poisson_bracket(&b, &c), &a))
                + &poisson_bracket(&poisson_bracket(&c, &a), &b);
            assert!(jac.is_zero());
        }
    }
}
