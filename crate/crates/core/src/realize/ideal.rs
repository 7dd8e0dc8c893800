//! Degree-bounded membership in constraint ideals, decided by an exact
//! linear solve.

use std::collections::BTreeMap;

use super::poly::{Key, Terms};
use super::{PhaseElement, RealizeError, WeylElement};
use crate::linalg;
use crate::scalar::{Gauss, Scalar};

/// Rings the membership test runs in.
pub trait IdealRing: Clone + std::fmt::Display {
    fn terms_of(&self) -> &Terms;
    fn wrap(t: Terms) -> Self;
    /// `g * m` for a monomial `m` (right multiple).
    fn times_monomial(g: &Self, m: Key) -> Self;
    fn product(a: &Self, b: &Self) -> Self;
    /// Whether clearing denominators by a position monomial commutes with
    /// the generator.
    fn commutes_with_positions(g: &Self) -> bool;
}

impl IdealRing for PhaseElement {
    fn terms_of(&self) -> &Terms {
        &self.0
    }
    fn wrap(t: Terms) -> Self {
        PhaseElement(t)
    }
    fn times_monomial(g: &Self, m: Key) -> Self {
        PhaseElement(Terms(g.0 .0.iter().map(|(k, c)| (k.times(&m), c.clone())).collect()))
    }
    fn product(a: &Self, b: &Self) -> Self {
        a * b
    }
    fn commutes_with_positions(_: &Self) -> bool {
        true
    }
}

impl IdealRing for WeylElement {
    fn terms_of(&self) -> &Terms {
        &self.0
    }
    fn wrap(t: Terms) -> Self {
        WeylElement(t)
    }
    fn times_monomial(g: &Self, m: Key) -> Self {
        g * &WeylElement(Terms::monomial(m, Scalar::one()))
    }
    fn product(a: &Self, b: &Self) -> Self {
        a * b
    }
    fn commutes_with_positions(g: &Self) -> bool {
        g.0 .0.keys().all(|k| k.r == [0; 3])
    }
}

/// Generators of an ideal: two-sided in the commutative case, right ideal
/// `sum g_k W` in the Weyl case.
#[derive(Clone, Debug)]
pub struct ConstraintIdeal<E> {
    pub names: Vec<String>,
    pub gens: Vec<E>,
}

fn sphere_terms() -> Terms {
    let mut t = Terms::constant(Scalar::from_int(-1));
    for i in 0..3 {
        t.add_term(Key::position(i, 2), &Scalar::one());
    }
    t
}

impl ConstraintIdeal<PhaseElement> {
    /// `x1^2 + x2^2 + x3^2 - 1`
    pub fn sphere() -> Self {
        ConstraintIdeal { names: vec!["x^2 - 1".into()], gens: vec![PhaseElement(sphere_terms())] }
    }

    /// The sphere together with `x1 p1 + x2 p2 + x3 p3`.
    pub fn sphere_momentum() -> Self {
        let mut sp = Terms::zero();
        for i in 0..3 {
            sp.add_term(Key::position(i, 1).times(&Key::momentum(i)), &Scalar::one());
        }
        ConstraintIdeal {
            names: vec!["x^2 - 1".into(), "x.p".into()],
            gens: vec![PhaseElement(sphere_terms()), PhaseElement(sp)],
        }
    }
}

impl ConstraintIdeal<WeylElement> {
    /// `s1^2 + s2^2 + s3^2 - 1`
    pub fn sphere() -> Self {
        ConstraintIdeal { names: vec!["s^2 - 1".into()], gens: vec![WeylElement(sphere_terms())] }
    }
}

/// Outcome of [`ideal_member`].
#[derive(Clone, Debug)]
pub enum Membership<E> {
    /// `e = sum_k gens[k] * cofactors[k]`.
    Member(Vec<E>),
    /// No combination with cofactors inside the bound exists.
    NotMember { bound: u32 },
    /// The bound cannot even express `e`.
    Undecided { bound: u32, needed: u32 },
}

impl<E> Membership<E> {
    pub fn is_member(&self) -> bool {
        matches!(self, Membership::Member(_))
    }
}

fn degree(k: &Key) -> u32 {
    (k.q_degree().max(0) as u32) + k.r_degree()
}

/// Monomials with non-negative position exponents, position degree at most
/// `qmax` and momentum degree at most `rmax`.
fn monomials(qmax: u32, rmax: u32) -> Vec<Key> {
    let mut qs = Vec::new();
    for a in 0..=qmax as i16 {
        for b in 0..=(qmax as i16 - a) {
            for c in 0..=(qmax as i16 - a - b) {
                qs.push([a, b, c]);
            }
        }
    }
    let mut rs = Vec::new();
    for a in 0..=rmax as u8 {
        for b in 0..=(rmax as u8 - a) {
            for c in 0..=(rmax as u8 - a - b) {
                rs.push([a, b, c]);
            }
        }
    }
    let mut out = Vec::with_capacity(qs.len() * rs.len());
    for q in &qs {
        for r in &rs {
            out.push(Key { q: *q, r: *r });
        }
    }
    out
}

fn clearing_shift(t: &Terms) -> [i16; 3] {
    let mut shift = [0i16; 3];
    for k in t.0.keys() {
        for (s, q) in shift.iter_mut().zip(k.q) {
            *s = (*s).max(-q);
        }
    }
    shift
}

/// Total degree of `e` once its position denominators are cleared: the
/// smallest bound [`ideal_member`] accepts.
pub fn required_degree<E: IdealRing>(e: &E) -> u32 {
    let clear = Key { q: clearing_shift(e.terms_of()), r: [0; 3] };
    e.terms_of().0.keys().map(|k| degree(&k.times(&clear))).max().unwrap_or(0)
}

/// Decides whether `e` lies in `ideal` using cofactors whose products with
/// the generators have total degree at most `bound`. Laurent denominators
/// of `e` are cleared first by the smallest position monomial that makes
/// every exponent non-negative; the returned cofactors include that factor
/// again, so the certificate is exact for `e` itself.
pub fn ideal_member<E: IdealRing>(
    e: &E,
    ideal: &ConstraintIdeal<E>,
    bound: u32,
) -> Result<Membership<E>, RealizeError> {
    if ideal.gens.iter().any(|g| g.terms_of().is_zero()) {
        return Err(RealizeError::Ideal("zero generator".into()));
    }
    if !ideal.gens.iter().all(E::commutes_with_positions) {
        return Err(RealizeError::Ideal("generators must commute with positions".into()));
    }
    for g in &ideal.gens {
        if g.terms_of().0.iter().any(|(k, c)| k.q.iter().any(|&a| a < 0) || !c.is_constant()) {
            return Err(RealizeError::Ideal(format!("generator {g} must be a polynomial with numeric coefficients")));
        }
    }
    let shift = clearing_shift(e.terms_of());
    let clear = Key { q: shift, r: [0; 3] };
    let target: BTreeMap<Key, Scalar> = e.terms_of().0.iter().map(|(k, c)| (k.times(&clear), c.clone())).collect();
    let needed = target.keys().map(degree).max().unwrap_or(0);
    if bound < needed {
        return Ok(Membership::Undecided { bound, needed });
    }
    let rmax_e = target.keys().map(|k| k.r_degree()).max().unwrap_or(0);
    // momentum degree is a grading of every generator used here, so higher
    // momentum cofactors can only cancel among themselves
    let mut columns = Vec::new();
    let mut owners = Vec::new();
    for (gi, g) in ideal.gens.iter().enumerate() {
        let gt = g.terms_of();
        let gdeg = gt.0.keys().map(degree).max().unwrap_or(0);
        let rs: Vec<u32> = gt.0.keys().map(|k| k.r_degree()).collect();
        let homogeneous = rs.iter().all(|&r| r == rs[0]);
        if gdeg > bound {
            continue;
        }
        let room = bound - gdeg;
        let rmax = if homogeneous { rmax_e.saturating_sub(rs[0]).min(room) } else { room };
        for m in monomials(room, rmax) {
            if degree(&m) > room {
                continue;
            }
            let prod = E::times_monomial(g, m);
            let col: linalg::Column<Key> =
                prod.terms_of().0.iter().map(|(k, c)| (*k, c.as_constant().unwrap_or_else(Gauss::zero))).collect();
            columns.push(col);
            owners.push((gi, m));
        }
    }
    let Some(x) = linalg::solve(&columns, &target) else {
        return Ok(Membership::NotMember { bound });
    };
    let inv_clear = Key { q: shift.map(|a| -a), r: [0; 3] };
    let mut cof = vec![Terms::zero(); ideal.gens.len()];
    for ((gi, m), c) in owners.iter().zip(&x) {
        cof[*gi].add_term(m.times(&inv_clear), c);
    }
    let cof: Vec<E> = cof.into_iter().map(E::wrap).collect();
    let mut check = Terms::zero();
    for (g, c) in ideal.gens.iter().zip(&cof) {
        check = check.plus(E::product(g, c).terms_of());
    }
    if &check != e.terms_of() {
        return Err(RealizeError::Ideal("certificate failed to reproduce the element".into()));
    }
    Ok(Membership::Member(cof))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generator_is_member() {
        let ideal = ConstraintIdeal::<PhaseElement>::sphere();
        let g = ideal.gens[0].clone();
        match ideal_member(&g, &ideal, 2).unwrap() {
            Membership::Member(c) => assert_eq!(c[0], PhaseElement::one()),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn one_is_not() {
        let ideal = ConstraintIdeal::<PhaseElement>::sphere_momentum();
        for bound in [2, 4, 6] {
            assert!(matches!(ideal_member(&PhaseElement::one(), &ideal, bound).unwrap(), Membership::NotMember { .. }));
        }
        let wide = &PhaseElement::x(0).pow(3) * &PhaseElement::p(1);
        assert!(matches!(ideal_member(&wide, &ideal, 2).unwrap(), Membership::Undecided { bound: 2, needed: 4 }));
    }

    #[test]
    fn laurent_multiple() {
        // x1^-2 (x1^2 + x2^2 + x3^2 - 1) p3
        let ideal = ConstraintIdeal::<PhaseElement>::sphere();
        let e = &(&PhaseElement::x_pow(0, -2) * &ideal.gens[0]) * &PhaseElement::p(2);
        assert!(ideal_member(&e, &ideal, 4).unwrap().is_member());
        let w = ConstraintIdeal::<WeylElement>::sphere();
        let e = &(&w.gens[0] * &WeylElement::d(0)) * &WeylElement::s_pow(1, -1);
        assert!(ideal_member(&e, &w, 5).unwrap().is_member());
    }
}
