//! Universal enveloping algebra arithmetic in the PBW basis.
//!
//! Elements are sparse maps from ordered monomials `X_1^{a_1} ... X_n^{a_n}`
//! to [`Scalar`]s. Products go through a memoized left multiplication by
//! single generators; [`normal_form`] is the reference word-rewriting engine
//! used to cross-check it.

pub mod rep;
mod rewrite;

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex};

use fnv::FnvHashMap;
use smallvec::SmallVec;
use thiserror::Error;

use crate::lie::Algebra;
use crate::scalar::{fmt_sum_term, Param, Scalar, ScalarError};

pub use rewrite::{normal_form, normal_form_with, RawSum, Strategy, Word};

#[derive(Debug, Error)]
pub enum UeaError {
    #[error("operands belong to different algebras ({0} vs {1})")]
    MixedAlgebra(String, String),
    #[error("unsupported algebra {0:?}: {1}")]
    Unsupported(String, String),
    #[error("generator index {0} out of range")]
    BadGenerator(usize),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
    #[error("representation: {0}")]
    Rep(String),
}

/// Exponent vector of a PBW monomial.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Monomial(pub SmallVec<[u8; 8]>);

impl Monomial {
    pub fn unit(dim: usize) -> Self {
        Monomial(SmallVec::from_elem(0, dim))
    }

    pub fn generator(dim: usize, i: usize) -> Self {
        let mut m = Monomial::unit(dim);
        m.0[i] = 1;
        m
    }

    pub fn from_exponents(exps: &[u8]) -> Self {
        Monomial(SmallVec::from_slice(exps))
    }

    pub fn exponents(&self) -> &[u8] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|&e| e as u32).sum()
    }

    /// Lowest generator index present.
    pub fn first(&self) -> Option<usize> {
        self.0.iter().position(|&e| e > 0)
    }

    /// The non-decreasing word spelling this monomial.
    pub fn word(&self) -> Word {
        let mut w = Vec::with_capacity(self.degree() as usize);
        for (i, &e) in self.0.iter().enumerate() {
            for _ in 0..e {
                w.push(i);
            }
        }
        w
    }

    /// Graded lexicographic order: higher degree first, then larger
    /// exponents on earlier generators first.
    pub fn grlex_cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| other.0.cmp(&self.0))
    }

    fn fmt_with(&self, labels: &[String], f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, &e) in self.0.iter().enumerate() {
            if e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            f.write_str(&labels[i])?;
            if e > 1 {
                write!(f, "^{e}")?;
            }
        }
        Ok(())
    }
}

type Product = Arc<[(Monomial, Scalar)]>;

/// Memo table for `X_g * m` with `m` a PBW monomial.
#[derive(Default)]
pub struct PbwCache {
    left: Mutex<FnvHashMap<(u16, Monomial), Product>>,
}

impl PbwCache {
    pub fn len(&self) -> usize {
        self.left.lock().unwrap().len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// An element of the universal enveloping algebra of `alg`, in PBW form.
#[derive(Clone)]
pub struct EAElement {
    alg: Algebra,
    terms: FnvHashMap<Monomial, Scalar>,
}

impl fmt::Debug for EAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "EAElement({self})")
    }
}

impl PartialEq for EAElement {
    fn eq(&self, other: &Self) -> bool {
        self.same_algebra(other) && self.terms == other.terms
    }
}

impl Eq for EAElement {}

pub(crate) fn add_into<K: std::hash::Hash + Eq>(map: &mut FnvHashMap<K, Scalar>, key: K, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::hash_map::Entry::Occupied(mut o) => {
            let s = o.get() + c;
            if s.is_zero() {
                o.remove();
            } else {
                *o.get_mut() = s;
            }
        }
        std::collections::hash_map::Entry::Vacant(v) => {
            v.insert(c.clone());
        }
    }
}

impl EAElement {
    pub fn zero(alg: &Algebra) -> Self {
        EAElement { alg: alg.clone(), terms: FnvHashMap::default() }
    }

    pub fn one(alg: &Algebra) -> Self {
        EAElement::scalar(alg, Scalar::one())
    }

    pub fn scalar(alg: &Algebra, s: Scalar) -> Self {
        let mut e = EAElement::zero(alg);
        e.add_term(Monomial::unit(alg.dim()), &s);
        e
    }

    pub fn generator(alg: &Algebra, i: usize) -> Self {
        assert!(i < alg.dim(), "generator index {i} out of range");
        let mut e = EAElement::zero(alg);
        e.add_term(Monomial::generator(alg.dim(), i), &Scalar::one());
        e
    }

    pub fn from_terms(alg: &Algebra, terms: impl IntoIterator<Item = (Monomial, Scalar)>) -> Self {
        let mut e = EAElement::zero(alg);
        for (m, c) in terms {
            assert_eq!(m.0.len(), alg.dim(), "monomial length must equal algebra dimension");
            e.add_term(m, &c);
        }
        e
    }

    pub(crate) fn generator_monomial(alg: &Algebra, i: usize) -> Monomial {
        Monomial::generator(alg.dim(), i)
    }

    pub(crate) fn unit_monomial(alg: &Algebra) -> Monomial {
        Monomial::unit(alg.dim())
    }

    pub fn add_term(&mut self, m: Monomial, c: &Scalar) {
        add_into(&mut self.terms, m, c);
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Filtration degree; the zero element has degree 0.
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn coefficient(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    /// Terms in canonical (graded lexicographic) order.
    pub fn sorted_terms(&self) -> Vec<(&Monomial, &Scalar)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| a.0.grlex_cmp(b.0));
        v
    }

    pub fn scale(&self, s: &Scalar) -> EAElement {
        if s.is_zero() {
            return EAElement::zero(&self.alg);
        }
        let terms = self.terms.iter().map(|(m, c)| (m.clone(), c * s)).filter(|(_, c)| !c.is_zero()).collect();
        EAElement { alg: self.alg.clone(), terms }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coefficients(
        &self,
        mut f: impl FnMut(&Scalar) -> Result<Scalar, ScalarError>,
    ) -> Result<EAElement, ScalarError> {
        let mut out = EAElement::zero(&self.alg);
        for (m, c) in &self.terms {
            out.add_term(m.clone(), &f(c)?);
        }
        Ok(out)
    }

    pub fn substitute(&self, p: Param, value: &Scalar) -> Result<EAElement, ScalarError> {
        self.map_coefficients(|c| c.substitute(p, value))
    }

    /// Separately built algebras with identical tables are interchangeable.
    fn same_algebra(&self, other: &EAElement) -> bool {
        self.alg.id() == other.alg.id() || self.alg.same_table(&other.alg)
    }

    fn check_same(&self, other: &EAElement) -> Result<(), UeaError> {
        if !self.same_algebra(other) {
            return Err(UeaError::MixedAlgebra(self.alg.name().to_string(), other.alg.name().to_string()));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &EAElement) -> Result<EAElement, UeaError> {
        self.check_same(other)?;
        let (big, small) = if self.len() >= other.len() { (self, other) } else { (other, self) };
        let mut out = big.clone();
        for (m, c) in &small.terms {
            out.add_term(m.clone(), c);
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &EAElement) -> Result<EAElement, UeaError> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), &-c);
        }
        Ok(out)
    }

    /// PBW normal form of the product `self * other`.
    pub fn try_mul(&self, other: &EAElement) -> Result<EAElement, UeaError> {
        self.check_same(other)?;
        let alg = &self.alg;
        let mut out = EAElement::zero(alg);
        if self.is_zero() || other.is_zero() {
            return Ok(out);
        }
        let right: Vec<(Monomial, Scalar)> = other.terms.iter().map(|(m, c)| (m.clone(), c.clone())).collect();
        for (m1, c1) in &self.terms {
            let word = m1.word();
            let mut acc: FnvHashMap<Monomial, Scalar> = FnvHashMap::default();
            for (m2, c2) in &right {
                add_into(&mut acc, m2.clone(), c2);
            }
            for &g in word.iter().rev() {
                let mut next: FnvHashMap<Monomial, Scalar> = FnvHashMap::default();
                for (m, c) in &acc {
                    for (mm, cc) in left_mul(alg, g, m).iter() {
                        add_into(&mut next, mm.clone(), &(c * cc));
                    }
                }
                acc = next;
            }
            for (m, c) in acc {
                out.add_term(m, &(&c * c1));
            }
        }
        Ok(out)
    }

    pub fn commutator(&self, other: &EAElement) -> Result<EAElement, UeaError> {
        self.try_mul(other)?.try_sub(&other.try_mul(self)?)
    }

    pub fn anticommutator(&self, other: &EAElement) -> Result<EAElement, UeaError> {
        self.try_mul(other)?.try_add(&other.try_mul(self)?)
    }

    /// `(abc + cab + bca + acb + bac + cba) / 6`.
    pub fn sym3(a: &EAElement, b: &EAElement, c: &EAElement) -> Result<EAElement, UeaError> {
        a.check_same(b)?;
        a.check_same(c)?;
        let ab = a.try_mul(b)?;
        let ba = b.try_mul(a)?;
        let ca = c.try_mul(a)?;
        let ac = a.try_mul(c)?;
        let sum = ab
            .try_mul(c)?
            .try_add(&c.try_mul(&ab)?)?
            .try_add(&b.try_mul(&ca)?)?
            .try_add(&ac.try_mul(b)?)?
            .try_add(&ba.try_mul(c)?)?
            .try_add(&c.try_mul(&ba)?)?;
        Ok(sum.scale(&Scalar::from_ratio(1, 6)))
    }

    pub fn pow(&self, e: u32) -> EAElement {
        let mut acc = EAElement::one(&self.alg);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// `X_g * m` in PBW form, memoized per algebra.
fn left_mul(alg: &Algebra, g: usize, m: &Monomial) -> Product {
    if m.first().is_none_or(|f| g <= f) {
        let mut out = m.clone();
        out.0[g] += 1;
        return Arc::from(vec![(out, Scalar::one())]);
    }
    let key = (g as u16, m.clone());
    if let Some(p) = alg.pbw.left.lock().unwrap().get(&key) {
        return p.clone();
    }
    // m = X_i m' with i < g:  X_g X_i m' = X_i (X_g m') + [X_g, X_i] m'
    let i = m.first().unwrap();
    let mut rest = m.clone();
    rest.0[i] -= 1;
    let mut acc: FnvHashMap<Monomial, Scalar> = FnvHashMap::default();
    for (t, c) in left_mul(alg, g, &rest).iter() {
        for (tt, cc) in left_mul(alg, i, t).iter() {
            add_into(&mut acc, tt.clone(), &(c * cc));
        }
    }
    // [X_g, X_i] = -[X_i, X_g]
    let br = alg.bracket_ref(i, g);
    for (k, c) in &br.terms {
        let neg = -c;
        for (tt, cc) in left_mul(alg, *k, &rest).iter() {
            add_into(&mut acc, tt.clone(), &(&neg * cc));
        }
    }
    if !br.constant.is_zero() {
        add_into(&mut acc, rest.clone(), &-&br.constant);
    }
    let product: Product = acc.into_iter().collect::<Vec<_>>().into();
    alg.pbw.left.lock().unwrap().insert(key, product.clone());
    product
}

impl fmt::Display for EAElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let labels = self.alg.labels();
        for (idx, (m, c)) in self.sorted_terms().into_iter().enumerate() {
            fmt_sum_term(c, idx == 0, m.degree() > 0, f, |f| m.fmt_with(labels, f))?;
        }
        Ok(())
    }
}

impl Add for &EAElement {
    type Output = EAElement;
    /// Panics on operands from different algebras; see [`EAElement::try_add`].
    fn add(self, o: &EAElement) -> EAElement {
        self.try_add(o).expect("EAElement addition")
    }
}

impl Sub for &EAElement {
    type Output = EAElement;
    fn sub(self, o: &EAElement) -> EAElement {
        self.try_sub(o).expect("EAElement subtraction")
    }
}

impl Mul for &EAElement {
    type Output = EAElement;
    fn mul(self, o: &EAElement) -> EAElement {
        self.try_mul(o).expect("EAElement product")
    }
}

impl Neg for &EAElement {
    type Output = EAElement;
    fn neg(self) -> EAElement {
        self.scale(&Scalar::from_int(-1))
    }
}

macro_rules! owned_ops {
    ($($tr:ident $f:ident),*) => {$(
        impl $tr for EAElement {
            type Output = EAElement;
            fn $f(self, o: EAElement) -> EAElement {
                (&self).$f(&o)
            }
        }
    )*};
}
owned_ops!(Add add, Sub sub, Mul mul);

impl Neg for EAElement {
    type Output = EAElement;
    fn neg(self) -> EAElement {
        -&self
    }
}

/// Result of [`commutant_check`].
#[derive(Clone, Debug)]
pub struct CommutantReport {
    pub holds: bool,
    /// `(generator index, [p, X_g])` for every failing generator.
    pub residuals: Vec<(usize, EAElement)>,
}

/// Checks `[p, X_g] = 0` for every listed generator.
pub fn commutant_check(p: &EAElement, gens: &[usize]) -> Result<CommutantReport, UeaError> {
    let alg = p.algebra();
    let mut residuals = Vec::new();
    for &g in gens {
        if g >= alg.dim() {
            return Err(UeaError::BadGenerator(g));
        }
        let r = p.commutator(&EAElement::generator(alg, g))?;
        if !r.is_zero() {
            residuals.push((g, r));
        }
    }
    Ok(CommutantReport { holds: residuals.is_empty(), residuals })
}

fn require_su3(alg: &Algebra) -> Result<(), UeaError> {
    let reference = crate::lie::su3();
    let same = alg.dim() == 8 && (0..8).all(|i| (0..8).all(|j| alg.bracket(i, j) == reference.bracket(i, j)));
    if same {
        Ok(())
    } else {
        Err(UeaError::Unsupported(alg.name().to_string(), "expected the su3 table".into()))
    }
}

pub(crate) const CASIMIR2_SRC: &str = "-2/3*(X1^2 + X2*X1 + X2^2) - 1/2*(X3^2 + X4^2 + X5^2 + X6^2 + X7^2 + X8^2)";

pub(crate) const CASIMIR3_SRC: &str = "(X8*X6 + X7*X5)*X4 + (X8*X5 - X7*X6)*X3 \
    + 4/27*(X1 - X2)*(2*X1 + X2)*(X1 + 2*X2) \
    + 1/6*acomm(X1 + 2*X2, X3^2 + X4^2) + 1/6*acomm(X1 - X2, X5^2 + X6^2) \
    - 1/6*acomm(2*X1 + X2, X7^2 + X8^2) - 4/3*(X1 - X2)";

/// The quadratic Casimir of su(3) in the `X1..X8` basis.
pub fn casimir2(alg: &Algebra) -> Result<EAElement, UeaError> {
    require_su3(alg)?;
    Ok(crate::dsl::eval_uea_source(alg, CASIMIR2_SRC).expect("built-in Casimir source"))
}

/// The cubic Casimir of su(3) in the `X1..X8` basis.
pub fn casimir3(alg: &Algebra) -> Result<EAElement, UeaError> {
    require_su3(alg)?;
    Ok(crate::dsl::eval_uea_source(alg, CASIMIR3_SRC).expect("built-in Casimir source"))
}
