//! Exact coefficients: polynomials in the formal parameters `a1, a2, a3, hbar, R`
//! over the Gaussian rationals.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

pub type Rational = BigRational;

/// Number of formal parameters.
pub const NPARAMS: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Param {
    A1,
    A2,
    A3,
    Hbar,
    R,
}

impl Param {
    pub const ALL: [Param; NPARAMS] = [Param::A1, Param::A2, Param::A3, Param::Hbar, Param::R];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn name(self) -> &'static str {
        match self {
            Param::A1 => "a1",
            Param::A2 => "a2",
            Param::A3 => "a3",
            Param::Hbar => "hbar",
            Param::R => "R",
        }
    }

    pub fn from_name(name: &str) -> Option<Param> {
        Param::ALL.into_iter().find(|p| p.name() == name)
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ScalarError {
    #[error("substitution cycle: value for {0} mentions {0}")]
    SubstitutionCycle(Param),
    #[error("division by zero")]
    DivisionByZero,
    #[error("{dividend} is not divisible by {divisor}")]
    NotDivisible { dividend: String, divisor: String },
    #[error("cannot parse scalar {text:?}: {reason}")]
    Parse { text: String, reason: String },
}

/// A Gaussian rational `re + im*i`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Gauss {
    pub re: Rational,
    pub im: Rational,
}

impl Gauss {
    pub fn new(re: Rational, im: Rational) -> Self {
        Gauss { re, im }
    }

    pub fn zero() -> Self {
        Gauss { re: Rational::zero(), im: Rational::zero() }
    }

    pub fn one() -> Self {
        Gauss::from_int(1)
    }

    pub fn i() -> Self {
        Gauss { re: Rational::zero(), im: Rational::one() }
    }

    pub fn from_int(n: i64) -> Self {
        Gauss { re: Rational::from_integer(BigInt::from(n)), im: Rational::zero() }
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Gauss { re: Rational::new(BigInt::from(p), BigInt::from(q)), im: Rational::zero() }
    }

    pub fn real(re: Rational) -> Self {
        Gauss { re, im: Rational::zero() }
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.im.is_zero() && self.re.is_one()
    }

    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    pub fn conj(&self) -> Self {
        Gauss { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn inv(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        if self.im.is_zero() {
            return Some(Gauss::real(self.re.recip()));
        }
        let norm = &self.re * &self.re + &self.im * &self.im;
        Some(Gauss { re: &self.re / &norm, im: -(&self.im / &norm) })
    }

    /// Sign used when rendering: the leading nonzero part is negative.
    pub fn is_negative(&self) -> bool {
        if self.re.is_zero() {
            self.im.is_negative()
        } else {
            self.re.is_negative()
        }
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Gauss::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

fn fmt_rational(r: &Rational, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if r.denom().is_one() {
        write!(f, "{}", r.numer())
    } else {
        write!(f, "{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Gauss {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => fmt_rational(&self.re, f),
            (true, false) => {
                if self.im.is_one() {
                    f.write_str("i")
                } else if (-self.im.clone()).is_one() {
                    f.write_str("-i")
                } else {
                    fmt_rational(&self.im, f)?;
                    f.write_str("*i")
                }
            }
            (false, false) => {
                f.write_str("(")?;
                fmt_rational(&self.re, f)?;
                if self.im.is_negative() {
                    f.write_str(" - ")?;
                    let a = self.im.abs();
                    if !a.is_one() {
                        fmt_rational(&a, f)?;
                        f.write_str("*")?;
                    }
                } else {
                    f.write_str(" + ")?;
                    if !self.im.is_one() {
                        fmt_rational(&self.im, f)?;
                        f.write_str("*")?;
                    }
                }
                f.write_str("i)")
            }
        }
    }
}

impl Add for &Gauss {
    type Output = Gauss;
    fn add(self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re + &o.re, im: &self.im + &o.im }
    }
}

impl Sub for &Gauss {
    type Output = Gauss;
    fn sub(self, o: &Gauss) -> Gauss {
        Gauss { re: &self.re - &o.re, im: &self.im - &o.im }
    }
}

impl Mul for &Gauss {
    type Output = Gauss;
    fn mul(self, o: &Gauss) -> Gauss {
        if self.im.is_zero() && o.im.is_zero() {
            return Gauss::real(&self.re * &o.re);
        }
        Gauss { re: &self.re * &o.re - &self.im * &o.im, im: &self.re * &o.im + &self.im * &o.re }
    }
}

impl Neg for &Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss { re: -self.re.clone(), im: -self.im.clone() }
    }
}

impl Neg for Gauss {
    type Output = Gauss;
    fn neg(self) -> Gauss {
        Gauss { re: -self.re, im: -self.im }
    }
}

impl AddAssign<&Gauss> for Gauss {
    fn add_assign(&mut self, o: &Gauss) {
        self.re += &o.re;
        self.im += &o.im;
    }
}

impl SubAssign<&Gauss> for Gauss {
    fn sub_assign(&mut self, o: &Gauss) {
        self.re -= &o.re;
        self.im -= &o.im;
    }
}

/// Exponents of `(a1, a2, a3, hbar, R)`.
pub type ParamExps = [u8; NPARAMS];

fn degree(e: &ParamExps) -> u32 {
    e.iter().map(|&x| x as u32).sum()
}

/// Rendering order: total degree ascending, then `a1 < a2 < a3 < hbar < R`
/// (a term with a higher power of an earlier parameter comes first).
fn render_cmp(a: &ParamExps, b: &ParamExps) -> Ordering {
    degree(a).cmp(&degree(b)).then_with(|| b.cmp(a))
}

/// An exact coefficient: a finitely supported map from parameter monomials to
/// Gaussian rationals. Terms are kept sorted by exponent tuple with no zero
/// coefficients, so structural equality is mathematical equality.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Scalar {
    terms: Vec<(ParamExps, Gauss)>,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Scalar::from_gauss(Gauss::one())
    }

    pub fn i() -> Self {
        Scalar::from_gauss(Gauss::i())
    }

    pub fn from_int(n: i64) -> Self {
        Scalar::from_gauss(Gauss::from_int(n))
    }

    pub fn from_ratio(p: i64, q: i64) -> Self {
        Scalar::from_gauss(Gauss::from_ratio(p, q))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar::from_gauss(Gauss::real(r))
    }

    pub fn from_gauss(g: Gauss) -> Self {
        if g.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![([0; NPARAMS], g)] }
        }
    }

    pub fn param(p: Param) -> Self {
        let mut e = [0; NPARAMS];
        e[p.index()] = 1;
        Scalar { terms: vec![(e, Gauss::one())] }
    }

    pub fn monomial(exps: ParamExps, coeff: Gauss) -> Self {
        if coeff.is_zero() {
            Scalar::zero()
        } else {
            Scalar { terms: vec![(exps, coeff)] }
        }
    }

    /// Builds a scalar from arbitrary (possibly repeated, possibly zero) terms.
    pub fn from_terms(mut terms: Vec<(ParamExps, Gauss)>) -> Self {
        terms.sort_by_key(|t| t.0);
        let mut out: Vec<(ParamExps, Gauss)> = Vec::with_capacity(terms.len());
        for (e, c) in terms {
            match out.last_mut() {
                Some((le, lc)) if *le == e => *lc += &c,
                _ => out.push((e, c)),
            }
        }
        out.retain(|(_, c)| !c.is_zero());
        Scalar { terms: out }
    }

    pub fn terms(&self) -> &[(ParamExps, Gauss)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].0 == [0; NPARAMS] && self.terms[0].1.is_one()
    }

    /// The value if this scalar has no parameter dependence.
    pub fn as_constant(&self) -> Option<Gauss> {
        match self.terms.as_slice() {
            [] => Some(Gauss::zero()),
            [(e, c)] if *e == [0; NPARAMS] => Some(c.clone()),
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.as_constant().is_some()
    }

    pub fn mentions(&self, p: Param) -> bool {
        self.terms.iter().any(|(e, _)| e[p.index()] > 0)
    }

    /// Highest total parameter degree (0 for constants and zero).
    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(e, _)| degree(e)).max().unwrap_or(0)
    }

    pub fn degree_in(&self, p: Param) -> u32 {
        self.terms.iter().map(|(e, _)| e[p.index()] as u32).max().unwrap_or(0)
    }

    pub fn scale(&self, g: &Gauss) -> Scalar {
        if g.is_zero() {
            return Scalar::zero();
        }
        Scalar { terms: self.terms.iter().map(|(e, c)| (*e, c * g)).collect() }
    }

    pub fn pow(&self, e: u32) -> Scalar {
        let mut acc = Scalar::one();
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Replaces every occurrence of `p` by `value`.
    pub fn substitute(&self, p: Param, value: &Scalar) -> Result<Scalar, ScalarError> {
        if value.mentions(p) {
            return Err(ScalarError::SubstitutionCycle(p));
        }
        if !self.mentions(p) {
            return Ok(self.clone());
        }
        let mut powers = vec![Scalar::one()];
        let mut acc = Scalar::zero();
        for (e, c) in &self.terms {
            let k = e[p.index()] as usize;
            while powers.len() <= k {
                let next = powers.last().unwrap() * value;
                powers.push(next);
            }
            let mut rest = *e;
            rest[p.index()] = 0;
            acc += &(&Scalar::monomial(rest, c.clone()) * &powers[k]);
        }
        Ok(acc)
    }

    /// Evaluates at a point assigning a Gaussian rational to every parameter.
    pub fn eval(&self, point: &ParamPoint) -> Gauss {
        let mut acc = Gauss::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (k, &x) in e.iter().enumerate() {
                if x > 0 {
                    t = &t * &point.values[k].pow(x as u32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Exact division by a nonzero single-term scalar.
    pub fn div_exact(&self, divisor: &Scalar) -> Result<Scalar, ScalarError> {
        let (de, dc) = match divisor.terms.as_slice() {
            [] => return Err(ScalarError::DivisionByZero),
            [(e, c)] => (e, c),
            _ => return Err(ScalarError::NotDivisible { dividend: self.to_string(), divisor: divisor.to_string() }),
        };
        let inv = dc.inv().ok_or(ScalarError::DivisionByZero)?;
        let mut out = Vec::with_capacity(self.terms.len());
        for (e, c) in &self.terms {
            let mut q = [0u8; NPARAMS];
            for k in 0..NPARAMS {
                if e[k] < de[k] {
                    return Err(ScalarError::NotDivisible { dividend: self.to_string(), divisor: divisor.to_string() });
                }
                q[k] = e[k] - de[k];
            }
            out.push((q, c * &inv));
        }
        Ok(Scalar::from_terms(out))
    }

    /// Terms in canonical rendering order.
    pub fn sorted_terms(&self) -> Vec<&(ParamExps, Gauss)> {
        let mut v: Vec<_> = self.terms.iter().collect();
        v.sort_by(|a, b| render_cmp(&a.0, &b.0));
        v
    }
}

fn fmt_param_monomial(e: &ParamExps, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    let mut first = true;
    for p in Param::ALL {
        let k = e[p.index()];
        if k == 0 {
            continue;
        }
        if !first {
            f.write_str("*")?;
        }
        first = false;
        if k == 1 {
            write!(f, "{p}")?;
        } else {
            write!(f, "{p}^{k}")?;
        }
    }
    Ok(())
}

/// Writes `coeff * monomial` where the monomial part is produced by `body`
/// (which writes nothing for the unit monomial). `negate` renders `-coeff`.
pub(crate) fn fmt_coeff_term(
    coeff: &Gauss,
    has_body: bool,
    f: &mut fmt::Formatter<'_>,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    if !has_body {
        return write!(f, "{coeff}");
    }
    if coeff.is_one() {
        return body(f);
    }
    if (-coeff).is_one() {
        f.write_str("-")?;
        return body(f);
    }
    write!(f, "{coeff}*")?;
    body(f)
}

/// Writes one term `c * body` of a sum whose coefficients are scalars.
/// Numeric coefficients get their sign folded into the separator; others are
/// parenthesized.
pub(crate) fn fmt_sum_term(
    c: &Scalar,
    first: bool,
    has_body: bool,
    f: &mut fmt::Formatter<'_>,
    body: impl FnOnce(&mut fmt::Formatter<'_>) -> fmt::Result,
) -> fmt::Result {
    match c.as_constant() {
        Some(g) => {
            let g = if first {
                g
            } else if g.is_negative() {
                f.write_str(" - ")?;
                -g
            } else {
                f.write_str(" + ")?;
                g
            };
            fmt_coeff_term(&g, has_body, f, body)
        }
        None if first && !has_body => write!(f, "{c}"),
        None => {
            if !first {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if has_body {
                f.write_str("*")?;
                body(f)?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (idx, (e, c)) in self.sorted_terms().into_iter().enumerate() {
            let has_body = *e != [0; NPARAMS];
            let c = if idx > 0 {
                if c.is_negative() {
                    f.write_str(" - ")?;
                    -c
                } else {
                    f.write_str(" + ")?;
                    c.clone()
                }
            } else {
                c.clone()
            };
            fmt_coeff_term(&c, has_body, f, |f| fmt_param_monomial(e, f))?;
        }
        Ok(())
    }
}

impl FromStr for Scalar {
    type Err = ScalarError;

    /// Parses the canonical rendering (or any DSL expression over numbers,
    /// `i` and parameters).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        crate::dsl::parse_scalar(s).map_err(|reason| ScalarError::Parse { text: s.to_string(), reason })
    }
}

fn merge(a: &[(ParamExps, Gauss)], b: &[(ParamExps, Gauss)], negate_b: bool) -> Scalar {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut j) = (0, 0);
    while i < a.len() || j < b.len() {
        let ord = match (a.get(i), b.get(j)) {
            (Some(x), Some(y)) => x.0.cmp(&y.0),
            (Some(_), None) => Ordering::Less,
            (None, _) => Ordering::Greater,
        };
        match ord {
            Ordering::Less => {
                out.push(a[i].clone());
                i += 1;
            }
            Ordering::Greater => {
                let c = if negate_b { -&b[j].1 } else { b[j].1.clone() };
                out.push((b[j].0, c));
                j += 1;
            }
            Ordering::Equal => {
                let c = if negate_b { &a[i].1 - &b[j].1 } else { &a[i].1 + &b[j].1 };
                if !c.is_zero() {
                    out.push((a[i].0, c));
                }
                i += 1;
                j += 1;
            }
        }
    }
    Scalar { terms: out }
}

impl Add for &Scalar {
    type Output = Scalar;
    fn add(self, o: &Scalar) -> Scalar {
        merge(&self.terms, &o.terms, false)
    }
}

impl Sub for &Scalar {
    type Output = Scalar;
    fn sub(self, o: &Scalar) -> Scalar {
        merge(&self.terms, &o.terms, true)
    }
}

impl Mul for &Scalar {
    type Output = Scalar;
    fn mul(self, o: &Scalar) -> Scalar {
        if self.terms.is_empty() || o.terms.is_empty() {
            return Scalar::zero();
        }
        if let [(e, c)] = self.terms.as_slice() {
            if *e == [0; NPARAMS] {
                return o.scale(c);
            }
        }
        if let [(e, c)] = o.terms.as_slice() {
            if *e == [0; NPARAMS] {
                return self.scale(c);
            }
        }
        let mut out = Vec::with_capacity(self.terms.len() * o.terms.len());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &o.terms {
                let mut e = [0u8; NPARAMS];
                for k in 0..NPARAMS {
                    e[k] = ea[k] + eb[k];
                }
                out.push((e, ca * cb));
            }
        }
        Scalar::from_terms(out)
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar { terms: self.terms.iter().map(|(e, c)| (*e, -c)).collect() }
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -&self
    }
}

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, o: &Scalar) {
        if o.is_zero() {
            return;
        }
        *self = &*self + o;
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, o: &Scalar) {
        if o.is_zero() {
            return;
        }
        *self = &*self - o;
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Gauss> for Scalar {
    fn from(g: Gauss) -> Self {
        Scalar::from_gauss(g)
    }
}

/// An assignment of a Gaussian rational to each parameter.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParamPoint {
    pub values: [Gauss; NPARAMS],
}

impl ParamPoint {
    pub fn new(values: [Gauss; NPARAMS]) -> Self {
        ParamPoint { values }
    }

    /// Small random rationals, reproducible from `seed`. Denominators avoid 0.
    pub fn random(seed: u64) -> Self {
        use rand::{RngExt, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let values = std::array::from_fn(|_| {
            let p: i64 = rng.random_range(-9..=9);
            let q: i64 = rng.random_range(1..=7);
            Gauss::from_ratio(p, q)
        });
        ParamPoint { values }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{RngExt, SeedableRng};

    fn a(p: Param) -> Scalar {
        Scalar::param(p)
    }

    fn random_scalar(rng: &mut rand_chacha::ChaCha8Rng) -> Scalar {
        let n = rng.random_range(0..4);
        let terms = (0..n)
            .map(|_| {
                let e = std::array::from_fn(|_| rng.random_range(0..3u8));
                let c = Gauss::new(
                    Rational::from_integer(rng.random_range(-5..=5i64).into()),
                    Rational::from_integer(rng.random_range(-2..=2i64).into()),
                );
                (e, c)
            })
            .collect();
        Scalar::from_terms(terms)
    }

    #[test]
    fn additive_identity_and_like_terms() {
        let x = &a(Param::A1) * &a(Param::Hbar);
        assert_eq!(&Scalar::zero() + &x, x);
        let half_h2 = &Scalar::from_ratio(1, 2) * &a(Param::Hbar).pow(2);
        assert_eq!(&half_h2 + &half_h2, a(Param::Hbar).pow(2));
    }

    #[test]
    fn classical_cartan_value() {
        let x1 = &a(Param::A2) + &(-a(Param::A1));
        assert_eq!(x1.to_string(), "-a1 + a2");
        assert_eq!(x1, "a2 - a1".parse().unwrap());
    }

    #[test]
    fn i_squared_is_minus_one() {
        assert_eq!(&Scalar::i() * &Scalar::i(), Scalar::from_int(-1));
    }

    #[test]
    fn difference_of_squares() {
        let lhs = &(&a(Param::A2) - &a(Param::A3)) * &(&a(Param::A2) + &a(Param::A3));
        let rhs = &a(Param::A2).pow(2) - &a(Param::A3).pow(2);
        assert_eq!(lhs, rhs);
        // cross-check at random integer points
        for seed in 0..10 {
            let pt = ParamPoint::random(seed);
            let v2 = &pt.values[1];
            let v3 = &pt.values[2];
            let expect = &(v2 * v2) - &(v3 * v3);
            assert_eq!(lhs.eval(&pt), expect);
        }
    }

    #[test]
    fn multiplicative_identity() {
        let x = "3/4*a1^2*hbar - 2*i*R".parse::<Scalar>().unwrap();
        assert_eq!(&Scalar::one() * &x, x);
    }

    #[test]
    fn substitution() {
        let e = &a(Param::A1) * &a(Param::Hbar);
        assert!(e.substitute(Param::A1, &Scalar::zero()).unwrap().is_zero());
        let e = &a(Param::R).pow(2) * &a(Param::A1);
        assert_eq!(e.substitute(Param::R, &Scalar::one()).unwrap(), a(Param::A1));
        assert_eq!(e.substitute(Param::R, &a(Param::R)), Err(ScalarError::SubstitutionCycle(Param::R)));
        // hbar -> 0 keeps only the classical part
        let q = "1/4*(2*a1^2 + a2^2 + a3^2 - 3*hbar^2)".parse::<Scalar>().unwrap();
        let c = "1/4*(2*a1^2 + a2^2 + a3^2)".parse::<Scalar>().unwrap();
        assert_eq!(q.substitute(Param::Hbar, &Scalar::zero()).unwrap(), c);
    }

    #[test]
    fn exact_division() {
        let x = "2*i*hbar^2*a1 + hbar".parse::<Scalar>().unwrap();
        let ih = &Scalar::i() * &a(Param::Hbar);
        let q = x.div_exact(&ih).unwrap();
        assert_eq!(&q * &ih, x);
        assert!(Scalar::one().div_exact(&a(Param::Hbar)).is_err());
        assert_eq!(x.div_exact(&Scalar::zero()), Err(ScalarError::DivisionByZero));
    }

    #[test]
    fn rendering() {
        let cases = [
            ("0", "0"),
            ("-1/2", "-1/2"),
            ("i/2", "1/2*i"),
            ("-i", "-i"),
            ("1 + 2*i", "(1 + 2*i)"),
            ("a1^2 - 3*hbar + 1", "1 - 3*hbar + a1^2"),
            ("(1 - i)*a3*R", "(1 - i)*a3*R"),
            ("a2*a1 - a1^2", "-a1^2 + a1*a2"),
        ];
        for (src, want) in cases {
            let s: Scalar = src.parse().unwrap();
            assert_eq!(s.to_string(), want, "{src}");
            assert_eq!(want.parse::<Scalar>().unwrap(), s);
        }
    }

    #[test]
    fn ring_axioms_random() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            let (x, y, z) = (random_scalar(&mut rng), random_scalar(&mut rng), random_scalar(&mut rng));
            assert_eq!(&(&x + &y) + &z, &x + &(&y + &z));
            assert_eq!(&x * &(&y + &z), &(&x * &y) + &(&x * &z));
            assert_eq!(&x * &y, &y * &x);
            assert_eq!(&(&x * &y) * &z, &x * &(&y * &z));
        }
    }

    #[test]
    fn evaluation_is_a_homomorphism() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for seed in 0..100 {
            let pt = ParamPoint::random(seed);
            let (x, y) = (random_scalar(&mut rng), random_scalar(&mut rng));
            assert_eq!((&x + &y).eval(&pt), &x.eval(&pt) + &y.eval(&pt));
            assert_eq!((&x * &y).eval(&pt), &x.eval(&pt) * &y.eval(&pt));
        }
    }
}
