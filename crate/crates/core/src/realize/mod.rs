//! Realizations of the integrals: classical phase space with the Poisson
//! bracket, and the quantum Weyl algebra with `hbar`.

mod ideal;
mod phase;
mod poly;
mod weyl;

use std::collections::BTreeMap;
use std::sync::Mutex;

use thiserror::Error;

use crate::dsl::{self, Context, Engine, EvalError, Expr, Func};
use crate::scalar::{Param, Scalar};
use crate::uea::EAElement;

pub use ideal::{ideal_member, required_degree, ConstraintIdeal, IdealRing, Membership};
pub use phase::{poisson_bracket, PhaseElement};
pub use poly::Key;
pub use weyl::WeylElement;

#[derive(Debug, Error)]
pub enum RealizeError {
    #[error("the classical realization needs the su3 table, got {0:?}")]
    NotSu3(String),
    #[error("hbar pole: term {term} has derivative order {order} but only hbar^{power}")]
    HbarPole { term: String, order: u32, power: u32 },
    #[error("ideal: {0}")]
    Ideal(String),
}

/// A commutative or noncommutative ring the expression language can
/// evaluate in, with named variables.
pub trait Realm: Clone + Sized {
    /// Variable names in order: three positions then three momenta.
    const VARIABLES: [&'static str; 6];

    fn constant(s: Scalar) -> Self;
    fn variable(i: usize) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn scale(&self, s: &Scalar) -> Self;
    fn as_scalar(&self) -> Option<Scalar>;
    fn inverse(&self) -> Option<Self>;
    fn map_coefficients(&self, f: &mut dyn FnMut(&Scalar) -> Result<Scalar, EvalError>) -> Result<Self, EvalError>;
    fn call(f: Func, args: &[Self]) -> Result<Self, EvalError>;
}

fn map_terms(
    t: &poly::Terms,
    f: &mut dyn FnMut(&Scalar) -> Result<Scalar, EvalError>,
) -> Result<poly::Terms, EvalError> {
    let mut out = poly::Terms::zero();
    for (k, c) in &t.0 {
        out.add_term(*k, &f(c)?);
    }
    Ok(out)
}

impl Realm for PhaseElement {
    const VARIABLES: [&'static str; 6] = ["x1", "x2", "x3", "p1", "p2", "p3"];

    fn constant(s: Scalar) -> Self {
        PhaseElement::constant(s)
    }
    fn variable(i: usize) -> Self {
        if i < 3 {
            PhaseElement::x(i)
        } else {
            PhaseElement::p(i - 3)
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, s: &Scalar) -> Self {
        PhaseElement::scale(self, s)
    }
    fn as_scalar(&self) -> Option<Scalar> {
        PhaseElement::as_scalar(self)
    }
    fn inverse(&self) -> Option<Self> {
        PhaseElement::inverse(self)
    }
    fn map_coefficients(&self, f: &mut dyn FnMut(&Scalar) -> Result<Scalar, EvalError>) -> Result<Self, EvalError> {
        Ok(PhaseElement(map_terms(&self.0, f)?))
    }
    fn call(f: Func, a: &[Self]) -> Result<Self, EvalError> {
        Ok(match f {
            Func::Pb => poisson_bracket(&a[0], &a[1]),
            Func::Acomm => (&a[0] * &a[1]).scale(&Scalar::from_int(2)),
            Func::Sym3 => &(&a[0] * &a[1]) * &a[2],
            Func::Nf => a[0].clone(),
            Func::Comm => {
                return Err(EvalError::Unsupported("comm() vanishes identically in phase space; use pb()".into()))
            }
        })
    }
}

impl Realm for WeylElement {
    const VARIABLES: [&'static str; 6] = ["s1", "s2", "s3", "d1", "d2", "d3"];

    fn constant(s: Scalar) -> Self {
        WeylElement::constant(s)
    }
    fn variable(i: usize) -> Self {
        if i < 3 {
            WeylElement::s(i)
        } else {
            WeylElement::d(i - 3)
        }
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn scale(&self, s: &Scalar) -> Self {
        WeylElement::scale(self, s)
    }
    fn as_scalar(&self) -> Option<Scalar> {
        WeylElement::as_scalar(self)
    }
    fn inverse(&self) -> Option<Self> {
        WeylElement::inverse(self)
    }
    fn map_coefficients(&self, f: &mut dyn FnMut(&Scalar) -> Result<Scalar, EvalError>) -> Result<Self, EvalError> {
        Ok(WeylElement(map_terms(&self.0, f)?))
    }
    fn call(f: Func, a: &[Self]) -> Result<Self, EvalError> {
        Ok(match f {
            Func::Comm => a[0].commutator(&a[1]),
            Func::Acomm => a[0].anticommutator(&a[1]),
            Func::Sym3 => WeylElement::sym3(&a[0], &a[1], &a[2]),
            Func::Nf => a[0].clone(),
            Func::Pb => return Err(EvalError::Unsupported("pb() is classical; use comm() for operators".into())),
        })
    }
}

/// Evaluates expressions in a [`Realm`], resolving names through a
/// [`RealEnv`].
pub struct RealmEngine<'a, V: Realm> {
    env: &'a RealEnv<V>,
}

impl<V: Realm> Engine for RealmEngine<'_, V> {
    type Value = V;

    fn constant(&self, s: Scalar) -> Result<V, EvalError> {
        Ok(V::constant(s))
    }
    fn ident(&mut self, name: &str) -> Result<V, EvalError> {
        if let Some(i) = V::VARIABLES.iter().position(|v| *v == name) {
            return Ok(V::variable(i));
        }
        self.env.get(name)
    }
    fn add(&self, a: &V, b: &V) -> Result<V, EvalError> {
        Ok(a.add(b))
    }
    fn sub(&self, a: &V, b: &V) -> Result<V, EvalError> {
        Ok(a.sub(b))
    }
    fn mul(&self, a: &V, b: &V) -> Result<V, EvalError> {
        Ok(a.mul(b))
    }
    fn div(&self, a: &V, b: &V) -> Result<V, EvalError> {
        if let Some(s) = b.as_scalar() {
            if let Some(inv) = s.as_constant().and_then(|g| g.inv()) {
                return Ok(a.scale(&Scalar::from_gauss(inv)));
            }
            return a.map_coefficients(&mut |c| c.div_exact(&s).map_err(|_| EvalError::Division(s.to_string())));
        }
        let inv = b.inverse().ok_or_else(|| EvalError::Division("a non-monomial".into()))?;
        Ok(a.mul(&inv))
    }
    fn neg(&self, a: &V) -> Result<V, EvalError> {
        Ok(a.scale(&Scalar::from_int(-1)))
    }
    fn pow(&self, a: &V, n: i64) -> Result<V, EvalError> {
        let base =
            if n < 0 { a.inverse().ok_or_else(|| EvalError::Division("a non-monomial".into()))? } else { a.clone() };
        let mut acc = V::constant(Scalar::one());
        for _ in 0..n.unsigned_abs() {
            acc = acc.mul(&base);
        }
        Ok(acc)
    }
    fn call(&self, f: Func, args: &[V]) -> Result<V, EvalError> {
        V::call(f, args)
    }
}

/// Named elements of a realization, defined by source text over the
/// realm's variables and earlier names. Values are cached on first use.
pub struct RealEnv<V: Realm> {
    sources: Vec<(String, String)>,
    cache: Mutex<BTreeMap<String, V>>,
}

impl<V: Realm> RealEnv<V> {
    pub fn new() -> Self {
        RealEnv { sources: Vec::new(), cache: Mutex::default() }
    }

    pub fn with_sources(sources: &[(&str, &str)]) -> Result<Self, EvalError> {
        let mut env = RealEnv::new();
        for (n, s) in sources {
            env.define(n, s)?;
        }
        Ok(env)
    }

    pub fn define(&mut self, name: &str, src: &str) -> Result<(), EvalError> {
        if V::VARIABLES.contains(&name) || Param::from_name(name).is_some() || name == "i" {
            return Err(EvalError::Unsupported(format!("{name} cannot be redefined")));
        }
        dsl::parse(src, &self.context())?;
        self.sources.retain(|(n, _)| n != name);
        self.sources.push((name.into(), src.into()));
        self.cache.get_mut().unwrap().clear();
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.sources.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn source(&self, name: &str) -> Option<&str> {
        self.sources.iter().find(|(n, _)| n == name).map(|(_, s)| s.as_str())
    }

    pub fn context(&self) -> Context {
        Context::new(V::VARIABLES.iter().map(|v| v.to_string()).chain(self.sources.iter().map(|(n, _)| n.clone())))
            .with_laurent(true)
    }

    pub fn get(&self, name: &str) -> Result<V, EvalError> {
        if let Some(v) = self.cache.lock().unwrap().get(name) {
            return Ok(v.clone());
        }
        let src = self.source(name).ok_or_else(|| EvalError::Unknown(name.to_string()))?;
        let v = self.eval(src)?;
        self.cache.lock().unwrap().insert(name.to_string(), v.clone());
        Ok(v)
    }

    pub fn eval(&self, src: &str) -> Result<V, EvalError> {
        let e = dsl::parse(src, &self.context())?;
        self.eval_expr(&e)
    }

    pub fn eval_expr(&self, e: &Expr) -> Result<V, EvalError> {
        dsl::eval(e, &mut RealmEngine { env: self })
    }
}

impl<V: Realm> Default for RealEnv<V> {
    fn default() -> Self {
        RealEnv::new()
    }
}

/// Images of the generators in phase space.
pub const CLASSICAL_X: [(&str, &str); 8] = [
    ("X1", "a2 - a1"),
    ("X2", "a3 - a2"),
    ("X3", "x1*p2 - x2*p1"),
    ("X4", "-a2*x1/x2 - a1*x2/x1"),
    ("X5", "x1*p3 - x3*p1"),
    ("X6", "-a1*x3/x1 - a3*x1/x3"),
    ("X7", "x2*p3 - x3*p2"),
    ("X8", "-a3*x2/x3 - a2*x3/x2"),
];

const CLASSICAL: &[(&str, &str)] = &[
    ("T1", "-1/4*((x2*p3 - x3*p2)^2 + (a2*x3/x2 + a3*x2/x3)^2 + (a2 - a3)^2)"),
    ("T2", "-1/4*((x3*p1 - x1*p3)^2 + (a3*x1/x3 + a1*x3/x1)^2 + (a3 - a1)^2)"),
    ("T3", "-1/4*((x1*p2 - x2*p1)^2 + (a1*x2/x1 + a2*x1/x2)^2 + (a1 - a2)^2)"),
    ("T12", "pb(T1, T2)"),
    ("T13", "pb(T1, T3)"),
    ("T23", "pb(T2, T3)"),
    ("T121", "pb(T12, T1)"),
    ("T122", "pb(T12, T2)"),
    ("T123", "pb(T12, T3)"),
    // the flat form, with p3^2 for the printed p2^3
    ("H", "1/2*(p1^2 + p2^2 + p3^2 + a1^2/x1^2 + a2^2/x2^2 + a3^2/x3^2)"),
    // the angular-momentum form with the potential squared as in the flat form
    (
        "Hang",
        "1/2*((x1*p2 - x2*p1)^2 + (x1*p3 - x3*p1)^2 + (x2*p3 - x3*p2)^2) \
         + 1/2*(a1^2/x1^2 + a2^2/x2^2 + a3^2/x3^2)",
    ),
    ("Hsum", "-2*(T1 + T2 + T3) - 1/2*(a1^2 + a2^2 + a3^2)"),
];

const QUANTUM: &[(&str, &str)] = &[
    ("T1", "-1/4*(-hbar^2*(s2*d3 - s3*d2)^2 + (a2*s3/s2 + a3*s2/s3)^2 + (a2 - a3)^2 - hbar^2)"),
    ("T2", "-1/4*(-hbar^2*(s3*d1 - s1*d3)^2 + (a3*s1/s3 + a1*s3/s1)^2 + (a3 - a1)^2 - hbar^2)"),
    ("T3", "-1/4*(-hbar^2*(s1*d2 - s2*d1)^2 + (a1*s2/s1 + a2*s1/s2)^2 + (a1 - a2)^2 - hbar^2)"),
    ("T12", "comm(T1, T2)/(i*hbar)"),
    ("T13", "comm(T1, T3)/(i*hbar)"),
    ("T23", "comm(T2, T3)/(i*hbar)"),
    ("T121", "comm(T12, T1)/(i*hbar)"),
    ("T122", "comm(T12, T2)/(i*hbar)"),
    ("T123", "comm(T12, T3)/(i*hbar)"),
    ("H", "-2*(T1 + T2 + T3)"),
];

/// Phase-space integrals `T1..T3`, their brackets, `H` and the images
/// `X1..X8` of the generators.
pub fn classical_env() -> RealEnv<PhaseElement> {
    let mut all: Vec<(&str, &str)> = CLASSICAL_X.to_vec();
    all.extend_from_slice(CLASSICAL);
    RealEnv::with_sources(&all).expect("built-in classical sources")
}

/// Operator integrals `T1..T3` and their normalized commutators.
pub fn quantum_env() -> RealEnv<WeylElement> {
    RealEnv::with_sources(QUANTUM).expect("built-in quantum sources")
}

/// `T_l` of the classical model (`l` in 1..=3).
pub fn classical_t(l: usize) -> PhaseElement {
    classical_env().get(&format!("T{l}")).expect("classical T")
}

/// `T_l` of the quantum model (`l` in 1..=3), normal ordered.
pub fn quantum_t(l: usize) -> WeylElement {
    quantum_env().get(&format!("T{l}")).expect("quantum T")
}

/// The image of an su(3) element under the phase-space realization, with
/// products read commutatively.
pub fn classical_realize(p: &EAElement) -> Result<PhaseElement, RealizeError> {
    let alg = p.algebra();
    if !alg.same_table(&crate::lie::su3()) {
        return Err(RealizeError::NotSu3(alg.name().to_string()));
    }
    let env = RealEnv::<PhaseElement>::with_sources(&CLASSICAL_X).expect("realization sources");
    let images: Vec<PhaseElement> = (1..=8).map(|k| env.get(&format!("X{k}")).expect("image")).collect();
    let mut powers: Vec<Vec<PhaseElement>> = images.iter().map(|x| vec![PhaseElement::one(), x.clone()]).collect();
    let mut out = PhaseElement::zero();
    for (m, c) in p.terms() {
        let mut prod = PhaseElement::constant(c.clone());
        for (g, &e) in m.exponents().iter().enumerate() {
            while powers[g].len() <= e as usize {
                let next = &powers[g][powers[g].len() - 1] * &images[g];
                powers[g].push(next);
            }
            if e > 0 {
                prod = &prod * &powers[g][e as usize];
            }
        }
        out = &out + &prod;
    }
    Ok(out)
}

/// The classical limit of an operator whose derivatives each come with a
/// factor of `hbar`: every `hbar^n d^b` with `n = |b|` becomes
/// `i^|b| p^b` (so `-i hbar d` plays the role of `p`), terms with more
/// `hbar` than derivatives vanish, and fewer is a pole.
pub fn hbar_limit(e: &WeylElement) -> Result<PhaseElement, RealizeError> {
    let h = Param::Hbar.index();
    let mut out = PhaseElement::zero();
    for (k, c) in e.terms() {
        let order = k.r_degree();
        let mut kept = Vec::new();
        for (exps, g) in c.terms() {
            let power = exps[h] as u32;
            if power < order {
                return Err(RealizeError::HbarPole {
                    term: WeylElement::from_terms([(*k, c.clone())]).to_string(),
                    order,
                    power,
                });
            }
            if power == order {
                let mut e2 = *exps;
                e2[h] = 0;
                kept.push((e2, g.clone()));
            }
        }
        let coeff = Scalar::from_terms(kept).scale(&crate::scalar::Gauss::i().pow(order));
        out = &out + &PhaseElement::from_terms([(*k, coeff)]);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{su3, ExprEnv};

    #[test]
    fn realized_integrals_match_the_model() {
        let g = su3();
        let env = ExprEnv::standard(&g).unwrap();
        for l in 1..=3 {
            let t = env.get(&format!("T{l}")).unwrap();
            assert_eq!(classical_realize(&t).unwrap(), classical_t(l), "T{l}");
        }
        let x1 = classical_realize(&EAElement::generator(&g, 0)).unwrap();
        assert_eq!(x1.to_string(), "-a1 + a2");
        assert!(classical_realize(&EAElement::zero(&g)).unwrap().is_zero());
    }

    #[test]
    fn quantum_basics() {
        let q = quantum_env();
        assert!(q.eval("comm(T1, T1)").unwrap().is_zero());
        assert!(q.eval("T13 + T12").unwrap().is_zero());
        assert!(q.eval("T23 - T12").unwrap().is_zero());
        for l in 1..=3 {
            let t = quantum_t(l);
            assert_eq!(hbar_limit(&t).unwrap(), classical_t(l));
            assert!(hbar_limit(&t.scale(&Scalar::param(Param::Hbar))).unwrap().is_zero());
        }
    }

    #[test]
    fn limit_of_commutator_is_poisson_bracket() {
        let q = quantum_env();
        let c = classical_env();
        assert_eq!(hbar_limit(&q.get("T12").unwrap()).unwrap(), c.get("T12").unwrap());
        let pole = WeylElement::d(0);
        assert!(matches!(hbar_limit(&pole), Err(RealizeError::HbarPole { order: 1, power: 0, .. })));
    }

    #[test]
    fn hamiltonian_on_the_sphere() {
        let c = classical_env();
        let diff = c.eval("H - Hsum").unwrap();
        assert!(!diff.is_zero());
        let ideal = ConstraintIdeal::sphere_momentum();
        assert!(ideal_member(&diff, &ideal, 10).unwrap().is_member());
    }
}
