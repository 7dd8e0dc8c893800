//! Evaluation of parsed expressions against an interchangeable backend.

use std::collections::{BTreeMap, BTreeSet};

use thiserror::Error;

use super::{parse, Context, Diagnostic, Expr, Func};
use crate::lie::{Algebra, ExprEnv};
use crate::scalar::{Param, ParamPoint, Scalar, ScalarError};
use crate::uea::rep::{Matrix, Representation};
use crate::uea::{EAElement, UeaError};

#[derive(Debug, Error)]
pub enum EvalError {
    #[error("unknown name {0}")]
    Unknown(String),
    #[error("{0}")]
    Unsupported(String),
    #[error("cannot divide by {0}")]
    Division(String),
    #[error("cyclic definition of {0}")]
    Cycle(String),
    #[error(transparent)]
    Parse(#[from] Diagnostic),
    #[error(transparent)]
    Uea(#[from] UeaError),
    #[error(transparent)]
    Scalar(#[from] ScalarError),
}

/// A value domain the evaluator can compute in.
pub trait Engine {
    type Value: Clone;

    fn constant(&self, s: Scalar) -> Result<Self::Value, EvalError>;
    /// Anything that is not a parameter.
    fn ident(&mut self, name: &str) -> Result<Self::Value, EvalError>;
    fn add(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, EvalError>;
    fn sub(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, EvalError>;
    fn mul(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, EvalError>;
    fn div(&self, a: &Self::Value, b: &Self::Value) -> Result<Self::Value, EvalError>;
    fn neg(&self, a: &Self::Value) -> Result<Self::Value, EvalError>;
    fn pow(&self, a: &Self::Value, n: i64) -> Result<Self::Value, EvalError>;
    fn call(&self, f: Func, args: &[Self::Value]) -> Result<Self::Value, EvalError>;
}

pub fn eval<E: Engine>(e: &Expr, engine: &mut E) -> Result<E::Value, EvalError> {
    Ok(match e {
        Expr::Int(n) => engine.constant(Scalar::from_rational(n.clone().into()))?,
        Expr::Imag => engine.constant(Scalar::i())?,
        Expr::Ident(name) => match Param::from_name(name) {
            Some(p) => engine.constant(Scalar::param(p))?,
            None => engine.ident(name)?,
        },
        Expr::Neg(a) => {
            let a = eval(a, engine)?;
            engine.neg(&a)?
        }
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b) => {
            let x = eval(a, engine)?;
            let y = eval(b, engine)?;
            match e {
                Expr::Add(..) => engine.add(&x, &y)?,
                Expr::Sub(..) => engine.sub(&x, &y)?,
                Expr::Mul(..) => engine.mul(&x, &y)?,
                _ => engine.div(&x, &y)?,
            }
        }
        Expr::Pow(a, n) => {
            let a = eval(a, engine)?;
            engine.pow(&a, *n)?
        }
        Expr::Call(f, args) => {
            let vals = args.iter().map(|a| eval(a, engine)).collect::<Result<Vec<_>, _>>()?;
            engine.call(*f, &vals)?
        }
    })
}

fn no_calls<T>(what: &str, f: Func) -> Result<T, EvalError> {
    Err(EvalError::Unsupported(format!("{}() is not available for {what}", f.name())))
}

/// Parameters, numbers and `i` only.
pub struct ScalarEngine;

impl Engine for ScalarEngine {
    type Value = Scalar;

    fn constant(&self, s: Scalar) -> Result<Scalar, EvalError> {
        Ok(s)
    }
    fn ident(&mut self, name: &str) -> Result<Scalar, EvalError> {
        Err(EvalError::Unknown(name.to_string()))
    }
    fn add(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, EvalError> {
        Ok(a + b)
    }
    fn sub(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, EvalError> {
        Ok(a - b)
    }
    fn mul(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, EvalError> {
        Ok(a * b)
    }
    fn div(&self, a: &Scalar, b: &Scalar) -> Result<Scalar, EvalError> {
        a.div_exact(b).map_err(|_| EvalError::Division(b.to_string()))
    }
    fn neg(&self, a: &Scalar) -> Result<Scalar, EvalError> {
        Ok(-a)
    }
    fn pow(&self, a: &Scalar, n: i64) -> Result<Scalar, EvalError> {
        if n >= 0 {
            return Ok(a.pow(n as u32));
        }
        let inv = a.as_constant().and_then(|g| g.inv()).ok_or_else(|| EvalError::Division(a.to_string()))?;
        Ok(Scalar::from_gauss(inv).pow((-n) as u32))
    }
    fn call(&self, f: Func, _: &[Scalar]) -> Result<Scalar, EvalError> {
        no_calls("scalars", f)
    }
}

/// Parses a scalar expression such as `-1/2*i*a1 + hbar^2`.
pub fn parse_scalar(s: &str) -> Result<Scalar, String> {
    let e = parse(s, &Context::scalars()).map_err(|d| d.to_string())?;
    eval(&e, &mut ScalarEngine).map_err(|e| e.to_string())
}

/// Elements of the enveloping algebra, with named bindings.
pub struct UeaEngine<'a> {
    alg: Algebra,
    env: Option<&'a ExprEnv>,
}

impl<'a> UeaEngine<'a> {
    pub fn new(alg: &Algebra, env: Option<&'a ExprEnv>) -> Self {
        UeaEngine { alg: alg.clone(), env }
    }
}

/// Divides every coefficient by a scalar-valued element.
fn divide_by_scalar(a: &EAElement, b: &EAElement) -> Result<EAElement, EvalError> {
    let d = match b.sorted_terms().as_slice() {
        [(m, c)] if m.degree() == 0 => (*c).clone(),
        _ => return Err(EvalError::Division(b.to_string())),
    };
    if let Some(inv) = d.as_constant().and_then(|g| g.inv()) {
        return Ok(a.scale(&Scalar::from_gauss(inv)));
    }
    let mut out = EAElement::zero(a.algebra());
    for (m, c) in a.terms() {
        let q = c.div_exact(&d).map_err(|_| EvalError::Division(b.to_string()))?;
        out.add_term(m.clone(), &q);
    }
    Ok(out)
}

impl Engine for UeaEngine<'_> {
    type Value = EAElement;

    fn constant(&self, s: Scalar) -> Result<EAElement, EvalError> {
        Ok(EAElement::scalar(&self.alg, s))
    }
    fn ident(&mut self, name: &str) -> Result<EAElement, EvalError> {
        if let Some(i) = self.alg.index_of(name) {
            return Ok(EAElement::generator(&self.alg, i));
        }
        match self.env {
            Some(env) => env.get(name),
            None => Err(EvalError::Unknown(name.to_string())),
        }
    }
    fn add(&self, a: &EAElement, b: &EAElement) -> Result<EAElement, EvalError> {
        Ok(a.try_add(b)?)
    }
    fn sub(&self, a: &EAElement, b: &EAElement) -> Result<EAElement, EvalError> {
        Ok(a.try_sub(b)?)
    }
    fn mul(&self, a: &EAElement, b: &EAElement) -> Result<EAElement, EvalError> {
        Ok(a.try_mul(b)?)
    }
    fn div(&self, a: &EAElement, b: &EAElement) -> Result<EAElement, EvalError> {
        divide_by_scalar(a, b)
    }
    fn neg(&self, a: &EAElement) -> Result<EAElement, EvalError> {
        Ok(-a)
    }
    fn pow(&self, a: &EAElement, n: i64) -> Result<EAElement, EvalError> {
        if n < 0 {
            return Err(EvalError::Unsupported("negative powers do not exist in the enveloping algebra".into()));
        }
        Ok(a.pow(n as u32))
    }
    fn call(&self, f: Func, args: &[EAElement]) -> Result<EAElement, EvalError> {
        Ok(match f {
            Func::Comm => args[0].commutator(&args[1])?,
            Func::Acomm => args[0].anticommutator(&args[1])?,
            Func::Sym3 => EAElement::sym3(&args[0], &args[1], &args[2])?,
            Func::Nf => args[0].clone(),
            Func::Pb => return no_calls("the enveloping algebra (use the classical engine)", f),
        })
    }
}

/// Evaluates `src` over the generators of `alg` alone.
pub fn eval_uea_source(alg: &Algebra, src: &str) -> Result<EAElement, EvalError> {
    let ctx = Context::new(alg.labels().iter().cloned());
    let e = parse(src, &ctx)?;
    eval(&e, &mut UeaEngine::new(alg, None))
}

/// Matrices of a representation at a fixed parameter point. Named elements
/// are evaluated from their source text directly in matrices, so nothing
/// passes through the PBW engine.
pub struct MatrixEngine<'a> {
    rep: &'a Representation,
    point: ParamPoint,
    sources: BTreeMap<String, String>,
    cache: BTreeMap<String, Matrix>,
    active: BTreeSet<String>,
    primes: bool,
}

impl<'a> MatrixEngine<'a> {
    pub fn new(rep: &'a Representation, point: ParamPoint, sources: &[(String, String)]) -> Self {
        MatrixEngine {
            rep,
            point,
            sources: sources.iter().cloned().collect(),
            cache: BTreeMap::new(),
            active: BTreeSet::new(),
            primes: false,
        }
    }

    pub fn with_primes(mut self, on: bool) -> Self {
        self.primes = on;
        self
    }

    pub fn context(&self) -> Context {
        let alg = self.rep.algebra();
        Context::new(alg.labels().iter().cloned().chain(self.sources.keys().cloned())).with_primes(self.primes)
    }

    fn identity(&self) -> Matrix {
        Matrix::identity(self.rep.dim())
    }
}

impl Engine for MatrixEngine<'_> {
    type Value = Matrix;

    fn constant(&self, s: Scalar) -> Result<Matrix, EvalError> {
        Ok(self.identity().scale(&s.eval(&self.point)))
    }
    fn ident(&mut self, name: &str) -> Result<Matrix, EvalError> {
        if let Some(i) = self.rep.algebra().index_of(name) {
            return Ok(self.rep.generator(i).clone());
        }
        if let Some(m) = self.cache.get(name) {
            return Ok(m.clone());
        }
        let src = self.sources.get(name).cloned().ok_or_else(|| EvalError::Unknown(name.to_string()))?;
        if !self.active.insert(name.to_string()) {
            return Err(EvalError::Cycle(name.to_string()));
        }
        let e = parse(&src, &self.context())?;
        let m = eval(&e, self)?;
        self.active.remove(name);
        self.cache.insert(name.to_string(), m.clone());
        Ok(m)
    }
    fn add(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, EvalError> {
        Ok(a + b)
    }
    fn sub(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, EvalError> {
        Ok(a - b)
    }
    fn mul(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, EvalError> {
        Ok(a * b)
    }
    fn div(&self, a: &Matrix, b: &Matrix) -> Result<Matrix, EvalError> {
        let inv = b
            .as_scalar_multiple()
            .and_then(|g| g.inv())
            .ok_or_else(|| EvalError::Division("a non-scalar matrix".into()))?;
        Ok(a.scale(&inv))
    }
    fn neg(&self, a: &Matrix) -> Result<Matrix, EvalError> {
        Ok(a.scale(&crate::scalar::Gauss::from_int(-1)))
    }
    fn pow(&self, a: &Matrix, n: i64) -> Result<Matrix, EvalError> {
        if n < 0 {
            return Err(EvalError::Unsupported("negative matrix powers".into()));
        }
        let mut acc = self.identity();
        for _ in 0..n {
            acc = &acc * a;
        }
        Ok(acc)
    }
    fn call(&self, f: Func, args: &[Matrix]) -> Result<Matrix, EvalError> {
        Ok(match f {
            Func::Comm => args[0].commutator(&args[1]),
            Func::Acomm => &(&args[0] * &args[1]) + &(&args[1] * &args[0]),
            Func::Sym3 => {
                let (a, b, c) = (&args[0], &args[1], &args[2]);
                let mut s = Matrix::zero(a.dim());
                for (x, y, z) in [(a, b, c), (a, c, b), (b, a, c), (b, c, a), (c, a, b), (c, b, a)] {
                    s = &s + &(&(x * y) * z);
                }
                s.scale(&crate::scalar::Gauss::from_ratio(1, 6))
            }
            Func::Nf => args[0].clone(),
            Func::Pb => return no_calls("matrices", f),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::su3;

    #[test]
    fn scalar_round_trip() {
        for text in ["0", "-3/4", "i", "-i", "(1 + 2*i)", "-a1 + a2", "1/2*i*hbar^2", "a1*a2 - 3*R"] {
            let s: Scalar = text.parse().unwrap();
            let again: Scalar = s.to_string().parse().unwrap();
            assert_eq!(s, again, "{text}");
        }
        assert_eq!(parse_scalar("a1/2").unwrap().to_string(), "1/2*a1");
        assert!(parse_scalar("X1").is_err());
        assert!(parse_scalar("1/a1").is_err());
    }

    #[test]
    fn uea_source_matches_products() {
        let g = su3();
        let e = eval_uea_source(&g, "X4*X3").unwrap();
        assert_eq!(e.to_string(), "X3*X4 - 2*X1");
        let e = eval_uea_source(&g, "comm(X5, X6)").unwrap();
        assert_eq!(e.to_string(), "2*X1 + 2*X2");
        let e = eval_uea_source(&g, "(2*X1 + 4*X2)/2").unwrap();
        assert_eq!(e.to_string(), "X1 + 2*X2");
        assert!(eval_uea_source(&g, "X1/X2").is_err());
        assert!(matches!(eval_uea_source(&g, "pb(X1, X2)"), Err(EvalError::Unsupported(_))));
    }
}
