//! Named elements of the enveloping algebra, defined by expression source.

use std::collections::BTreeMap;
use std::sync::Mutex;

use super::{Algebra, LieError};
use crate::dsl::{self, Context, EvalError, UeaEngine};
use crate::uea::EAElement;

/// Which family of definitions an environment uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum EnvKind {
    /// `T_i` with Cartan terms; the cubic algebra.
    Standard,
    /// `T_i` without Cartan terms; the quartic algebra.
    AppendixA,
    /// Integrals inside the contracted algebra.
    Contracted,
}

impl EnvKind {
    pub fn name(self) -> &'static str {
        match self {
            EnvKind::Standard => "standard",
            EnvKind::AppendixA => "appendixA",
            EnvKind::Contracted => "contracted",
        }
    }

    pub fn from_name(s: &str) -> Option<EnvKind> {
        [EnvKind::Standard, EnvKind::AppendixA, EnvKind::Contracted].into_iter().find(|k| k.name() == s)
    }
}

const LADDERS: &[(&str, &str)] = &[
    ("A", "-1/2*i*X1"),
    ("C", "-1/2*i*X2"),
    ("B", "A + C"),
    ("Ap", "1/2*(X3 - i*X4)"),
    ("Am", "1/2*(-X3 - i*X4)"),
    ("Bp", "1/2*(X5 - i*X6)"),
    ("Bm", "1/2*(-X5 - i*X6)"),
    ("Cp", "1/2*(X7 - i*X8)"),
    ("Cm", "1/2*(-X7 - i*X8)"),
];

const CARTAN_T: &[(&str, &str)] = &[
    ("T1", "-1/4*(X7^2 + X8^2 + X2^2)"),
    ("T2", "-1/4*(X5^2 + X6^2 + X1^2 + 2*X1*X2 + X2^2)"),
    ("T3", "-1/4*(X3^2 + X4^2 + X1^2)"),
];

const BARE_T: &[(&str, &str)] =
    &[("T1", "-1/4*(X7^2 + X8^2)"), ("T2", "-1/4*(X5^2 + X6^2)"), ("T3", "-1/4*(X3^2 + X4^2)")];

const DERIVED_T: &[(&str, &str)] = &[
    ("T12", "comm(T1, T2)"),
    ("T13", "comm(T1, T3)"),
    ("T23", "comm(T2, T3)"),
    ("T121", "comm(T12, T1)"),
    ("T122", "comm(T12, T2)"),
    ("T123", "comm(T12, T3)"),
];

const CASIMIRS: &[(&str, &str)] = &[
    ("C2", crate::uea::CASIMIR2_SRC),
    ("C3", crate::uea::CASIMIR3_SRC),
    ("C3core", "(X8*X6 + X7*X5)*X4 + (X8*X5 - X7*X6)*X3"),
];

const SU3_EXTRA: &[(&str, &str)] = &[
    ("H", "-2*(T1 + T2 + T3)"),
    ("Y1", "Ap*Cp*Bm"),
    ("Y2", "Bp*Cm*Am"),
    // the Casimir of the reduced algebra exactly as printed, including the
    // stray X3 inside the bracket multiplying {T1, T2}
    (
        "K",
        "T12^2 - 2*acomm(T1^2, T2) - 2*acomm(T2^2, T1) + 4*(T1^2 + T2^2) \
         + (4 + C2 - 1/3*(X1^2 + X1*X2 + X3))*acomm(T1, T2) \
         - (2*C2 + 1/2*(X1 + X2)*C3 - 1/3*(3*X1^2 + 2*X1*X2 + X2^2) - 1/6*(X1^2 - X2^2)*C2 \
            - 1/108*(X1 + X2)*(X1 - X2)^3)*(T1 + 1) \
         - (2*C2 + 1/2*X2*C3 - 1/3*(2*X1^2 + X2^2) + 1/6*X2*(2*X1 + X2)*C2 \
            + 1/108*X2*(2*X1 + X2)^3)*(T2 - 1)",
    ),
    // the same with X3 read as X2^2, completing X1^2 + X1*X2 + X2^2
    (
        "Kc",
        "T12^2 - 2*acomm(T1^2, T2) - 2*acomm(T2^2, T1) + 4*(T1^2 + T2^2) \
         + (4 + C2 - 1/3*(X1^2 + X1*X2 + X2^2))*acomm(T1, T2) \
         - (2*C2 + 1/2*(X1 + X2)*C3 - 1/3*(3*X1^2 + 2*X1*X2 + X2^2) - 1/6*(X1^2 - X2^2)*C2 \
            - 1/108*(X1 + X2)*(X1 - X2)^3)*(T1 + 1) \
         - (2*C2 + 1/2*X2*C3 - 1/3*(2*X1^2 + X2^2) + 1/6*X2*(2*X1 + X2)*C2 \
            + 1/108*X2*(2*X1 + X2)^3)*(T2 - 1)",
    ),
    (
        "Kz",
        "-1/16*C3^2 - 1/36*C2^2*((X1 + 2*X2)^2 + 9) - 1/12*C3*C2*(X1 + 2*X2) \
         - 1/216*C3*(72*(2*X1 + X2) + (X1 + 2*X2)*(4*X1^2 - 11*X2*X1 - 11*X2^2)) \
         - 1/648*C2*(X1 - X2)*((2*X1 + X2)*(4*X1^2 + 7*X2*X1 + 7*X2^2) - 36*(4*X1 + 5*X2)) \
         - 1/5832*((X1 - X2)^2 + 36)*(X1 - X2)*((2*X1 + X2)^3 - 36*(X1 + 2*X2))",
    ),
];

/// The Cartan-free integrals kept alongside the standard ones.
const BARE_ALIASES: &[(&str, &str)] = &[
    ("T1A", "-1/4*(X7^2 + X8^2)"),
    ("T2A", "-1/4*(X5^2 + X6^2)"),
    ("T3A", "-1/4*(X3^2 + X4^2)"),
    ("T12A", "comm(T1A, T2A)"),
    ("T121A", "comm(T12A, T1A)"),
    ("T122A", "comm(T12A, T2A)"),
    ("T123A", "comm(T12A, T3A)"),
];

const CONTRACTED_C2: &[(&str, &str)] = &[("C2", "1/2*(X3^2 + X4^2 + X7^2 + X8^2)")];

fn sources_for(kind: EnvKind) -> Vec<(&'static str, &'static str)> {
    let mut out: Vec<(&str, &str)> = Vec::new();
    match kind {
        EnvKind::Standard | EnvKind::AppendixA => {
            out.extend_from_slice(LADDERS);
            out.extend_from_slice(if kind == EnvKind::Standard { CARTAN_T } else { BARE_T });
            out.extend_from_slice(DERIVED_T);
            out.extend_from_slice(CASIMIRS);
            out.extend_from_slice(SU3_EXTRA);
            if kind == EnvKind::Standard {
                out.extend_from_slice(BARE_ALIASES);
            }
        }
        EnvKind::Contracted => {
            out.extend_from_slice(CARTAN_T);
            out.extend_from_slice(DERIVED_T);
            out.extend_from_slice(CONTRACTED_C2);
            out.extend_from_slice(BARE_ALIASES);
        }
    }
    out
}

/// Named elements over a fixed algebra. Each binding is given by source text
/// that may only mention generators and earlier bindings, so definitions are
/// acyclic by construction. Values are computed on first use and cached.
pub struct ExprEnv {
    kind: Option<EnvKind>,
    alg: Algebra,
    sources: Vec<(String, String)>,
    cache: Mutex<BTreeMap<String, EAElement>>,
}

impl std::fmt::Debug for ExprEnv {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ExprEnv").field("kind", &self.kind).field("names", &self.names()).finish()
    }
}

impl ExprEnv {
    /// An environment holding only the generators of `alg`.
    pub fn empty(alg: &Algebra) -> Self {
        ExprEnv { kind: None, alg: alg.clone(), sources: Vec::new(), cache: Mutex::default() }
    }

    /// The built-in named elements. Standard and appendix environments need
    /// the su(3) table; the contracted one needs the contracted su(3) table.
    pub fn new(kind: EnvKind, alg: &Algebra) -> Result<Self, LieError> {
        let wanted = match kind {
            EnvKind::Standard | EnvKind::AppendixA => super::su3(),
            EnvKind::Contracted => crate::contract::contracted_su3(),
        };
        if !alg.same_table(&wanted) {
            return Err(LieError::Env {
                name: kind.name().into(),
                reason: format!("algebra {:?} does not have the {} table", alg.name(), wanted.name()),
            });
        }
        let mut env = ExprEnv::empty(alg);
        env.kind = Some(kind);
        for (name, src) in sources_for(kind) {
            env.define(name, src)?;
        }
        Ok(env)
    }

    pub fn standard(alg: &Algebra) -> Result<Self, LieError> {
        ExprEnv::new(EnvKind::Standard, alg)
    }

    pub fn kind(&self) -> Option<EnvKind> {
        self.kind
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    /// Adds (or shadows) a binding. The source is checked against the names
    /// defined so far.
    pub fn define(&mut self, name: &str, src: &str) -> Result<(), LieError> {
        let err = |reason: String| LieError::Env { name: name.to_string(), reason };
        let valid = name.chars().next().is_some_and(|c| c.is_ascii_alphabetic())
            && name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_');
        if !valid || name == "i" || self.alg.index_of(name).is_some() || crate::scalar::Param::from_name(name).is_some()
        {
            return Err(err("not a definable name".into()));
        }
        dsl::parse(src, &self.context()).map_err(|d| err(d.to_string()))?;
        self.sources.retain(|(n, _)| n != name);
        self.sources.push((name.to_string(), src.to_string()));
        self.cache.get_mut().unwrap().clear();
        Ok(())
    }

    pub fn names(&self) -> Vec<&str> {
        self.sources.iter().map(|(n, _)| n.as_str()).collect()
    }

    pub fn sources(&self) -> &[(String, String)] {
        &self.sources
    }

    pub fn source(&self, name: &str) -> Option<&str> {
        self.sources.iter().find(|(n, _)| n == name).map(|(_, s)| s.as_str())
    }

    /// Parser context accepting the generators and every bound name.
    pub fn context(&self) -> Context {
        Context::new(self.alg.labels().iter().cloned().chain(self.sources.iter().map(|(n, _)| n.clone())))
            .with_primes(self.kind == Some(EnvKind::Contracted))
    }

    /// The value of a binding in PBW form.
    pub fn get(&self, name: &str) -> Result<EAElement, EvalError> {
        if let Some(v) = self.cache.lock().unwrap().get(name) {
            return Ok(v.clone());
        }
        let src = self.source(name).ok_or_else(|| EvalError::Unknown(name.to_string()))?;
        let v = self.eval(src)?;
        self.cache.lock().unwrap().insert(name.to_string(), v.clone());
        Ok(v)
    }

    /// Parses and evaluates an expression over this environment.
    pub fn eval(&self, src: &str) -> Result<EAElement, EvalError> {
        let e = dsl::parse(src, &self.context())?;
        self.eval_expr(&e)
    }

    pub fn eval_expr(&self, e: &dsl::Expr) -> Result<EAElement, EvalError> {
        dsl::eval(e, &mut UeaEngine::new(&self.alg, Some(self)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::su3;

    #[test]
    fn lookups() {
        let g = su3();
        let env = ExprEnv::standard(&g).unwrap();
        assert_eq!(env.get("T1").unwrap().to_string(), "-1/4*X2^2 - 1/4*X7^2 - 1/4*X8^2");
        let h = env.eval("H + C2 - 1/3*(X1^2 + X1*X2 + X2^2)").unwrap();
        assert!(h.is_zero(), "{h}");
        assert!(env.eval("T23 - T12").unwrap().is_zero());
        assert!(env.eval("T13 + T12").unwrap().is_zero());
        assert!(env.eval("T122 + T121 + T123").unwrap().is_zero());
        assert!(matches!(env.get("nope"), Err(EvalError::Unknown(_))));
    }

    #[test]
    fn appendix_env_drops_cartan_terms() {
        let g = su3();
        let env = ExprEnv::new(EnvKind::AppendixA, &g).unwrap();
        assert_eq!(env.get("T3").unwrap().to_string(), "-1/4*X3^2 - 1/4*X4^2");
        let std = ExprEnv::standard(&g).unwrap();
        assert_eq!(std.get("T3A").unwrap(), env.get("T3").unwrap());
    }

    #[test]
    fn rejects_wrong_algebra_and_forward_references() {
        let a = crate::lie::abelian(8);
        assert!(ExprEnv::standard(&a).is_err());
        let mut env = ExprEnv::empty(&su3());
        assert!(env.define("P", "Q + X1").is_err());
        env.define("Q", "X1*X2").unwrap();
        env.define("P", "Q + X1").unwrap();
        assert_eq!(env.get("P").unwrap().to_string(), "X1*X2 + X1");
        assert!(env.define("X1", "X2").is_err());
    }
}
