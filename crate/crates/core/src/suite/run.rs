use std::collections::{BTreeMap, HashMap};
use std::time::Instant;

use super::report::{CheckResult, RepairOutcome, Status, SuiteReport, VariantResult};
use super::{EngineKind, Expect, IdealKind, IdentityCheck, Registry, SuiteError};
use crate::dsl::{self, Context, EvalError, Expr, ScalarEngine};
use crate::lie::{su3, EnvKind, ExprEnv};
use crate::linalg;
use crate::realize::{
    classical_env, hbar_limit, ideal_member, quantum_env, required_degree, ConstraintIdeal, IdealRing, Key, Membership,
    PhaseElement, RealEnv, WeylElement,
};
use crate::scalar::{Gauss, Param, ParamExps, Scalar};
use crate::uea::{EAElement, Monomial};

#[derive(Clone, Copy, Debug)]
pub struct RunOptions {
    /// Record wall times; off gives byte-identical reports.
    pub timings: bool,
    /// Search for corrections on failures.
    pub repair: bool,
    /// Re-evaluate enveloping-algebra checks in matrix representations.
    pub oracle: bool,
}

impl Default for RunOptions {
    fn default() -> Self {
        RunOptions { timings: false, repair: true, oracle: false }
    }
}

/// A value in one of the engines.
#[derive(Clone, Debug, PartialEq)]
pub(crate) enum Value {
    Uea(EAElement),
    Phase(PhaseElement),
    Weyl(WeylElement),
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum RowKey {
    Pbw([u8; 8]),
    Real(Key),
}

impl Value {
    fn is_zero(&self) -> bool {
        match self {
            Value::Uea(e) => e.is_zero(),
            Value::Phase(e) => e.is_zero(),
            Value::Weyl(e) => e.is_zero(),
        }
    }

    fn len(&self) -> usize {
        match self {
            Value::Uea(e) => e.len(),
            Value::Phase(e) => e.len(),
            Value::Weyl(e) => e.len(),
        }
    }

    fn sub(&self, o: &Value) -> Value {
        match (self, o) {
            (Value::Uea(a), Value::Uea(b)) => Value::Uea(a - b),
            (Value::Phase(a), Value::Phase(b)) => Value::Phase(a - b),
            (Value::Weyl(a), Value::Weyl(b)) => Value::Weyl(a - b),
            _ => unreachable!("values of one check share an engine"),
        }
    }

    fn scale(&self, s: &Scalar) -> Value {
        match self {
            Value::Uea(e) => Value::Uea(e.scale(s)),
            Value::Phase(e) => Value::Phase(e.scale(s)),
            Value::Weyl(e) => Value::Weyl(e.scale(s)),
        }
    }

    /// Coefficients split by parameter monomial, so a solve over numbers
    /// can match parameter-dependent elements.
    fn flatten(&self) -> BTreeMap<(RowKey, ParamExps), Gauss> {
        let mut out = BTreeMap::new();
        let mut put = |k: RowKey, c: &Scalar| {
            for (e, g) in c.terms() {
                out.insert((k, *e), g.clone());
            }
        };
        match self {
            Value::Uea(x) => {
                for (m, c) in x.terms() {
                    let mut k = [0u8; 8];
                    assert!(m.exponents().len() <= 8, "flattening supports up to eight generators");
                    k[..m.exponents().len()].copy_from_slice(m.exponents());
                    put(RowKey::Pbw(k), c);
                }
            }
            Value::Phase(x) => x.terms().for_each(|(k, c)| put(RowKey::Real(*k), c)),
            Value::Weyl(x) => x.terms().for_each(|(k, c)| put(RowKey::Real(*k), c)),
        }
        out
    }
}

impl std::fmt::Display for Value {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Value::Uea(e) => e.fmt(f),
            Value::Phase(e) => e.fmt(f),
            Value::Weyl(e) => e.fmt(f),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Side {
    Lhs,
    Rhs,
}

/// Every environment the registry refers to. Named values are cached, so
/// one evaluator should serve a whole run.
pub struct Evaluator {
    standard: ExprEnv,
    appendix: ExprEnv,
    contracted: ExprEnv,
    classical: RealEnv<PhaseElement>,
    quantum: RealEnv<WeylElement>,
}

impl Default for Evaluator {
    fn default() -> Self {
        Evaluator::new()
    }
}

impl Evaluator {
    pub fn new() -> Self {
        let g = su3();
        let c = crate::contract::contracted_su3();
        Evaluator {
            standard: ExprEnv::new(EnvKind::Standard, &g).expect("standard environment"),
            appendix: ExprEnv::new(EnvKind::AppendixA, &g).expect("appendix environment"),
            contracted: ExprEnv::new(EnvKind::Contracted, &c).expect("contracted environment"),
            classical: classical_env(),
            quantum: quantum_env(),
        }
    }

    /// The enveloping-algebra environment of a check.
    pub fn uea_env(&self, check: &IdentityCheck) -> Option<&ExprEnv> {
        match check.engine {
            EngineKind::Uea if check.env.as_deref() == Some("appendixA") => Some(&self.appendix),
            EngineKind::Uea => Some(&self.standard),
            EngineKind::ContractedUea => Some(&self.contracted),
            _ => None,
        }
    }

    fn realm(&self, check: &IdentityCheck, side: Side) -> Realm<'_> {
        match (check.engine, side) {
            (EngineKind::Poisson, _) | (EngineKind::Limit, Side::Rhs) => Realm::Phase(&self.classical),
            (EngineKind::Weyl, _) | (EngineKind::Limit, Side::Lhs) => Realm::Weyl(&self.quantum),
            _ => Realm::Uea(self.uea_env(check).expect("enveloping-algebra check")),
        }
    }

    /// The parser context for one side of a check.
    pub fn context(&self, check: &IdentityCheck, lhs: bool) -> Context {
        self.realm(check, if lhs { Side::Lhs } else { Side::Rhs }).context()
    }

    fn eval(&self, check: &IdentityCheck, side: Side, e: &Expr) -> Result<Value, SuiteError> {
        let wrap = |source: EvalError| SuiteError::Eval { id: check.id.clone(), source };
        let v = match self.realm(check, side) {
            Realm::Uea(env) => Value::Uea(env.eval_expr(e).map_err(wrap)?),
            Realm::Phase(env) => Value::Phase(env.eval_expr(e).map_err(wrap)?),
            Realm::Weyl(env) => {
                let w = env.eval_expr(e).map_err(wrap)?;
                if check.engine == EngineKind::Limit {
                    Value::Phase(hbar_limit(&w).map_err(|source| SuiteError::Realize { id: check.id.clone(), source })?)
                } else {
                    Value::Weyl(w)
                }
            }
        };
        Ok(if check.cartan { cartan_substitute(v) } else { v })
    }

    fn eval_src(&self, check: &IdentityCheck, side: Side, src: &str) -> Result<Value, SuiteError> {
        let e = self.parse(check, side, src)?;
        self.eval(check, side, &e)
    }

    fn parse(&self, check: &IdentityCheck, side: Side, src: &str) -> Result<Expr, SuiteError> {
        dsl::parse(src, &self.realm(check, side).context())
            .map_err(|d| SuiteError::Eval { id: check.id.clone(), source: d.into() })
    }

    /// Estimated cost: term counts multiplied through products and calls,
    /// added through sums, with names expanded to their sources.
    fn cost(&self, check: &IdentityCheck) -> f64 {
        let mut memo = HashMap::new();
        let mut total = 0.0;
        for (side, src) in [(Side::Lhs, &check.lhs), (Side::Rhs, &check.rhs)] {
            let realm = self.realm(check, side);
            if let Ok(e) = dsl::parse(src, &realm.context()) {
                total += expr_cost(&e, &realm, &mut memo);
            }
        }
        total
    }
}

enum Realm<'a> {
    Uea(&'a ExprEnv),
    Phase(&'a RealEnv<PhaseElement>),
    Weyl(&'a RealEnv<WeylElement>),
}

impl Realm<'_> {
    fn context(&self) -> Context {
        match self {
            Realm::Uea(e) => e.context(),
            Realm::Phase(e) => e.context(),
            Realm::Weyl(e) => e.context(),
        }
    }

    fn source(&self, name: &str) -> Option<&str> {
        match self {
            Realm::Uea(e) => e.source(name),
            Realm::Phase(e) => e.source(name),
            Realm::Weyl(e) => e.source(name),
        }
    }
}

fn expr_cost(e: &Expr, realm: &Realm<'_>, memo: &mut HashMap<String, f64>) -> f64 {
    match e {
        Expr::Int(_) | Expr::Imag => 1.0,
        Expr::Ident(name) => {
            if let Some(v) = memo.get(name) {
                return *v;
            }
            let v = match realm.source(name).and_then(|s| dsl::parse(s, &realm.context()).ok()) {
                Some(src) => {
                    // guards against a name referring to itself through shadowing
                    memo.insert(name.clone(), 1.0);
                    expr_cost(&src, realm, memo)
                }
                None => 1.0,
            };
            memo.insert(name.clone(), v);
            v
        }
        Expr::Neg(a) => expr_cost(a, realm, memo),
        Expr::Add(a, b) | Expr::Sub(a, b) => expr_cost(a, realm, memo) + expr_cost(b, realm, memo),
        Expr::Mul(a, b) | Expr::Div(a, b) => expr_cost(a, realm, memo) * expr_cost(b, realm, memo),
        Expr::Pow(a, n) => expr_cost(a, realm, memo).powi(n.unsigned_abs().min(64) as i32),
        Expr::Call(_, args) => args.iter().map(|a| expr_cost(a, realm, memo)).product::<f64>() * args.len() as f64,
    }
}

/// Replaces the Cartan generators `X1`, `X2` (leftmost in every PBW
/// monomial) by `a2 - a1` and `a3 - a2`.
fn cartan_substitute(v: Value) -> Value {
    let Value::Uea(e) = v else { return v };
    let x1 = &Scalar::param(Param::A2) - &Scalar::param(Param::A1);
    let x2 = &Scalar::param(Param::A3) - &Scalar::param(Param::A2);
    let alg = e.algebra().clone();
    debug_assert!(alg.label(0) == "X1" && alg.label(1) == "X2");
    let terms = e.terms().map(|(m, c)| {
        let mut exps = m.exponents().to_vec();
        let c = &(c * &x1.pow(exps[0] as u32)) * &x2.pow(exps[1] as u32);
        exps[0] = 0;
        exps[1] = 0;
        (Monomial::from_exponents(&exps), c)
    });
    Value::Uea(EAElement::from_terms(&alg, terms.collect::<Vec<_>>()))
}

struct Decision {
    status: Status,
    modulo: Option<String>,
    certificate: Vec<(String, String)>,
}

fn member<E: IdealRing>(e: &E, ideal: &ConstraintIdeal<E>) -> Result<Decision, crate::realize::RealizeError> {
    let bound = required_degree(e) + 2;
    Ok(match ideal_member(e, ideal, bound)? {
        Membership::Member(cof) => Decision {
            status: Status::Pass,
            modulo: Some(format!("zero modulo ({}) at degree bound {bound}", ideal.names.join(", "))),
            certificate: ideal.names.iter().cloned().zip(cof.iter().map(|c| c.to_string())).collect(),
        },
        Membership::NotMember { .. } => Decision { status: Status::Fail, modulo: None, certificate: vec![] },
        Membership::Undecided { bound, needed } => {
            Decision { status: Status::Undecided { bound, needed }, modulo: None, certificate: vec![] }
        }
    })
}

fn decide(check: &IdentityCheck, r: &Value) -> Result<Decision, SuiteError> {
    if r.is_zero() {
        return Ok(Decision { status: Status::Pass, modulo: None, certificate: vec![] });
    }
    let wrap = |source| SuiteError::Realize { id: check.id.clone(), source };
    match (check.ideal, r) {
        (Some(IdealKind::Sphere), Value::Phase(e)) => {
            member(e, &ConstraintIdeal::<PhaseElement>::sphere()).map_err(wrap)
        }
        (Some(IdealKind::SphereMomentum), Value::Phase(e)) => {
            member(e, &ConstraintIdeal::<PhaseElement>::sphere_momentum()).map_err(wrap)
        }
        (Some(IdealKind::Sphere), Value::Weyl(e)) => member(e, &ConstraintIdeal::<WeylElement>::sphere()).map_err(wrap),
        _ => Ok(Decision { status: Status::Fail, modulo: None, certificate: vec![] }),
    }
}

/// Searches for `residual = sum_j c_j * basis_j` with numeric `c_j`,
/// preferring a single basis term. Returns the correction to add to the
/// printed right-hand side.
pub fn repair(ev: &Evaluator, check: &IdentityCheck) -> Result<RepairOutcome, SuiteError> {
    let r = residual(ev, check, &check.rhs)?;
    if r.is_zero() {
        return Err(SuiteError::NotFailing(check.id.clone()));
    }
    repair_residual(ev, check, &r)
}

fn repair_residual(ev: &Evaluator, check: &IdentityCheck, r: &Value) -> Result<RepairOutcome, SuiteError> {
    if check.repair.is_empty() {
        return Ok(RepairOutcome::NoCandidate { basis: 0 });
    }
    let side = if check.engine == EngineKind::Limit { Side::Rhs } else { Side::Lhs };
    let mut ops: HashMap<String, Value> = HashMap::new();
    let mut columns = Vec::with_capacity(check.repair.len());
    for term in &check.repair {
        let e = ev.parse(check, side, term)?;
        // a parameter prefix scales a shared operator
        let (scalar, op) = match &e {
            Expr::Mul(a, b) if a.identifiers().iter().all(|n| Param::from_name(n).is_some()) => {
                let s = dsl::eval(a, &mut ScalarEngine)
                    .map_err(|source| SuiteError::Eval { id: check.id.clone(), source })?;
                (s, b.as_ref())
            }
            _ => (Scalar::one(), &e),
        };
        let key = op.to_string();
        let v = match ops.get(&key) {
            Some(v) => v.clone(),
            None => {
                let v = ev.eval(check, side, op)?;
                ops.insert(key, v.clone());
                v
            }
        };
        columns.push(v.scale(&scalar).flatten());
    }
    let target: BTreeMap<_, Scalar> = r.flatten().into_iter().map(|(k, g)| (k, Scalar::from_gauss(g))).collect();
    let describe = |x: &[(usize, Gauss)]| {
        x.iter().map(|(j, c)| (Scalar::from_gauss(c.clone()).to_string(), check.repair[*j].clone())).collect()
    };
    for (j, col) in columns.iter().enumerate() {
        if let Some(x) = linalg::solve(std::slice::from_ref(col), &target) {
            let c = x[0].as_constant().expect("numeric solve");
            return Ok(RepairOutcome::Candidate { single: true, terms: describe(&[(j, c)]) });
        }
    }
    Ok(match linalg::solve(&columns, &target) {
        Some(x) => {
            let nz: Vec<(usize, Gauss)> = x
                .iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(j, c)| (j, c.as_constant().expect("numeric solve")))
                .collect();
            RepairOutcome::Candidate { single: nz.len() == 1, terms: describe(&nz) }
        }
        None => RepairOutcome::NoCandidate { basis: columns.len() },
    })
}

fn residual(ev: &Evaluator, check: &IdentityCheck, rhs: &str) -> Result<Value, SuiteError> {
    let l = ev.eval_src(check, Side::Lhs, &check.lhs)?;
    let r = ev.eval_src(check, Side::Rhs, rhs)?;
    Ok(l.sub(&r))
}

fn run_check(ev: &Evaluator, check: &IdentityCheck, opts: &RunOptions) -> Result<CheckResult, SuiteError> {
    let start = Instant::now();
    let lhs = ev.eval_src(check, Side::Lhs, &check.lhs)?;
    let r = lhs.sub(&ev.eval_src(check, Side::Rhs, &check.rhs)?);
    let d = decide(check, &r)?;
    let failed = d.status == Status::Fail;
    let mut variants = Vec::new();
    let mut repair = None;
    if !r.is_zero() {
        for v in &check.variants {
            let vr = lhs.sub(&ev.eval_src(check, Side::Rhs, &v.rhs)?);
            let vd = decide(check, &vr)?;
            variants.push(VariantResult {
                label: v.label.clone(),
                rhs: v.rhs.clone(),
                holds: vd.status == Status::Pass,
                residual: vr.to_string(),
            });
        }
        if failed && opts.repair && !check.repair.is_empty() {
            repair = Some(repair_residual(ev, check, &r)?);
        }
    }
    let status = if check.expect == Expect::Informational { Status::Informational } else { d.status };
    let oracle = if opts.oracle && check.engine.is_uea() && !check.cartan && status != Status::Informational {
        Some(super::oracle::cross_oracle(ev, check, &status, 5)?)
    } else {
        None
    };
    Ok(CheckResult {
        id: check.id.clone(),
        group: check.group.clone(),
        engine: check.engine,
        anchor: check.anchor.clone(),
        quote: check.quote.clone(),
        expect: check.expect,
        status,
        residual: r.to_string(),
        residual_terms: r.len(),
        modulo: d.modulo,
        certificate: d.certificate,
        variants,
        repair,
        oracle,
        note: check.note.clone(),
        millis: if opts.timings { start.elapsed().as_millis() as u64 } else { 0 },
    })
}

/// Evaluates every check of `group` (or `all`) in order of estimated cost
/// and reports them sorted by id.
pub fn run_suite(registry: &Registry, group: &str, opts: &RunOptions) -> Result<SuiteReport, SuiteError> {
    let checks = registry.select(group)?;
    let ev = Evaluator::new();
    let mut order: Vec<(f64, &IdentityCheck)> = checks.iter().map(|c| (ev.cost(c), *c)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then_with(|| a.1.id.cmp(&b.1.id)));
    let mut results = Vec::with_capacity(order.len());
    for (_, c) in order {
        results.push(run_check(&ev, c, opts)?);
    }
    results.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(SuiteReport::new(group, results))
}

pub(crate) fn difference_source(check: &IdentityCheck, rhs: &str) -> String {
    format!("({}) - ({})", check.lhs, rhs)
}
