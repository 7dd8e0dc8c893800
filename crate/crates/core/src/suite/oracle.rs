//! Independent confirmation of enveloping-algebra checks by evaluating
//! both sides as matrices, never passing through the PBW rewriter.

use std::fmt;

use serde::Serialize;

use super::report::Status;
use super::run::{difference_source, Evaluator};
use super::{EngineKind, IdentityCheck, Registry, SuiteError};
use crate::dsl::{self, MatrixEngine};
use crate::lie::Algebra;
use crate::scalar::ParamPoint;
use crate::uea::rep::{adjoint, affine, fundamental_su3, Representation};

/// Generators spanning the abelian ideal of the contracted su(3).
const CONTRACTED_IDEAL: [usize; 4] = [2, 3, 6, 7];

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct OracleVerdict {
    /// Representation dimensions used.
    pub reps: Vec<usize>,
    pub points: usize,
    /// Evaluations (representation, point) giving a nonzero matrix.
    pub nonzero: usize,
    /// Zero everywhere for a PASS, nonzero somewhere for a FAIL.
    pub confirms: bool,
}

impl fmt::Display for OracleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let dims: Vec<String> = self.reps.iter().map(|d| d.to_string()).collect();
        write!(
            f,
            "dims {} at {} points, {} nonzero, {}",
            dims.join("+"),
            self.points,
            self.nonzero,
            if self.confirms { "confirms" } else { "DISAGREES" }
        )
    }
}

fn reps(alg: &Algebra, engine: EngineKind) -> Result<Vec<Representation>, crate::uea::UeaError> {
    let base = match engine {
        EngineKind::ContractedUea => affine(alg, &CONTRACTED_IDEAL)?,
        _ => fundamental_su3(alg)?,
    };
    let wide = base.tensor(&adjoint(alg)?)?;
    Ok(vec![base, wide])
}

/// Counts the (representation, point) pairs where `lhs - rhs` is nonzero.
fn nonzero_count(
    ev: &Evaluator,
    check: &IdentityCheck,
    rhs: &str,
    points: usize,
) -> Result<(Vec<usize>, usize), SuiteError> {
    let env = ev.uea_env(check).ok_or_else(|| SuiteError::NoOracle(check.id.clone()))?;
    let uea = |source| SuiteError::Uea { id: check.id.clone(), source };
    let reps = reps(env.algebra(), check.engine).map_err(uea)?;
    let src = difference_source(check, rhs);
    let mut nonzero = 0;
    for rep in &reps {
        for k in 0..points {
            let mut engine = MatrixEngine::new(rep, ParamPoint::random(k as u64 + 1), env.sources())
                .with_primes(check.engine == EngineKind::ContractedUea);
            let wrap = |source| SuiteError::Eval { id: check.id.clone(), source };
            let e = dsl::parse(&src, &engine.context()).map_err(|d| wrap(d.into()))?;
            if !dsl::eval(&e, &mut engine).map_err(wrap)?.is_zero() {
                nonzero += 1;
            }
        }
    }
    Ok((reps.iter().map(Representation::dim).collect(), nonzero))
}

/// Re-evaluates a check in a small and a larger representation at
/// `points` random rational parameter values.
pub fn cross_oracle(
    ev: &Evaluator,
    check: &IdentityCheck,
    status: &Status,
    points: usize,
) -> Result<OracleVerdict, SuiteError> {
    if !check.engine.is_uea() || check.cartan {
        return Err(SuiteError::NoOracle(check.id.clone()));
    }
    let (reps, nonzero) = nonzero_count(ev, check, &check.rhs, points)?;
    let confirms = match status {
        Status::Pass => nonzero == 0,
        Status::Fail => nonzero > 0,
        _ => true,
    };
    Ok(OracleVerdict { reps, points, nonzero, confirms })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MutationOutcome {
    pub id: String,
    pub of: String,
    /// The PBW residual is nonzero.
    pub pbw: bool,
    /// Some matrix evaluation is nonzero.
    pub oracle: bool,
}

/// Runs every corrupted identity through both engines.
pub fn run_mutations(registry: &Registry, points: usize) -> Result<Vec<MutationOutcome>, SuiteError> {
    let ev = Evaluator::new();
    let mut out = Vec::new();
    for m in &registry.mutations {
        let check = registry.check(&m.of).expect("validated mutation target");
        let env = ev.uea_env(check).expect("validated mutation target");
        let r = env
            .eval(&difference_source(check, &m.rhs))
            .map_err(|source| SuiteError::Eval { id: m.id.clone(), source })?;
        let (_, nonzero) = nonzero_count(&ev, check, &m.rhs, points)?;
        out.push(MutationOutcome { id: m.id.clone(), of: m.of.clone(), pbw: !r.is_zero(), oracle: nonzero > 0 });
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_identity_is_trivially_confirmed() {
        let reg = Registry::parse(
            r#"
[[check]]
id = "sec3.casimirs.zero"
group = "sec3.casimirs"
engine = "UEA"
anchor = "a"
quote = "0=0"
lhs = "0"
rhs = "0"
"#,
        )
        .unwrap();
        let ev = Evaluator::new();
        let v = cross_oracle(&ev, &reg.checks[0], &Status::Pass, 2).unwrap();
        assert!(v.confirms && v.nonzero == 0);
    }

    #[test]
    fn contracted_affine_rep_is_valid() {
        let c = crate::contract::contracted_su3();
        let r = reps(&c, EngineKind::ContractedUea).unwrap();
        assert_eq!(r[0].dim(), 5);
        assert!(affine(&crate::lie::su3(), &CONTRACTED_IDEAL).is_err());
    }
}
