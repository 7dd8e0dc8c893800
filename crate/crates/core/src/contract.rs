//! Graded (Inönü–Wigner type) contractions of structure-constant tables.
//!
//! Rescaling `X_i = R^{w_i} X'_i` turns `[X_i, X_j] = c X_k` into
//! `[X'_i, X'_j] = c R^{w_k - w_i - w_j} X'_k`. As `R` grows, terms with
//! `w_i + w_j - w_k > 0` vanish, terms with exponent zero survive, and a
//! negative exponent would blow up.

use std::sync::OnceLock;

use thiserror::Error;

use crate::lie::{Algebra, Bracket, LieAlgebra, LieError};
use crate::scalar::{Param, Scalar};
use crate::uea::EAElement;

#[derive(Debug, Error)]
pub enum ContractError {
    #[error("{got} weights given for a {dim}-dimensional algebra")]
    WeightCount { got: usize, dim: usize },
    #[error("bracket [{0}, {1}] has a term in {2} whose limit diverges")]
    Divergent(String, String, String),
    #[error("bracket [{0}, {1}] has a constant term whose limit diverges")]
    DivergentConstant(String, String),
    #[error("element has no finite leading part")]
    NoLeadingPart,
    #[error("weights {0:?}: {1}")]
    Parse(String, String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// Integer grading of the generators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractionSpec {
    pub weights: Vec<i32>,
}

/// A bracket `(i, j, b)` with the exponent of each term and of its constant.
type Scaled = (usize, usize, Bracket, Vec<i32>, i32);

impl ContractionSpec {
    pub fn new(weights: Vec<i32>) -> Self {
        ContractionSpec { weights }
    }

    /// Comma-separated integers, e.g. `0,0,1,1,0,0,1,1`.
    pub fn parse(text: &str) -> Result<Self, ContractError> {
        text.split(',')
            .map(|w| w.trim().parse::<i32>())
            .collect::<Result<Vec<_>, _>>()
            .map(ContractionSpec::new)
            .map_err(|e| ContractError::Parse(text.to_string(), e.to_string()))
    }

    fn check(&self, alg: &Algebra) -> Result<(), ContractError> {
        if self.weights.len() != alg.dim() {
            return Err(ContractError::WeightCount { got: self.weights.len(), dim: alg.dim() });
        }
        Ok(())
    }

    /// `w_i + w_j - w_k` for every term, failing on the first negative one.
    fn exponents(&self, alg: &Algebra) -> Result<Vec<Scaled>, ContractError> {
        self.check(alg)?;
        let w = &self.weights;
        let mut out = Vec::new();
        for (i, j, b) in alg.entries() {
            let mut exps = Vec::with_capacity(b.terms.len());
            for (k, _) in &b.terms {
                let e = w[i] + w[j] - w[*k];
                if e < 0 {
                    return Err(ContractError::Divergent(
                        alg.label(i).into(),
                        alg.label(j).into(),
                        alg.label(*k).into(),
                    ));
                }
                exps.push(e);
            }
            let ce = w[i] + w[j];
            if !b.constant.is_zero() && ce < 0 {
                return Err(ContractError::DivergentConstant(alg.label(i).into(), alg.label(j).into()));
            }
            out.push((i, j, b.clone(), exps, ce));
        }
        Ok(out)
    }
}

/// The `R -> infinity` limit: keeps exactly the terms of exponent zero and
/// re-verifies Jacobi.
pub fn contract_algebra(alg: &Algebra, spec: &ContractionSpec) -> Result<Algebra, ContractError> {
    let entries = spec
        .exponents(alg)?
        .into_iter()
        .map(|(i, j, b, exps, ce)| {
            let terms = b.terms.iter().zip(&exps).filter(|(_, e)| **e == 0).map(|(t, _)| t.clone()).collect();
            let constant = if ce == 0 { b.constant.clone() } else { Scalar::zero() };
            (i, j, Bracket::new(terms, constant))
        })
        .collect();
    Ok(LieAlgebra::checked(format!("{}-contracted", alg.name()), alg.labels().to_vec(), entries)?)
}

/// The one-parameter family before the limit, writing the parameter `R` for
/// the inverse scale: each structure constant is multiplied by
/// `R^(w_i + w_j - w_k)`, so `R = 1` is the original table and `R = 0` the
/// contraction.
pub fn deform_algebra(alg: &Algebra, spec: &ContractionSpec) -> Result<Algebra, ContractError> {
    let r = Scalar::param(Param::R);
    let entries = spec
        .exponents(alg)?
        .into_iter()
        .map(|(i, j, b, exps, ce)| {
            let terms = b.terms.iter().zip(&exps).map(|((k, c), e)| (*k, c * &r.pow(*e as u32))).collect();
            (i, j, Bracket::new(terms, &b.constant * &r.pow(ce.max(0) as u32)))
        })
        .collect();
    Ok(LieAlgebra::checked(format!("{}-deformed", alg.name()), alg.labels().to_vec(), entries)?)
}

/// Leading part of `p` under the rescaling: writes `p` in PBW form, keeps
/// the monomials of largest total weight and reads them in `target` (the
/// contracted algebra, with the same labels).
pub fn contract_element(p: &EAElement, spec: &ContractionSpec, target: &Algebra) -> Result<EAElement, ContractError> {
    spec.check(p.algebra())?;
    if target.labels() != p.algebra().labels() {
        return Err(ContractError::Lie(LieError::Env {
            name: target.name().into(),
            reason: "target algebra has different generators".into(),
        }));
    }
    let weight = |m: &crate::uea::Monomial| -> i64 {
        m.exponents().iter().zip(&spec.weights).map(|(&e, &w)| e as i64 * w as i64).sum()
    };
    let top = p.terms().map(|(m, _)| weight(m)).max().ok_or(ContractError::NoLeadingPart)?;
    Ok(EAElement::from_terms(target, p.terms().filter(|(m, _)| weight(m) == top).map(|(m, c)| (m.clone(), c.clone()))))
}

/// The grading used for the contracted integrals: `X3, X4, X7, X8` carry
/// weight one.
pub fn su3_spec() -> ContractionSpec {
    ContractionSpec::new(vec![0, 0, 1, 1, 0, 0, 1, 1])
}

/// The contraction of su(3) along [`su3_spec`]. One shared instance, so
/// elements built from separate calls can be combined.
pub fn contracted_su3() -> Algebra {
    static ALG: OnceLock<Algebra> = OnceLock::new();
    ALG.get_or_init(|| contract_algebra(&crate::lie::su3(), &su3_spec()).expect("su3 contracts")).clone()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{jacobi_defect, su3};

    #[test]
    fn euclidean_brackets_vanish() {
        let c = contracted_su3();
        let vanished: Vec<(usize, usize)> = (0..8)
            .flat_map(|i| (i + 1..8).map(move |j| (i, j)))
            .filter(|&(i, j)| !su3().bracket(i, j).is_zero() && c.bracket(i, j).is_zero())
            .map(|(i, j)| (i + 1, j + 1))
            .collect();
        assert_eq!(vanished, [(3, 4), (3, 7), (3, 8), (4, 7), (4, 8), (7, 8)]);
        assert!(jacobi_defect(&c).is_empty());
    }

    #[test]
    fn zero_weights_change_nothing() {
        let g = su3();
        let spec = ContractionSpec::new(vec![0; 8]);
        assert!(contract_algebra(&g, &spec).unwrap().same_table(&g));
        let p = &EAElement::generator(&g, 4) * &EAElement::generator(&g, 2);
        assert_eq!(contract_element(&p, &spec, &g).unwrap(), p);
    }

    #[test]
    fn divergent_weights_are_named() {
        let err = contract_algebra(&su3(), &ContractionSpec::new(vec![1, 0, 0, 0, 0, 0, 0, 0])).unwrap_err();
        assert_eq!(err.to_string(), "bracket [X3, X4] has a term in X1 whose limit diverges");
        assert!(matches!(
            contract_algebra(&su3(), &ContractionSpec::new(vec![0; 3])),
            Err(ContractError::WeightCount { got: 3, dim: 8 })
        ));
    }

    #[test]
    fn deformation_interpolates() {
        let d = deform_algebra(&su3(), &su3_spec()).unwrap();
        assert_eq!(d.bracket(2, 3).terms, vec![(0, &Scalar::from_int(2) * &Scalar::param(Param::R).pow(2))]);
        let at = |v: i64| {
            let entries = d
                .entries()
                .into_iter()
                .map(|(i, j, b)| {
                    let terms = b
                        .terms
                        .iter()
                        .map(|(k, c)| (*k, c.substitute(Param::R, &Scalar::from_int(v)).unwrap()))
                        .collect();
                    (i, j, Bracket::new(terms, Scalar::zero()))
                })
                .collect();
            LieAlgebra::new("at", d.labels().to_vec(), entries).unwrap()
        };
        assert!(at(1).same_table(&su3()));
        assert!(at(0).same_table(&contracted_su3()));
    }
}
