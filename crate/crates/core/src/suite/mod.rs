//! A registry of polynomial-algebra identities, declared as data, and the
//! driver that checks each one to exact zero.
//!
//! Every check names an engine, two expressions and where the identity
//! comes from. A nonzero residual is a result, not an error: the report
//! carries it in canonical rendering together with any variant that holds
//! and, when a basis is supplied, the exact correction found by a linear
//! solve.

mod oracle;
mod report;
mod run;

use std::collections::BTreeSet;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dsl::EvalError;
use crate::realize::RealizeError;
use crate::uea::UeaError;

pub use oracle::{cross_oracle, run_mutations, MutationOutcome, OracleVerdict};
pub use report::{CheckResult, RepairOutcome, Status, SuiteReport, VariantResult};
pub use run::{repair, run_suite, Evaluator, RunOptions};

/// Group names in report order; `all` selects every check.
pub const GROUPS: [&str; 10] = [
    "sec2.classical",
    "sec2.quantum",
    "sec3.table",
    "sec3.casimirs",
    "sec3.ladder",
    "sec4.cubic",
    "sec4.ybasis",
    "sec4.reduction",
    "sec5",
    "appA",
];

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown group {name:?}; valid groups: {}", valid.join(", "))]
    UnknownGroup { name: String, valid: Vec<String> },
    #[error("registry: {0}")]
    Registry(String),
    #[error("{id}: {source}")]
    Eval { id: String, source: EvalError },
    #[error("{id}: {source}")]
    Realize { id: String, source: RealizeError },
    #[error("{id}: {source}")]
    Uea { id: String, source: UeaError },
    #[error("{0}: the check holds, there is nothing to repair")]
    NotFailing(String),
    #[error("{0}: the matrix oracle only evaluates enveloping-algebra checks")]
    NoOracle(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum EngineKind {
    #[serde(rename = "UEA")]
    Uea,
    #[serde(rename = "CONTRACTED-UEA")]
    ContractedUea,
    #[serde(rename = "POISSON")]
    Poisson,
    #[serde(rename = "WEYL")]
    Weyl,
    #[serde(rename = "LIMIT")]
    Limit,
}

impl EngineKind {
    pub fn name(self) -> &'static str {
        match self {
            EngineKind::Uea => "UEA",
            EngineKind::ContractedUea => "CONTRACTED-UEA",
            EngineKind::Poisson => "POISSON",
            EngineKind::Weyl => "WEYL",
            EngineKind::Limit => "LIMIT",
        }
    }

    /// Whether the check lives in an enveloping algebra.
    pub fn is_uea(self) -> bool {
        matches!(self, EngineKind::Uea | EngineKind::ContractedUea)
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Expect {
    #[default]
    Pass,
    Suspect,
    Informational,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum IdealKind {
    #[serde(rename = "sphere")]
    Sphere,
    #[serde(rename = "sphere+momentum")]
    SphereMomentum,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Variant {
    pub label: String,
    pub rhs: String,
}

/// One identity `lhs = rhs`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct IdentityCheck {
    pub id: String,
    pub group: String,
    pub engine: EngineKind,
    /// `standard` (default) or `appendixA` for UEA checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub env: Option<String>,
    pub anchor: String,
    pub quote: String,
    pub lhs: String,
    pub rhs: String,
    #[serde(default)]
    pub expect: Expect,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub ideal: Option<IdealKind>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub cartan: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub repair: Vec<String>,
    #[serde(default, rename = "variant", skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<Variant>,
}

/// A deliberately corrupted copy of a passing check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Mutation {
    pub id: String,
    pub of: String,
    pub rhs: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Registry {
    #[serde(default, rename = "check")]
    pub checks: Vec<IdentityCheck>,
    #[serde(default, rename = "mutation")]
    pub mutations: Vec<Mutation>,
}

const BUILTIN: &str = include_str!("registry.toml");

const COVERAGE: &str = include_str!("coverage.toml");

/// A displayed equation and the checks evaluating it.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoveredEquation {
    pub anchor: String,
    pub quote: String,
    pub checks: Vec<String>,
}

/// A displayed equation deliberately left without a check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutOfScope {
    pub anchor: String,
    pub quote: String,
    pub reason: String,
}

/// The manifest cross-referencing source equations and check ids.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Coverage {
    #[serde(rename = "equation")]
    pub equations: Vec<CoveredEquation>,
    #[serde(default, rename = "out_of_scope")]
    pub out_of_scope: Vec<OutOfScope>,
}

impl Coverage {
    pub fn builtin() -> Coverage {
        toml::from_str(COVERAGE).expect("built-in coverage manifest parses")
    }

    /// Problems with the manifest against a registry: ids it names that do
    /// not exist, checks it never names, and anchors it does not list.
    pub fn audit(&self, reg: &Registry) -> Vec<String> {
        let mut problems = Vec::new();
        let mut named = BTreeSet::new();
        for eq in &self.equations {
            if eq.checks.is_empty() {
                problems.push(format!("equation {:?} names no check", eq.anchor));
            }
            for id in &eq.checks {
                if reg.check(id).is_none() {
                    problems.push(format!("equation {:?} names unknown check {id}", eq.anchor));
                }
                named.insert(id.as_str());
            }
        }
        let anchors: BTreeSet<&str> = self.equations.iter().map(|e| e.anchor.as_str()).collect();
        for c in &reg.checks {
            if !named.contains(c.id.as_str()) {
                problems.push(format!("check {} is not in the manifest", c.id));
            }
            if !anchors.contains(c.anchor.as_str()) {
                problems.push(format!("check {} has anchor {:?} missing from the manifest", c.id, c.anchor));
            }
        }
        problems
    }
}

impl Registry {
    /// The built-in registry, parsed once.
    pub fn builtin() -> &'static Registry {
        static REG: OnceLock<Registry> = OnceLock::new();
        REG.get_or_init(|| Registry::parse(BUILTIN).expect("built-in registry is valid"))
    }

    pub fn parse(text: &str) -> Result<Registry, SuiteError> {
        let reg: Registry = toml::from_str(text).map_err(|e| SuiteError::Registry(e.to_string()))?;
        reg.validate()?;
        Ok(reg)
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("registry serializes")
    }

    fn validate(&self) -> Result<(), SuiteError> {
        let err = |m: String| Err(SuiteError::Registry(m));
        let mut ids = BTreeSet::new();
        for c in &self.checks {
            if !ids.insert(c.id.as_str()) {
                return err(format!("duplicate id {}", c.id));
            }
            if !GROUPS.contains(&c.group.as_str()) || !c.id.starts_with(&format!("{}.", c.group)) {
                return err(format!("{}: group {:?} is unknown or not the id prefix", c.id, c.group));
            }
            if c.anchor.trim().is_empty() || c.quote.trim().is_empty() {
                return err(format!("{}: every check needs an anchor and a quote", c.id));
            }
            match (c.engine, &c.env) {
                (EngineKind::Uea, Some(e)) if e != "standard" && e != "appendixA" => {
                    return err(format!("{}: unknown environment {e}", c.id))
                }
                (EngineKind::Uea, _) => {}
                (_, Some(_)) => return err(format!("{}: only UEA checks choose an environment", c.id)),
                _ => {}
            }
            match (c.engine, c.ideal) {
                (_, None) | (EngineKind::Poisson, Some(_)) | (EngineKind::Weyl, Some(IdealKind::Sphere)) => {}
                _ => return err(format!("{}: ideal not available for {}", c.id, c.engine.name())),
            }
            if c.cartan && c.engine != EngineKind::Uea {
                return err(format!("{}: cartan substitution needs the UEA engine", c.id));
            }
        }
        let mut mids = BTreeSet::new();
        for m in &self.mutations {
            if !mids.insert(m.id.as_str()) || ids.contains(m.id.as_str()) {
                return err(format!("duplicate mutation id {}", m.id));
            }
            match self.check(&m.of) {
                Some(c) if c.engine.is_uea() && !c.cartan => {}
                Some(_) => return err(format!("mutation {} must corrupt an enveloping-algebra check", m.id)),
                None => return err(format!("mutation {} corrupts unknown check {}", m.id, m.of)),
            }
        }
        Ok(())
    }

    pub fn check(&self, id: &str) -> Option<&IdentityCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    /// Checks of a group (or `all`), or the list of valid names.
    pub fn select(&self, group: &str) -> Result<Vec<&IdentityCheck>, SuiteError> {
        if group == "all" {
            return Ok(self.checks.iter().collect());
        }
        if !GROUPS.contains(&group) {
            return Err(SuiteError::UnknownGroup {
                name: group.to_string(),
                valid: GROUPS.iter().map(|g| g.to_string()).chain(["all".to_string()]).collect(),
            });
        }
        Ok(self.checks.iter().filter(|c| c.group == group).collect())
    }

    /// Every expression source in the registry, for round-trip tests.
    pub fn expressions(&self) -> impl Iterator<Item = (&IdentityCheck, &str)> {
        self.checks.iter().flat_map(|c| {
            [c.lhs.as_str(), c.rhs.as_str()]
                .into_iter()
                .chain(c.variants.iter().map(|v| v.rhs.as_str()))
                .chain(c.repair.iter().map(String::as_str))
                .map(move |s| (c, s))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_parses() {
        let reg = Registry::builtin();
        assert_eq!(reg.select("sec3.table").unwrap().len(), 28);
        assert!(reg.mutations.len() >= 10);
    }

    #[test]
    fn unknown_group_lists_the_valid_ones() {
        let e = Registry::builtin().select("nonsense").unwrap_err();
        let msg = e.to_string();
        assert!(msg.contains("sec3.table") && msg.contains("appA"), "{msg}");
    }

    #[test]
    fn duplicate_ids_are_rejected() {
        let one = r#"
[[check]]
id = "sec5.x"
group = "sec5"
engine = "CONTRACTED-UEA"
anchor = "a"
quote = "q"
lhs = "X1"
rhs = "X1"
"#;
        assert!(Registry::parse(one).is_ok());
        assert!(Registry::parse(&format!("{one}{one}")).is_err());
    }

    #[test]
    fn coverage_manifest_matches_the_registry() {
        let cov = Coverage::builtin();
        assert_eq!(cov.audit(Registry::builtin()), Vec::<String>::new());
        assert!(!cov.out_of_scope.is_empty());
    }

    #[test]
    fn coverage_audit_reports_dangling_ids() {
        let mut cov = Coverage::builtin();
        cov.equations[0].checks.push("sec5.nowhere".into());
        let problems = cov.audit(Registry::builtin());
        assert_eq!(problems.len(), 1, "{problems:?}");
    }

    #[test]
    fn toml_round_trip() {
        let reg = Registry::builtin();
        assert_eq!(&Registry::parse(&reg.to_toml()).unwrap(), reg);
    }
}
