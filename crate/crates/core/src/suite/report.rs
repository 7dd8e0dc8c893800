use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use serde::Serialize;

use super::oracle::OracleVerdict;
use super::{EngineKind, Expect};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
    /// The ideal test could not decide at the bound used.
    Undecided {
        bound: u32,
        needed: u32,
    },
    Informational,
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Undecided { .. } => "UNDECIDED",
            Status::Informational => "INFORMATIONAL",
        }
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Status::Undecided { bound, .. } => write!(f, "UNDECIDED(bound {bound})"),
            s => f.write_str(s.label()),
        }
    }
}

impl Serialize for Status {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VariantResult {
    pub label: String,
    pub rhs: String,
    pub holds: bool,
    pub residual: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum RepairOutcome {
    /// `lhs = rhs + sum coefficient * term` holds exactly.
    Candidate {
        single: bool,
        terms: Vec<(String, String)>,
    },
    NoCandidate {
        basis: usize,
    },
}

impl RepairOutcome {
    /// The corrected right-hand side.
    pub fn corrected(&self, rhs: &str) -> Option<String> {
        match self {
            RepairOutcome::Candidate { terms, .. } => {
                let mut s = format!("({rhs})");
                for (c, t) in terms {
                    write!(s, " + ({c})*({t})").unwrap();
                }
                Some(s)
            }
            RepairOutcome::NoCandidate { .. } => None,
        }
    }
}

impl fmt::Display for RepairOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RepairOutcome::Candidate { single, terms } => {
                f.write_str(if *single { "single coefficient: rhs" } else { "correction: rhs" })?;
                for (c, t) in terms {
                    write!(f, " + ({c})*({t})")?;
                }
                Ok(())
            }
            RepairOutcome::NoCandidate { basis } => write!(f, "no candidate in a basis of {basis} terms"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckResult {
    pub id: String,
    pub status: Status,
    pub residual: String,
    pub anchor: String,
    pub millis: u64,
    pub group: String,
    pub engine: EngineKind,
    pub quote: String,
    pub expect: Expect,
    pub residual_terms: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub modulo: Option<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub certificate: Vec<(String, String)>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub variants: Vec<VariantResult>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub repair: Option<RepairOutcome>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub oracle: Option<OracleVerdict>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub group: String,
    pub counts: BTreeMap<&'static str, usize>,
    pub checks: Vec<CheckResult>,
}

impl SuiteReport {
    pub(crate) fn new(group: &str, checks: Vec<CheckResult>) -> Self {
        let mut counts: BTreeMap<&'static str, usize> =
            ["PASS", "FAIL", "UNDECIDED", "INFORMATIONAL"].into_iter().map(|k| (k, 0)).collect();
        for c in &checks {
            *counts.get_mut(c.status.label()).unwrap() += 1;
        }
        SuiteReport { group: group.to_string(), counts, checks }
    }

    pub fn has_fail(&self) -> bool {
        self.counts["FAIL"] > 0
    }

    pub fn get(&self, id: &str) -> Option<&CheckResult> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(
            s,
            "group {}: {} checks, {} PASS, {} FAIL, {} UNDECIDED, {} INFORMATIONAL",
            self.group,
            self.checks.len(),
            self.counts["PASS"],
            self.counts["FAIL"],
            self.counts["UNDECIDED"],
            self.counts["INFORMATIONAL"]
        )
        .unwrap();
        for c in &self.checks {
            write!(s, "{:<13} {} [{}] {}", c.status.to_string(), c.id, c.engine.name(), c.anchor).unwrap();
            if c.millis > 0 {
                write!(s, " ({} ms)", c.millis).unwrap();
            }
            s.push('\n');
            if let Some(m) = &c.modulo {
                writeln!(s, "    {m}").unwrap();
            }
            let clean = c.residual == "0" || c.modulo.is_some();
            if !clean {
                writeln!(s, "    quote: {}", c.quote).unwrap();
                writeln!(s, "    residual ({} terms): {}", c.residual_terms, c.residual).unwrap();
            }
            for v in &c.variants {
                let verdict = if v.holds { "holds" } else { "fails" };
                writeln!(s, "    variant {:?}: {verdict}", v.label).unwrap();
            }
            if let Some(r) = &c.repair {
                writeln!(s, "    repair: {r}").unwrap();
            }
            if let Some(o) = &c.oracle {
                writeln!(s, "    oracle: {o}").unwrap();
            }
            if let Some(n) = &c.note {
                writeln!(s, "    note: {n}").unwrap();
            }
        }
        s
    }
}
