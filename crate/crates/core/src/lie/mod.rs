//! Lie algebras given by structure-constant tables.

mod env;

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::scalar::Scalar;
use crate::uea::{EAElement, PbwCache};

pub use env::{EnvKind, ExprEnv};

#[derive(Debug, Error)]
pub enum LieError {
    #[error("generator index {0} out of range for dimension {1}")]
    IndexOutOfRange(usize, usize),
    #[error("bracket entry ({0},{1}) must have i < j")]
    NotUpperTriangular(usize, usize),
    #[error("duplicate bracket entry ({0},{1})")]
    DuplicateEntry(usize, usize),
    #[error("label count {labels} does not match dimension {dim}")]
    LabelCount { labels: usize, dim: usize },
    #[error("duplicate generator label {0:?}")]
    DuplicateLabel(String),
    #[error("Jacobi identity fails for ({0},{1},{2}): {3}")]
    Jacobi(usize, usize, usize, String),
    #[error("bad scalar in bracket table: {0}")]
    Scalar(#[from] crate::scalar::ScalarError),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("unsupported algebra {0:?} (expected su3)")]
    Unsupported(String),
    #[error("environment {name}: {reason}")]
    Env { name: String, reason: String },
}

/// Right-hand side of `[X_i, X_j]`: a linear combination of generators plus
/// an optional constant.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Bracket {
    pub terms: Vec<(usize, Scalar)>,
    pub constant: Scalar,
}

impl Bracket {
    pub fn new(mut terms: Vec<(usize, Scalar)>, constant: Scalar) -> Self {
        terms.retain(|(_, c)| !c.is_zero());
        terms.sort_by_key(|(k, _)| *k);
        Bracket { terms, constant }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty() && self.constant.is_zero()
    }

    fn negated(&self) -> Bracket {
        Bracket { terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(), constant: -&self.constant }
    }
}

static NEXT_ID: AtomicU64 = AtomicU64::new(1);

pub type Algebra = Arc<LieAlgebra>;

pub struct LieAlgebra {
    id: u64,
    name: String,
    labels: Vec<String>,
    // dim x dim, only i < j populated
    table: Vec<Bracket>,
    pub(crate) pbw: PbwCache,
}

impl std::fmt::Debug for LieAlgebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LieAlgebra").field("name", &self.name).field("dim", &self.dim()).finish()
    }
}

impl LieAlgebra {
    /// Builds an algebra from `(i, j, [X_i, X_j])` entries with `i < j`
    /// (0-based). Unlisted pairs commute. Jacobi is not checked here.
    pub fn new(
        name: impl Into<String>,
        labels: Vec<String>,
        entries: Vec<(usize, usize, Bracket)>,
    ) -> Result<Algebra, LieError> {
        let dim = labels.len();
        for (n, l) in labels.iter().enumerate() {
            if labels[..n].contains(l) {
                return Err(LieError::DuplicateLabel(l.clone()));
            }
        }
        let mut table = vec![Bracket::default(); dim * dim];
        let mut seen = vec![false; dim * dim];
        for (i, j, b) in entries {
            if i >= dim {
                return Err(LieError::IndexOutOfRange(i, dim));
            }
            if j >= dim {
                return Err(LieError::IndexOutOfRange(j, dim));
            }
            if i >= j {
                return Err(LieError::NotUpperTriangular(i, j));
            }
            if seen[i * dim + j] {
                return Err(LieError::DuplicateEntry(i, j));
            }
            for (k, _) in &b.terms {
                if *k >= dim {
                    return Err(LieError::IndexOutOfRange(*k, dim));
                }
            }
            seen[i * dim + j] = true;
            table[i * dim + j] = Bracket::new(b.terms, b.constant);
        }
        Ok(Arc::new(LieAlgebra {
            id: NEXT_ID.fetch_add(1, Ordering::Relaxed),
            name: name.into(),
            labels,
            table,
            pbw: PbwCache::default(),
        }))
    }

    /// Like [`LieAlgebra::new`] but rejects tables that violate Jacobi.
    pub fn checked(
        name: impl Into<String>,
        labels: Vec<String>,
        entries: Vec<(usize, usize, Bracket)>,
    ) -> Result<Algebra, LieError> {
        let alg = LieAlgebra::new(name, labels, entries)?;
        if let Some((i, j, k, r)) = jacobi_defect(&alg).into_iter().next() {
            return Err(LieError::Jacobi(i + 1, j + 1, k + 1, r.to_string()));
        }
        Ok(alg)
    }

    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// `[X_i, X_j]` for any pair.
    pub fn bracket(&self, i: usize, j: usize) -> Bracket {
        let n = self.dim();
        match i.cmp(&j) {
            std::cmp::Ordering::Less => self.table[i * n + j].clone(),
            std::cmp::Ordering::Greater => self.table[j * n + i].negated(),
            std::cmp::Ordering::Equal => Bracket::default(),
        }
    }

    pub(crate) fn bracket_ref(&self, i: usize, j: usize) -> &Bracket {
        debug_assert!(i < j);
        &self.table[i * self.dim() + j]
    }

    /// Nonzero table entries `(i, j, bracket)` with `i < j`, in index order.
    pub fn entries(&self) -> Vec<(usize, usize, &Bracket)> {
        let n = self.dim();
        let mut out = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let b = &self.table[i * n + j];
                if !b.is_zero() {
                    out.push((i, j, b));
                }
            }
        }
        out
    }

    /// Same labels and bracket table (names may differ).
    pub fn same_table(&self, other: &LieAlgebra) -> bool {
        self.labels == other.labels && self.table == other.table
    }

    /// True when every structure constant is a plain number.
    pub fn is_numeric(&self) -> bool {
        self.table.iter().all(|b| b.constant.is_constant() && b.terms.iter().all(|(_, c)| c.is_constant()))
    }

    pub fn to_json(&self) -> String {
        let doc = AlgebraJson {
            name: self.name.clone(),
            dim: self.dim(),
            labels: self.labels.clone(),
            brackets: self
                .entries()
                .into_iter()
                .map(|(i, j, b)| BracketJson {
                    i: i + 1,
                    j: j + 1,
                    terms: b.terms.iter().map(|(k, c)| TermJson { k: k + 1, c: c.to_string() }).collect(),
                    constant: (!b.constant.is_zero()).then(|| b.constant.to_string()),
                })
                .collect(),
        };
        serde_json::to_string_pretty(&doc).expect("algebra serializes")
    }

    /// Loads the JSON interchange format; `check_jacobi = false` admits
    /// deliberately non-Lie tables.
    pub fn from_json(text: &str, check_jacobi: bool) -> Result<Algebra, LieError> {
        let doc: AlgebraJson = serde_json::from_str(text)?;
        if doc.labels.len() != doc.dim {
            return Err(LieError::LabelCount { labels: doc.labels.len(), dim: doc.dim });
        }
        let mut entries = Vec::with_capacity(doc.brackets.len());
        for b in doc.brackets {
            let idx = |x: usize| x.checked_sub(1).ok_or(LieError::IndexOutOfRange(0, doc.dim));
            let (i, j) = (idx(b.i)?, idx(b.j)?);
            let mut terms = Vec::with_capacity(b.terms.len());
            for t in b.terms {
                terms.push((idx(t.k)?, t.c.parse::<Scalar>()?));
            }
            let constant = match b.constant {
                Some(c) => c.parse::<Scalar>()?,
                None => Scalar::zero(),
            };
            entries.push((i, j, Bracket::new(terms, constant)));
        }
        if check_jacobi {
            LieAlgebra::checked(doc.name, doc.labels, entries)
        } else {
            LieAlgebra::new(doc.name, doc.labels, entries)
        }
    }
}

#[derive(Serialize, Deserialize)]
struct AlgebraJson {
    name: String,
    dim: usize,
    labels: Vec<String>,
    brackets: Vec<BracketJson>,
}

#[derive(Serialize, Deserialize)]
struct BracketJson {
    i: usize,
    j: usize,
    terms: Vec<TermJson>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    constant: Option<String>,
}

#[derive(Serialize, Deserialize)]
struct TermJson {
    k: usize,
    c: String,
}

/// The su(3) basis with Cartan generators `X1, X2` first. Every call returns
/// the same instance, so the rewrite cache is shared.
pub fn su3() -> Algebra {
    static SU3: OnceLock<Algebra> = OnceLock::new();
    SU3.get_or_init(build_su3).clone()
}

fn build_su3() -> Algebra {
    // (i, j, [(k, c)]) 1-based
    type Row = (usize, usize, &'static [(usize, i64)]);
    const TABLE: &[Row] = &[
        (1, 3, &[(4, 2)]),
        (1, 4, &[(3, -2)]),
        (1, 5, &[(6, 1)]),
        (1, 6, &[(5, -1)]),
        (1, 7, &[(8, -1)]),
        (1, 8, &[(7, 1)]),
        (2, 3, &[(4, -1)]),
        (2, 4, &[(3, 1)]),
        (2, 5, &[(6, 1)]),
        (2, 6, &[(5, -1)]),
        (2, 7, &[(8, 2)]),
        (2, 8, &[(7, -2)]),
        (3, 4, &[(1, 2)]),
        (3, 5, &[(7, -1)]),
        (3, 6, &[(8, -1)]),
        (3, 7, &[(5, 1)]),
        (3, 8, &[(6, 1)]),
        (4, 5, &[(8, 1)]),
        (4, 6, &[(7, -1)]),
        (4, 7, &[(6, 1)]),
        (4, 8, &[(5, -1)]),
        (5, 6, &[(1, 2), (2, 2)]),
        (5, 7, &[(3, -1)]),
        (5, 8, &[(4, 1)]),
        (6, 7, &[(4, -1)]),
        (6, 8, &[(3, -1)]),
        (7, 8, &[(2, 2)]),
    ];
    let labels = (1..=8).map(|n| format!("X{n}")).collect();
    let entries = TABLE
        .iter()
        .map(|(i, j, terms)| {
            let terms = terms.iter().map(|(k, c)| (k - 1, Scalar::from_int(*c))).collect();
            (i - 1, j - 1, Bracket::new(terms, Scalar::zero()))
        })
        .collect();
    LieAlgebra::new("su3", labels, entries).expect("su3 table is well formed")
}

/// The abelian algebra on `n` generators `X1..Xn`.
pub fn abelian(n: usize) -> Algebra {
    let labels = (1..=n).map(|k| format!("X{k}")).collect();
    LieAlgebra::new(format!("abelian{n}"), labels, Vec::new()).expect("abelian table")
}

/// All triples `i < j < k` whose Jacobi combination
/// `[[X_i,X_j],X_k] + [[X_j,X_k],X_i] + [[X_k,X_i],X_j]` is nonzero, with the
/// residual as an enveloping-algebra element (degree at most 1).
pub fn jacobi_defect(alg: &Algebra) -> Vec<(usize, usize, usize, EAElement)> {
    let n = alg.dim();
    // [[X_a, X_b], X_c] as a linear combination; the constant slot is central.
    let nested = |a: usize, b: usize, c: usize, acc: &mut EAElement| {
        for (m, coef) in &alg.bracket(a, b).terms {
            let inner = alg.bracket(*m, c);
            for (k, c2) in &inner.terms {
                acc.add_term(EAElement::generator_monomial(alg, *k), &(coef * c2));
            }
            if !inner.constant.is_zero() {
                acc.add_term(EAElement::unit_monomial(alg), &(coef * &inner.constant));
            }
        }
    };
    let mut out = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut acc = EAElement::zero(alg);
                nested(i, j, k, &mut acc);
                nested(j, k, i, &mut acc);
                nested(k, i, j, &mut acc);
                if !acc.is_zero() {
                    out.push((i, j, k, acc));
                }
            }
        }
    }
    out
}
