//! Word rewriting into PBW form.
//!
//! An adjacent out-of-order pair `X_j X_i` (`j > i`) is replaced by
//! `X_i X_j - [X_i, X_j]`. Each step either keeps the degree and removes one
//! inversion or lowers the degree, so the process terminates.

use std::collections::BTreeMap;

use rand::{RngExt, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{EAElement, Monomial};
use crate::lie::Algebra;
use crate::scalar::Scalar;

/// A word in the generators, by index.
pub type Word = Vec<usize>;

/// A formal sum of arbitrary words.
pub type RawSum = Vec<(Word, Scalar)>;

/// Which inversion to rewrite next.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    LeftmostFirst,
    RightmostFirst,
    /// A uniformly random inversion, reproducible from the seed.
    Random(u64),
}

fn inversions(w: &[usize]) -> usize {
    let mut n = 0;
    for a in 0..w.len() {
        for b in a + 1..w.len() {
            if w[a] > w[b] {
                n += 1;
            }
        }
    }
    n
}

/// Normal form with the default strategy (highest degree first, leftmost
/// inversion first).
pub fn normal_form(alg: &Algebra, raw: &RawSum) -> EAElement {
    normal_form_with(alg, raw, Strategy::LeftmostFirst)
}

pub fn normal_form_with(alg: &Algebra, raw: &RawSum, strategy: Strategy) -> EAElement {
    let n = alg.dim();
    for (w, _) in raw {
        assert!(w.iter().all(|&g| g < n), "generator index out of range in {w:?}");
    }
    let mut rng = match strategy {
        Strategy::Random(seed) => Some(ChaCha8Rng::seed_from_u64(seed)),
        _ => None,
    };
    // keyed by (degree, word); popped from the top so highest degree goes first
    let mut pending: BTreeMap<(usize, Word), Scalar> = BTreeMap::new();
    let push = |pending: &mut BTreeMap<(usize, Word), Scalar>, w: Word, c: Scalar| {
        if c.is_zero() {
            return;
        }
        let key = (w.len(), w);
        let slot = pending.entry(key.clone()).or_insert_with(Scalar::zero);
        *slot += &c;
        if slot.is_zero() {
            pending.remove(&key);
        }
    };
    for (w, c) in raw {
        push(&mut pending, w.clone(), c.clone());
    }
    let mut out = EAElement::zero(alg);
    while let Some(((deg, w), c)) = pending.pop_last() {
        let inv: Vec<usize> = (0..w.len().saturating_sub(1)).filter(|&p| w[p] > w[p + 1]).collect();
        if inv.is_empty() {
            let mut m = Monomial::unit(n);
            for &g in &w {
                m.0[g] += 1;
            }
            out.add_term(m, &c);
            continue;
        }
        let pos = match strategy {
            Strategy::LeftmostFirst => inv[0],
            Strategy::RightmostFirst => inv[inv.len() - 1],
            Strategy::Random(_) => inv[rng.as_mut().unwrap().random_range(0..inv.len())],
        };
        let (j, i) = (w[pos], w[pos + 1]);
        let mut swapped = w.clone();
        swapped.swap(pos, pos + 1);
        debug_assert_eq!(inversions(&swapped) + 1, inversions(&w), "rewrite must drop one inversion");
        push(&mut pending, swapped, c.clone());
        let br = alg.bracket(i, j);
        for (k, s) in &br.terms {
            let mut shorter = Vec::with_capacity(deg - 1);
            shorter.extend_from_slice(&w[..pos]);
            shorter.push(*k);
            shorter.extend_from_slice(&w[pos + 2..]);
            debug_assert!(shorter.len() < deg);
            push(&mut pending, shorter, -&(&c * s));
        }
        if !br.constant.is_zero() {
            let mut shorter = Vec::with_capacity(deg - 2);
            shorter.extend_from_slice(&w[..pos]);
            shorter.extend_from_slice(&w[pos + 2..]);
            push(&mut pending, shorter, -&(&c * &br.constant));
        }
    }
    out
}
