//! Sparse Laurent-in-position, polynomial-in-momentum storage shared by the
//! classical and quantum realizations.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::{fmt_sum_term, Scalar};

/// Exponents of a monomial `q1^a1 q2^a2 q3^a3 r1^b1 r2^b2 r3^b3`, with the
/// positions `q` allowed negative powers.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Key {
    pub q: [i16; 3],
    pub r: [u8; 3],
}

impl Key {
    pub const ONE: Key = Key { q: [0; 3], r: [0; 3] };

    pub fn position(i: usize, e: i16) -> Key {
        let mut k = Key::ONE;
        k.q[i] = e;
        k
    }

    pub fn momentum(i: usize) -> Key {
        let mut k = Key::ONE;
        k.r[i] = 1;
        k
    }

    pub fn r_degree(&self) -> u32 {
        self.r.iter().map(|&b| b as u32).sum()
    }

    pub fn q_degree(&self) -> i32 {
        self.q.iter().map(|&a| a as i32).sum()
    }

    /// Commutative product of monomials.
    pub fn times(&self, o: &Key) -> Key {
        Key { q: std::array::from_fn(|i| self.q[i] + o.q[i]), r: std::array::from_fn(|i| self.r[i] + o.r[i]) }
    }

    fn render_cmp(&self, o: &Key) -> std::cmp::Ordering {
        (o.r_degree(), o.r, o.q_degree(), o.q).cmp(&(self.r_degree(), self.r, self.q_degree(), self.q))
    }
}

/// A finitely supported map from [`Key`]s to nonzero [`Scalar`]s.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Terms(pub BTreeMap<Key, Scalar>);

impl Terms {
    pub fn zero() -> Self {
        Terms::default()
    }

    pub fn constant(s: Scalar) -> Self {
        let mut t = Terms::zero();
        t.add_term(Key::ONE, &s);
        t
    }

    pub fn monomial(k: Key, s: Scalar) -> Self {
        let mut t = Terms::zero();
        t.add_term(k, &s);
        t
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, k: Key, c: &Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(k).or_default();
        *slot += c;
        if slot.is_zero() {
            self.0.remove(&k);
        }
    }

    pub fn plus(&self, o: &Terms) -> Terms {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.add_term(*k, c);
        }
        out
    }

    pub fn minus(&self, o: &Terms) -> Terms {
        let mut out = self.clone();
        for (k, c) in &o.0 {
            out.add_term(*k, &-c);
        }
        out
    }

    pub fn scale(&self, s: &Scalar) -> Terms {
        if s.is_zero() {
            return Terms::zero();
        }
        Terms(self.0.iter().map(|(k, c)| (*k, c * s)).filter(|(_, c)| !c.is_zero()).collect())
    }

    /// The coefficient if this is a constant (possibly zero).
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.0.len() {
            0 => Some(Scalar::zero()),
            1 => self.0.get(&Key::ONE).cloned(),
            _ => None,
        }
    }

    pub fn single(&self) -> Option<(Key, &Scalar)> {
        if self.0.len() == 1 {
            self.0.iter().next().map(|(k, c)| (*k, c))
        } else {
            None
        }
    }

    pub fn map_coefficients(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> Terms {
        Terms(self.0.iter().map(|(k, c)| (*k, f(c))).filter(|(_, c)| !c.is_zero()).collect())
    }

    pub fn sorted(&self) -> Vec<(&Key, &Scalar)> {
        let mut v: Vec<_> = self.0.iter().collect();
        v.sort_by(|a, b| a.0.render_cmp(b.0));
        v
    }

    pub fn render(&self, f: &mut fmt::Formatter<'_>, qn: &str, rn: &str) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (n, (k, c)) in self.sorted().into_iter().enumerate() {
            let mut body = String::new();
            for (i, &a) in k.q.iter().enumerate() {
                push_factor(&mut body, &format!("{qn}{}", i + 1), a as i32);
            }
            for (i, &b) in k.r.iter().enumerate() {
                push_factor(&mut body, &format!("{rn}{}", i + 1), b as i32);
            }
            fmt_sum_term(c, n == 0, !body.is_empty(), f, |f| f.write_str(&body))?;
        }
        Ok(())
    }
}

fn push_factor(body: &mut String, name: &str, e: i32) {
    if e == 0 {
        return;
    }
    if !body.is_empty() {
        body.push('*');
    }
    body.push_str(name);
    if e != 1 {
        body.push_str(&format!("^{e}"));
    }
}
