//! Exact sparse linear solves with numeric (Gaussian-rational) matrices and
//! right-hand sides that may carry parameters.

use std::collections::BTreeMap;

use crate::scalar::{Gauss, Scalar};

/// A column of the system: `row key -> entry`.
pub type Column<K> = BTreeMap<K, Gauss>;

#[derive(Clone, Debug)]
struct Row {
    entries: BTreeMap<usize, Gauss>,
    rhs: Scalar,
}

impl Row {
    /// `self -= f * other`
    fn sub_scaled(&mut self, f: &Gauss, other: &Row) {
        for (c, v) in &other.entries {
            let slot = self.entries.entry(*c).or_insert_with(Gauss::zero);
            *slot -= &(f * v);
            if slot.is_zero() {
                self.entries.remove(c);
            }
        }
        self.rhs -= &other.rhs.scale(f);
    }
}

/// Solves `sum_j x_j * columns[j] = rhs` for scalars `x_j`. Returns `None`
/// when the system is inconsistent; free unknowns are set to zero.
pub fn solve<K: Ord + Clone>(columns: &[Column<K>], rhs: &BTreeMap<K, Scalar>) -> Option<Vec<Scalar>> {
    let mut rows: BTreeMap<K, Row> = BTreeMap::new();
    for (j, col) in columns.iter().enumerate() {
        for (k, v) in col {
            if v.is_zero() {
                continue;
            }
            rows.entry(k.clone())
                .or_insert_with(|| Row { entries: BTreeMap::new(), rhs: Scalar::zero() })
                .entries
                .insert(j, v.clone());
        }
    }
    for (k, s) in rhs {
        if s.is_zero() {
            continue;
        }
        // a row no column touches makes the system inconsistent
        rows.get_mut(k)?.rhs = s.clone();
    }
    let mut pivots: BTreeMap<usize, Row> = BTreeMap::new();
    for (_, mut row) in rows {
        loop {
            let hit = row.entries.keys().find(|c| pivots.contains_key(c)).copied();
            let Some(c) = hit else { break };
            let f = row.entries[&c].clone();
            row.sub_scaled(&f, &pivots[&c]);
        }
        match row.entries.keys().next().copied() {
            None => {
                if !row.rhs.is_zero() {
                    return None;
                }
            }
            Some(c) => {
                let inv = row.entries[&c].inv().expect("nonzero pivot");
                row.entries = row.entries.iter().map(|(k, v)| (*k, v * &inv)).collect();
                row.rhs = row.rhs.scale(&inv);
                pivots.insert(c, row);
            }
        }
    }
    let mut x = vec![Scalar::zero(); columns.len()];
    for (c, row) in pivots.iter().rev() {
        let mut v = row.rhs.clone();
        for (k, a) in &row.entries {
            if k != c {
                v -= &x[*k].scale(a);
            }
        }
        x[*c] = v;
    }
    Some(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Param;

    fn col(entries: &[(u32, i64)]) -> Column<u32> {
        entries.iter().map(|(k, v)| (*k, Gauss::from_int(*v))).collect()
    }

    #[test]
    fn solves_small_systems() {
        // x + y = a1, x - y = 1
        let cols = [col(&[(0, 1), (1, 1)]), col(&[(0, 1), (1, -1)])];
        let rhs: BTreeMap<u32, Scalar> = [(0, Scalar::param(Param::A1)), (1, Scalar::one())].into_iter().collect();
        let x = solve(&cols, &rhs).unwrap();
        assert_eq!(x[0].to_string(), "1/2 + 1/2*a1");
        assert_eq!(x[1].to_string(), "-1/2 + 1/2*a1");
    }

    #[test]
    fn detects_inconsistency() {
        let cols = [col(&[(0, 1), (1, 2)])];
        let rhs: BTreeMap<u32, Scalar> = [(0, Scalar::one()), (1, Scalar::one())].into_iter().collect();
        assert!(solve(&cols, &rhs).is_none());
        let rhs: BTreeMap<u32, Scalar> = [(5, Scalar::one())].into_iter().collect();
        assert!(solve(&cols, &rhs).is_none());
    }

    #[test]
    fn free_unknowns_are_zero() {
        let cols = [col(&[(0, 1)]), col(&[(0, 1)]), col(&[(1, 3)])];
        let rhs: BTreeMap<u32, Scalar> = [(0, Scalar::from_int(2)), (1, Scalar::from_int(3))].into_iter().collect();
        let x = solve(&cols, &rhs).unwrap();
        assert_eq!(x, vec![Scalar::from_int(2), Scalar::zero(), Scalar::one()]);
    }
}
