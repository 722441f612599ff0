//! Exact sparse linear algebra over the rationals.
//!
//! Rows are sparse maps from column index to coefficient. The pivot of a
//! row is its smallest column, so the column order decides which
//! coordinates get eliminated first.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::series::Rational;

pub type SparseRow = BTreeMap<usize, Rational>;

fn axpy(target: &mut SparseRow, factor: &Rational, source: &SparseRow) {
    for (col, val) in source {
        let entry = target.entry(*col).or_insert_with(Rational::zero);
        *entry -= factor * val;
        if entry.is_zero() {
            target.remove(col);
        }
    }
}

/// Reduced row echelon form, maintained incrementally.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Echelon {
    rows: BTreeMap<usize, SparseRow>,
}

impl Echelon {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn from_rows<I: IntoIterator<Item = SparseRow>>(rows: I) -> Self {
        let mut e = Self::new();
        for r in rows {
            e.insert(r);
        }
        e
    }

    /// Reduces `v` against the current pivots, in place.
    pub fn reduce(&self, v: &mut SparseRow) {
        let cols: Vec<usize> = v.keys().copied().filter(|c| self.rows.contains_key(c)).collect();
        for col in cols {
            if let Some(factor) = v.get(&col).cloned() {
                axpy(v, &factor, &self.rows[&col]);
            }
        }
        // Reduction by a pivot can only introduce columns above that
        // pivot, which are themselves reduced because every stored row is
        // fully reduced.
    }

    /// Adds a row; returns true if it increased the rank.
    pub fn insert(&mut self, mut v: SparseRow) -> bool {
        self.reduce(&mut v);
        let Some((&pivot, lead)) = v.iter().next() else {
            return false;
        };
        let inv = lead.clone().recip();
        if !inv.is_one() {
            for val in v.values_mut() {
                *val *= &inv;
            }
        }
        for row in self.rows.values_mut() {
            if let Some(factor) = row.get(&pivot).cloned() {
                axpy(row, &factor, &v);
            }
        }
        self.rows.insert(pivot, v);
        true
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    pub fn pivots(&self) -> impl Iterator<Item = usize> + '_ {
        self.rows.keys().copied()
    }

    pub fn rows(&self) -> impl Iterator<Item = (usize, &SparseRow)> + '_ {
        self.rows.iter().map(|(p, r)| (*p, r))
    }

    pub fn into_rows(self) -> Vec<SparseRow> {
        self.rows.into_values().collect()
    }

    pub fn contains(&self, v: &SparseRow) -> bool {
        let mut w = v.clone();
        self.reduce(&mut w);
        w.is_empty()
    }
}

/// Basis of `{x : r·x = 0 for every row r}` restricted to the columns in
/// `columns`, in canonical form (one vector per free column).
pub fn nullspace(rows: &[SparseRow], columns: &[usize]) -> Vec<SparseRow> {
    let ech = Echelon::from_rows(rows.iter().map(|r| {
        r.iter()
            .filter(|(c, _)| columns.binary_search(c).is_ok())
            .map(|(c, v)| (*c, v.clone()))
            .collect::<SparseRow>()
    }));
    let mut out = Vec::new();
    for &free in columns {
        if ech.rows.contains_key(&free) {
            continue;
        }
        let mut x = SparseRow::new();
        x.insert(free, Rational::one());
        for (pivot, row) in ech.rows() {
            if let Some(val) = row.get(&free) {
                x.insert(pivot, -val.clone());
            }
        }
        out.push(x);
    }
    out
}

/// Rank of a dense matrix given as rows.
pub fn dense_rank(rows: &[Vec<Rational>]) -> usize {
    Echelon::from_rows(rows.iter().map(|r| {
        r.iter()
            .enumerate()
            .filter(|(_, v)| !v.is_zero())
            .map(|(i, v)| (i, v.clone()))
            .collect::<SparseRow>()
    }))
    .rank()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::series::rat;

    fn row(entries: &[(usize, i64)]) -> SparseRow {
        entries.iter().map(|(c, v)| (*c, rat(*v))).collect()
    }

    #[test]
    fn rref_is_canonical() {
        let a = Echelon::from_rows([row(&[(0, 1), (1, 1)]), row(&[(0, 1), (1, -1)])]);
        let b = Echelon::from_rows([row(&[(1, 2)]), row(&[(0, 3)])]);
        assert_eq!(a, b);
        assert_eq!(a.rank(), 2);
    }

    #[test]
    fn dependent_rows_do_not_raise_rank() {
        let mut e = Echelon::new();
        assert!(e.insert(row(&[(0, 1), (2, 1)])));
        assert!(!e.insert(row(&[(0, 2), (2, 2)])));
        assert!(e.contains(&row(&[(0, -1), (2, -1)])));
        assert!(!e.contains(&row(&[(2, 1)])));
    }

    #[test]
    fn nullspace_annihilates() {
        let rows = vec![row(&[(0, 1), (1, 1), (2, 1)]), row(&[(1, 1), (2, -1)])];
        let cols = vec![0, 1, 2];
        let ns = nullspace(&rows, &cols);
        assert_eq!(ns.len(), 1);
        for r in &rows {
            let dot: Rational = r
                .iter()
                .map(|(c, v)| v * ns[0].get(c).cloned().unwrap_or_else(Rational::zero))
                .sum();
            assert!(dot.is_zero());
        }
    }
}
