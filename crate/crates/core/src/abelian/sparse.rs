//! Unit-pivot elimination on sparse relation matrices.
//!
//! Nerve complexes have differentials with entries mostly in {-1, 0, 1}, so
//! almost every pivot is a unit. Eliminating those sparsely first leaves a
//! small dense remainder for the Smith routine.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;
use super::normal_form::smith;

type SparseVec = BTreeMap<usize, BigInt>;

/// A generator eliminated by a unit relation: `gen = sum coeff * other`.
#[derive(Debug, Clone)]
pub(crate) struct Substitution {
    pub gen: usize,
    pub expr: Vec<(usize, BigInt)>,
}

/// Matrix stored by columns (relations) with a row occurrence index.
pub(crate) struct SparseElim {
    cols: Vec<Option<SparseVec>>,
    row_index: Vec<BTreeSet<usize>>,
    row_alive: Vec<bool>,
}

impl SparseElim {
    pub fn new(m: &IntMatrix) -> Self {
        let mut cols = Vec::with_capacity(m.cols());
        let mut row_index = vec![BTreeSet::new(); m.rows()];
        for c in 0..m.cols() {
            let mut col = SparseVec::new();
            for (r, index) in row_index.iter_mut().enumerate() {
                let v = m.get(r, c);
                if !v.is_zero() {
                    col.insert(r, v.clone());
                    index.insert(c);
                }
            }
            cols.push(if col.is_empty() { None } else { Some(col) });
        }
        SparseElim {
            cols,
            row_index,
            row_alive: vec![true; m.rows()],
        }
    }

    fn choose_pivot(&self) -> Option<(usize, usize)> {
        let mut best: Option<(usize, usize, usize)> = None;
        for (c, col) in self.cols.iter().enumerate() {
            let Some(col) = col else { continue };
            if best.as_ref().is_some_and(|b| col.len() > b.2) {
                continue;
            }
            let r = col
                .iter()
                .filter(|(_, v)| v.abs().is_one())
                .map(|(&r, _)| r)
                .min_by_key(|&r| (self.row_index[r].len(), r));
            if let Some(r) = r {
                let cost = (col.len() - 1) * self.row_index[r].len().max(1);
                if best.as_ref().is_none_or(|b| cost < b.2) {
                    best = Some((r, c, cost));
                    if cost == 0 {
                        break;
                    }
                }
            }
        }
        best.map(|(r, c, _)| (r, c))
    }

    /// Eliminates unit pivots until none remain, returning the
    /// substitutions in elimination order.
    pub fn eliminate_units(&mut self) -> Vec<Substitution> {
        let mut subs = Vec::new();
        while let Some((r, c)) = self.choose_pivot() {
            let pivot_col = self.cols[c].take().unwrap();
            for &rr in pivot_col.keys() {
                self.row_index[rr].remove(&c);
            }
            let unit = pivot_col[&r].clone();
            let others: Vec<usize> = self.row_index[r].iter().copied().collect();
            for c2 in others {
                let col2 = self.cols[c2].as_mut().unwrap();
                let f = &col2[&r] * &unit;
                for (&rr, v) in &pivot_col {
                    let entry = col2.entry(rr).or_insert_with(BigInt::zero);
                    *entry -= &f * v;
                    if entry.is_zero() {
                        col2.remove(&rr);
                        self.row_index[rr].remove(&c2);
                    } else {
                        self.row_index[rr].insert(c2);
                    }
                }
                if col2.is_empty() {
                    self.cols[c2] = None;
                }
            }
            debug_assert!(self.row_index[r].is_empty());
            self.row_alive[r] = false;
            let expr = pivot_col
                .iter()
                .filter(|(&rr, _)| rr != r)
                .map(|(&rr, v)| (rr, -(v * &unit)))
                .collect();
            subs.push(Substitution { gen: r, expr });
        }
        subs
    }

    pub fn alive_rows(&self) -> Vec<usize> {
        (0..self.row_alive.len())
            .filter(|&r| self.row_alive[r])
            .collect()
    }

    /// Remaining nonzero columns restricted to the surviving rows, dense.
    pub fn remainder(&self) -> (Vec<usize>, IntMatrix) {
        let rows = self.alive_rows();
        let pos: BTreeMap<usize, usize> = rows.iter().enumerate().map(|(i, &r)| (r, i)).collect();
        let cols: Vec<&SparseVec> = self.cols.iter().flatten().collect();
        let mut m = IntMatrix::zeros(rows.len(), cols.len());
        for (c, col) in cols.iter().enumerate() {
            for (r, v) in col.iter() {
                m.set(pos[r], c, v.clone());
            }
        }
        (rows, m)
    }
}

/// Nonzero invariant factors of `m` in divisibility order; their count is the
/// rank of `m`.
pub fn invariant_factors(m: &IntMatrix) -> Vec<BigInt> {
    let mut e = SparseElim::new(m);
    let units = e.eliminate_units().len();
    let (_, rest) = e.remainder();
    let mut out = vec![BigInt::one(); units];
    if rest.rows() > 0 && rest.cols() > 0 {
        out.extend(smith(&rest).diagonal());
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_smith() {
        let a = IntMatrix::from_i64(&[&[2, 4, 0], &[6, 8, 1], &[0, 3, 3], &[1, 1, 1]]);
        let dense = smith(&a).diagonal();
        assert_eq!(invariant_factors(&a), dense);
    }

    #[test]
    fn torsion_survives() {
        let a = IntMatrix::from_i64(&[&[2, 0], &[0, 2]]);
        assert_eq!(
            invariant_factors(&a),
            vec![BigInt::from(2), BigInt::from(2)]
        );
        assert!(invariant_factors(&IntMatrix::zeros(3, 0)).is_empty());
    }
}
