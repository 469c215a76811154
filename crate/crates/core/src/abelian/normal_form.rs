use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::matrix::IntMatrix;

/// Row Hermite normal form.
///
/// Returns `(H, U)` with `U` unimodular and `H = U * M` upper echelon: each
/// pivot is positive and the entries above a pivot lie in `[0, pivot)`.
pub fn hnf(m: &IntMatrix) -> (IntMatrix, IntMatrix) {
    let (h, u, _) = hnf_rank(m);
    (h, u)
}

/// As [`hnf`], also returning the rank (number of nonzero rows of `H`).
pub fn hnf_rank(m: &IntMatrix) -> (IntMatrix, IntMatrix, usize) {
    let rows = m.rows();
    let cols = m.cols();
    let mut h = m.clone();
    let mut u = IntMatrix::identity(rows);
    let mut p = 0;
    for c in 0..cols {
        if p == rows {
            break;
        }
        loop {
            let best = (p..rows)
                .filter(|&r| !h.get(r, c).is_zero())
                .min_by(|&a, &b| h.get(a, c).abs().cmp(&h.get(b, c).abs()));
            let Some(best) = best else { break };
            h.swap_rows(p, best);
            u.swap_rows(p, best);
            let mut clean = true;
            for r in p + 1..rows {
                if h.get(r, c).is_zero() {
                    continue;
                }
                let q = -(h.get(r, c) / h.get(p, c));
                h.add_row_multiple(r, p, &q);
                u.add_row_multiple(r, p, &q);
                if !h.get(r, c).is_zero() {
                    clean = false;
                }
            }
            if clean {
                break;
            }
        }
        if h.get(p, c).is_zero() {
            continue;
        }
        if h.get(p, c).is_negative() {
            h.negate_row(p);
            u.negate_row(p);
        }
        let pivot = h.get(p, c).clone();
        for r in 0..p {
            let q = -h.get(r, c).div_floor(&pivot);
            h.add_row_multiple(r, p, &q);
            u.add_row_multiple(r, p, &q);
        }
        p += 1;
    }
    (h, u, p)
}

/// Full Smith decomposition `U * M * V = S`, with the inverse of `U` kept
/// alongside so presentations can be transported in both directions.
#[derive(Debug, Clone)]
pub struct SmithDecomposition {
    pub s: IntMatrix,
    pub u: IntMatrix,
    pub u_inv: IntMatrix,
    pub v: IntMatrix,
    pub rank: usize,
}

impl SmithDecomposition {
    /// Diagonal entries `d_1 | d_2 | ... | d_rank`, all positive.
    pub fn diagonal(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.s.get(i, i).clone()).collect()
    }
}

/// Smith normal form `(S, U, V)` with `S = U * M * V`.
pub fn snf(m: &IntMatrix) -> (IntMatrix, IntMatrix, IntMatrix) {
    let d = smith(m);
    (d.s, d.u, d.v)
}

struct Tracker {
    a: IntMatrix,
    u: IntMatrix,
    u_inv: IntMatrix,
    v: IntMatrix,
}

impl Tracker {
    fn swap_rows(&mut self, i: usize, j: usize) {
        self.a.swap_rows(i, j);
        self.u.swap_rows(i, j);
        self.u_inv.swap_cols(i, j);
    }

    fn swap_cols(&mut self, i: usize, j: usize) {
        self.a.swap_cols(i, j);
        self.v.swap_cols(i, j);
    }

    /// row[target] += k * row[source]
    fn add_row(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_row_multiple(target, source, k);
        self.u.add_row_multiple(target, source, k);
        self.u_inv.add_col_multiple(source, target, &-k);
    }

    fn add_col(&mut self, target: usize, source: usize, k: &BigInt) {
        self.a.add_col_multiple(target, source, k);
        self.v.add_col_multiple(target, source, k);
    }

    fn negate_row(&mut self, i: usize) {
        self.a.negate_row(i);
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form with smallest-nonzero pivoting.
pub fn smith(m: &IntMatrix) -> SmithDecomposition {
    let rows = m.rows();
    let cols = m.cols();
    let mut t = Tracker {
        a: m.clone(),
        u: IntMatrix::identity(rows),
        u_inv: IntMatrix::identity(rows),
        v: IntMatrix::identity(cols),
    };
    let mut k = 0;
    while k < rows.min(cols) {
        let Some((pr, pc)) = smallest_entry(&t.a, k, k) else {
            break;
        };
        t.swap_rows(k, pr);
        t.swap_cols(k, pc);
        loop {
            let mut clean = true;
            for r in k + 1..rows {
                if t.a.get(r, k).is_zero() {
                    continue;
                }
                let q = -(t.a.get(r, k) / t.a.get(k, k));
                t.add_row(r, k, &q);
                if !t.a.get(r, k).is_zero() {
                    clean = false;
                }
            }
            for c in k + 1..cols {
                if t.a.get(k, c).is_zero() {
                    continue;
                }
                let q = -(t.a.get(k, c) / t.a.get(k, k));
                t.add_col(c, k, &q);
                if !t.a.get(k, c).is_zero() {
                    clean = false;
                }
            }
            if !clean {
                let best = pivot_in_cross(&t.a, k);
                if best.0 != k {
                    t.swap_rows(k, best.0);
                }
                if best.1 != k {
                    t.swap_cols(k, best.1);
                }
                continue;
            }
            // Row and column are clear; enforce divisibility of the rest.
            let pivot = t.a.get(k, k).clone();
            let offender = (k + 1..rows).find(|&r| {
                (k + 1..cols)
                    .any(|c| !t.a.get(r, c).is_zero() && !t.a.get(r, c).is_multiple_of(&pivot))
            });
            match offender {
                Some(r) => t.add_row(k, r, &BigInt::one()),
                None => break,
            }
        }
        if t.a.get(k, k).is_negative() {
            t.negate_row(k);
        }
        k += 1;
    }
    SmithDecomposition {
        s: t.a,
        u: t.u,
        u_inv: t.u_inv,
        v: t.v,
        rank: k,
    }
}

fn smallest_entry(a: &IntMatrix, r0: usize, c0: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for r in r0..a.rows() {
        for c in c0..a.cols() {
            let v = a.get(r, c);
            if v.is_zero() {
                continue;
            }
            let av = v.abs();
            if best.as_ref().is_none_or(|b| av < b.2) {
                let unit = av.is_one();
                best = Some((r, c, av));
                if unit {
                    let b = best.unwrap();
                    return Some((b.0, b.1));
                }
            }
        }
    }
    best.map(|b| (b.0, b.1))
}

/// Smallest nonzero entry in row `k` or column `k` at or beyond the diagonal.
fn pivot_in_cross(a: &IntMatrix, k: usize) -> (usize, usize) {
    let mut best = (k, k);
    let mut best_abs = a.get(k, k).abs();
    for r in k + 1..a.rows() {
        let v = a.get(r, k);
        if !v.is_zero() && (best_abs.is_zero() || v.abs() < best_abs) {
            best = (r, k);
            best_abs = v.abs();
        }
    }
    for c in k + 1..a.cols() {
        let v = a.get(k, c);
        if !v.is_zero() && (best_abs.is_zero() || v.abs() < best_abs) {
            best = (k, c);
            best_abs = v.abs();
        }
    }
    best
}

/// Columns form a Z-basis of `{x : M x = 0}`.
pub fn kernel_lattice(m: &IntMatrix) -> IntMatrix {
    let n = m.cols();
    let (_, u, rank) = hnf_rank(&m.transpose());
    let rows: Vec<usize> = (rank..n).collect();
    u.select_rows(&rows).transpose()
}

/// A sublattice of `Z^d`, stored as the nonzero rows of a row Hermite form.
///
/// The Hermite form is canonical, so two lattices are equal exactly when
/// their stored bases are.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Lattice {
    dim: usize,
    basis: IntMatrix,
    pivots: Vec<usize>,
}

impl Lattice {
    /// The lattice spanned by the columns of `gens`.
    pub fn from_columns(gens: &IntMatrix) -> Self {
        let (h, _, rank) = hnf_rank(&gens.transpose());
        let keep: Vec<usize> = (0..rank).collect();
        let basis = h.select_rows(&keep);
        let pivots = (0..rank)
            .map(|r| {
                (0..basis.cols())
                    .find(|&c| !basis.get(r, c).is_zero())
                    .unwrap()
            })
            .collect();
        Lattice {
            dim: gens.rows(),
            basis,
            pivots,
        }
    }

    pub fn zero(dim: usize) -> Self {
        Lattice {
            dim,
            basis: IntMatrix::zeros(0, dim),
            pivots: Vec::new(),
        }
    }

    pub fn ambient_dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Basis vectors as the columns of a `dim x rank` matrix.
    pub fn basis_columns(&self) -> IntMatrix {
        self.basis.transpose()
    }

    /// Coordinates of `v` in the stored basis, if `v` lies in the lattice.
    pub fn coordinates(&self, v: &[BigInt]) -> Option<Vec<BigInt>> {
        assert_eq!(v.len(), self.dim, "vector length does not match lattice");
        let mut rest = v.to_vec();
        let mut coords = Vec::with_capacity(self.rank());
        for (i, &c) in self.pivots.iter().enumerate() {
            let pivot = self.basis.get(i, c);
            let (q, r) = rest[c].div_rem(pivot);
            if !r.is_zero() {
                return None;
            }
            if !q.is_zero() {
                for (j, entry) in rest.iter_mut().enumerate().skip(c) {
                    let b = self.basis.get(i, j);
                    if !b.is_zero() {
                        *entry -= &q * b;
                    }
                }
            }
            coords.push(q);
        }
        rest.iter().all(Zero::is_zero).then_some(coords)
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        self.coordinates(v).is_some()
    }

    pub fn contains_columns(&self, m: &IntMatrix) -> bool {
        (0..m.cols()).all(|c| self.contains(&m.column(c)))
    }

    /// Coordinates of every column of `m`, as the columns of a
    /// `rank x m.cols()` matrix.
    pub fn coordinate_matrix(&self, m: &IntMatrix) -> Option<IntMatrix> {
        let cols = (0..m.cols())
            .map(|c| self.coordinates(&m.column(c)))
            .collect::<Option<Vec<_>>>()?;
        Some(IntMatrix::from_columns(self.rank(), &cols))
    }

    pub fn is_sublattice_of(&self, other: &Lattice) -> bool {
        self.dim == other.dim && other.contains_columns(&self.basis_columns())
    }

    pub fn sum(&self, other: &Lattice) -> Lattice {
        Lattice::from_columns(&self.basis_columns().hstack(&other.basis_columns()))
    }
}
