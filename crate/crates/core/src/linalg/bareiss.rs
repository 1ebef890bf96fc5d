//! Exact rank and nullspace over the rationals.
//!
//! Dense input goes through fraction-free Bareiss elimination on integer
//! rows (denominators cleared row by row). Sparse input with low density is
//! eliminated with sparse integer rows, removing row content after each
//! update to keep entries small; it is densified above a density threshold.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::matrix::ExactMatrix;
use super::modular::{independent_rows, DEFAULT_PRIME};
use super::rational::{bit_len, primitive_integer_row, Rational};

/// Sparse input denser than this is eliminated densely.
pub const SPARSE_DENSITY_THRESHOLD: f64 = 0.20;
/// Sparse input with fewer columns than this is eliminated densely.
pub const SPARSE_MIN_COLS: usize = 64;

/// Integer row-echelon form: `rows[k]` has its leading nonzero at
/// `pivot_cols[k]`, and `pivot_cols` is strictly increasing. The pivot
/// columns are the lexicographically first set of independent columns.
#[derive(Debug, Clone)]
pub struct Echelon {
    pub cols: usize,
    pub pivot_cols: Vec<usize>,
    pub rows: Vec<Vec<BigInt>>,
}

impl Echelon {
    pub fn rank(&self) -> usize {
        self.pivot_cols.len()
    }
}

fn use_sparse_path<M: ExactMatrix + ?Sized>(m: &M) -> bool {
    m.ncols() >= SPARSE_MIN_COLS && m.density() <= SPARSE_DENSITY_THRESHOLD
}

fn dense_integer_rows<M: ExactMatrix + ?Sized>(m: &M) -> Vec<Vec<BigInt>> {
    (0..m.nrows())
        .map(|r| {
            let mut row = vec![BigInt::zero(); m.ncols()];
            for (c, v) in primitive_integer_row(&m.row_nonzeros(r)) {
                row[c] = v;
            }
            row
        })
        .filter(|row| row.iter().any(|v| !v.is_zero()))
        .collect()
}

/// Fraction-free Bareiss elimination with minimal-bit-length pivoting.
///
/// After step `k` every entry of the active block is a `(k+1) x (k+1)` minor
/// of the input, so each division by the previous pivot is exact.
pub fn bareiss_dense(mut a: Vec<Vec<BigInt>>, cols: usize) -> Echelon {
    let nrows = a.len();
    let mut prev = BigInt::one();
    let mut r = 0;
    let mut pivot_cols = Vec::new();
    for c in 0..cols {
        if r == nrows {
            break;
        }
        let pick = (r..nrows)
            .filter(|&i| !a[i][c].is_zero())
            .min_by_key(|&i| bit_len(&a[i][c]));
        let Some(p) = pick else { continue };
        a.swap(r, p);
        let (top, rest) = a.split_at_mut(r + 1);
        let pivot_row = &top[r];
        let pivot = &pivot_row[c];
        for row in rest.iter_mut() {
            let factor = std::mem::take(&mut row[c]);
            if factor.is_zero() {
                for j in c + 1..cols {
                    if !row[j].is_zero() {
                        let v = &row[j] * pivot;
                        row[j] = if prev.is_one() { v } else { exact_div(v, &prev) };
                    }
                }
            } else {
                for j in c + 1..cols {
                    let rj = &pivot_row[j];
                    let v = if row[j].is_zero() {
                        if rj.is_zero() {
                            continue;
                        }
                        -(&factor * rj)
                    } else if rj.is_zero() {
                        &row[j] * pivot
                    } else {
                        &row[j] * pivot - &factor * rj
                    };
                    row[j] = if prev.is_one() { v } else { exact_div(v, &prev) };
                }
            }
        }
        prev = a[r][c].clone();
        pivot_cols.push(c);
        r += 1;
    }
    a.truncate(r);
    Echelon {
        cols,
        pivot_cols,
        rows: a,
    }
}

#[inline]
fn exact_div(v: BigInt, d: &BigInt) -> BigInt {
    debug_assert!((&v % d).is_zero(), "Bareiss division must be exact");
    v / d
}

fn make_primitive(row: &mut BTreeMap<usize, BigInt>) {
    let g = row.values().fold(BigInt::zero(), |g, v| g.gcd(v));
    if !g.is_zero() && !g.is_one() {
        for v in row.values_mut() {
            *v /= &g;
        }
    }
}

/// Fraction-free elimination on sparse integer rows. Rows without an entry
/// in the pivot column are left untouched; updated rows are divided by their
/// content.
pub fn eliminate_sparse<M: ExactMatrix + ?Sized>(m: &M) -> Echelon {
    let cols = m.ncols();
    let mut active: Vec<BTreeMap<usize, BigInt>> = (0..m.nrows())
        .map(|r| primitive_integer_row(&m.row_nonzeros(r)).into_iter().collect())
        .filter(|row: &BTreeMap<usize, BigInt>| !row.is_empty())
        .collect();
    let mut pivot_cols = Vec::new();
    let mut rows = Vec::new();
    for c in 0..cols {
        if active.is_empty() {
            break;
        }
        // rows are kept with all entries at columns >= c
        let pick = active
            .iter()
            .enumerate()
            .filter_map(|(i, row)| row.get(&c).map(|v| (i, bit_len(v), row.len())))
            .min_by_key(|&(_, bits, len)| (len, bits));
        let Some((p, _, _)) = pick else { continue };
        let pivot_row = active.swap_remove(p);
        let pivot = pivot_row[&c].clone();
        for row in active.iter_mut() {
            let Some(factor) = row.remove(&c) else { continue };
            let g = pivot.gcd(&factor);
            let (mp, mf) = (&pivot / &g, &factor / &g);
            for v in row.values_mut() {
                *v *= &mp;
            }
            for (&j, pv) in pivot_row.range(c + 1..) {
                let e = row.entry(j).or_insert_with(BigInt::zero);
                *e -= &mf * pv;
                if e.is_zero() {
                    row.remove(&j);
                }
            }
            make_primitive(row);
        }
        active.retain(|row| !row.is_empty());
        let mut dense = vec![BigInt::zero(); cols];
        for (j, v) in pivot_row {
            dense[j] = v;
        }
        rows.push(dense);
        pivot_cols.push(c);
    }
    Echelon {
        cols,
        pivot_cols,
        rows,
    }
}

/// Integer echelon form of `m`, choosing the sparse or dense path.
pub fn echelon<M: ExactMatrix + ?Sized>(m: &M) -> Echelon {
    if use_sparse_path(m) {
        eliminate_sparse(m)
    } else {
        bareiss_dense(dense_integer_rows(m), m.ncols())
    }
}

/// Exact rank over the rationals; 0 for empty matrices.
///
/// Tall dense input is first reduced to a candidate set of rows that are
/// independent modulo [`DEFAULT_PRIME`]. If Bareiss on those rows alone
/// reaches full column rank, that is the rank of `m`; otherwise the whole
/// matrix is eliminated.
pub fn bareiss_rank<M: ExactMatrix + ?Sized>(m: &M) -> usize {
    let cols = m.ncols();
    if m.nrows() > cols && !use_sparse_path(m) {
        if let Ok(picked) = independent_rows(m, DEFAULT_PRIME) {
            if picked.len() == cols {
                let rows: Vec<Vec<BigInt>> = picked
                    .iter()
                    .map(|&r| {
                        let mut row = vec![BigInt::zero(); cols];
                        for (c, v) in primitive_integer_row(&m.row_nonzeros(r)) {
                            row[c] = v;
                        }
                        row
                    })
                    .collect();
                let rank = bareiss_dense(rows, cols).rank();
                if rank == cols {
                    return rank;
                }
            }
        }
    }
    echelon(m).rank()
}

/// Right nullspace basis in reduced-echelon parametrization: one vector per
/// free column (in increasing order), with that coordinate equal to 1 and
/// the other free coordinates 0.
pub fn kernel_basis<M: ExactMatrix + ?Sized>(m: &M) -> Vec<Vec<Rational>> {
    kernel_from_echelon(&echelon(m))
}

pub fn kernel_from_echelon(e: &Echelon) -> Vec<Vec<Rational>> {
    let cols = e.cols;
    let mut is_pivot = vec![false; cols];
    for &c in &e.pivot_cols {
        is_pivot[c] = true;
    }
    let free: Vec<usize> = (0..cols).filter(|&c| !is_pivot[c]).collect();
    if free.is_empty() {
        return Vec::new();
    }
    // Back-substitution per free column, bottom pivot row first.
    free.iter()
        .map(|&f| {
            let mut x = vec![Rational::zero(); cols];
            x[f] = Rational::one();
            for (row, &pc) in e.rows.iter().zip(&e.pivot_cols).rev() {
                let mut acc = Rational::zero();
                for j in pc + 1..cols {
                    if !row[j].is_zero() && !x[j].is_zero() {
                        acc += Rational::from_integer(row[j].clone()) * &x[j];
                    }
                }
                if !acc.is_zero() {
                    x[pc] = -acc / Rational::from_integer(row[pc].clone());
                }
            }
            x
        })
        .collect()
}
