//! Dense and sparse rational matrices.

use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use super::rational::{rat, Rational};
use crate::error::{Error, Result};

/// Read access shared by the dense and sparse representations.
pub trait ExactMatrix {
    fn nrows(&self) -> usize;
    fn ncols(&self) -> usize;
    /// Nonzero entries of row `r` in increasing column order.
    fn row_nonzeros(&self, r: usize) -> Vec<(usize, Rational)>;
    fn nnz(&self) -> usize;

    fn density(&self) -> f64 {
        let cells = self.nrows() * self.ncols();
        if cells == 0 {
            0.0
        } else {
            self.nnz() as f64 / cells as f64
        }
    }
}

/// Dense row-major rational matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatQ {
    rows: usize,
    cols: usize,
    entries: Vec<Rational>,
}

impl MatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Rational::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Rational::one();
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, entries: Vec<Rational>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(Error::Shape {
                expected: format!("{} entries", rows * cols),
                found: format!("{}", entries.len()),
            });
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Builds from integer rows; panics on ragged input.
    pub fn from_i64_rows(rows: &[Vec<i64>]) -> Self {
        let cols = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|r| r.len() == cols), "ragged rows");
        Self {
            rows: rows.len(),
            cols,
            entries: rows.iter().flatten().map(|&v| rat(v)).collect(),
        }
    }

    pub fn diagonal(values: &[Rational]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = v.clone();
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn entries(&self) -> &[Rational] {
        &self.entries
    }

    pub fn row(&self, r: usize) -> &[Rational] {
        &self.entries[r * self.cols..(r + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)].clone();
            }
        }
        t
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Shape {
                expected: format!("vector of length {}", self.cols),
                found: format!("{}", v.len()),
            });
        }
        Ok((0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .filter(|(a, b)| !a.is_zero() && !b.is_zero())
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect())
    }

    pub fn try_mul(&self, other: &MatQ) -> Result<MatQ> {
        if self.cols != other.rows {
            return Err(Error::Shape {
                expected: format!("{} rows", self.cols),
                found: format!("{}", other.rows),
            });
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = &self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = &other[(k, j)];
                    if !b.is_zero() {
                        out[(i, j)] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    fn check_same_shape(&self, other: &MatQ) -> Result<()> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Shape {
                expected: format!("{}x{}", self.rows, self.cols),
                found: format!("{}x{}", other.rows, other.cols),
            });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &MatQ) -> Result<MatQ> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    pub fn try_sub(&self, other: &MatQ) -> Result<MatQ> {
        self.check_same_shape(other)?;
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a - b)
                .collect(),
        })
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<MatQ> {
        if !self.is_square() {
            return Err(Error::Shape {
                expected: "square matrix".into(),
                found: format!("{}x{}", self.rows, self.cols),
            });
        }
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for c in 0..n {
            let p = (c..n)
                .find(|&r| !a[(r, c)].is_zero())
                .ok_or(Error::SingularMatrix)?;
            if p != c {
                for j in 0..n {
                    a.entries.swap(p * n + j, c * n + j);
                    inv.entries.swap(p * n + j, c * n + j);
                }
            }
            let piv_inv = a[(c, c)].recip();
            for j in 0..n {
                if !a[(c, j)].is_zero() {
                    a[(c, j)] *= &piv_inv;
                }
                if !inv[(c, j)].is_zero() {
                    inv[(c, j)] *= &piv_inv;
                }
            }
            for r in 0..n {
                if r == c || a[(r, c)].is_zero() {
                    continue;
                }
                let f = a[(r, c)].clone();
                for j in 0..n {
                    if !a[(c, j)].is_zero() {
                        let d = &f * &a[(c, j)];
                        a[(r, j)] -= d;
                    }
                    if !inv[(c, j)].is_zero() {
                        let d = &f * &inv[(c, j)];
                        inv[(r, j)] -= d;
                    }
                }
            }
        }
        Ok(inv)
    }

    /// Determinant of the submatrix on the given rows and columns
    /// (cofactor expansion; meant for 2x2 and 3x3 minors).
    pub fn minor(&self, rows: &[usize], cols: &[usize]) -> Rational {
        debug_assert_eq!(rows.len(), cols.len());
        match rows.len() {
            0 => Rational::one(),
            1 => self[(rows[0], cols[0])].clone(),
            2 => {
                &self[(rows[0], cols[0])] * &self[(rows[1], cols[1])]
                    - &self[(rows[0], cols[1])] * &self[(rows[1], cols[0])]
            }
            k => {
                let mut acc = Rational::zero();
                for (j, &c) in cols.iter().enumerate() {
                    let a = &self[(rows[0], c)];
                    if a.is_zero() {
                        continue;
                    }
                    let sub_cols: Vec<usize> =
                        cols.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, &x)| x).collect();
                    let m = a * self.minor(&rows[1..k], &sub_cols);
                    if j % 2 == 0 {
                        acc += m;
                    } else {
                        acc -= m;
                    }
                }
                acc
            }
        }
    }

    pub fn to_sparse(&self) -> SparseMatQ {
        let mut triplets = Vec::new();
        for i in 0..self.rows {
            for j in 0..self.cols {
                if !self[(i, j)].is_zero() {
                    triplets.push((i, j, self[(i, j)].clone()));
                }
            }
        }
        SparseMatQ::from_sorted_unchecked(self.rows, self.cols, triplets)
    }
}

impl std::ops::Index<(usize, usize)> for MatQ {
    type Output = Rational;
    fn index(&self, (i, j): (usize, usize)) -> &Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &self.entries[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for MatQ {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Rational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of bounds");
        &mut self.entries[i * self.cols + j]
    }
}

impl Mul for &MatQ {
    type Output = MatQ;
    fn mul(self, rhs: &MatQ) -> MatQ {
        self.try_mul(rhs).expect("dimension mismatch in matrix product")
    }
}

impl Add for &MatQ {
    type Output = MatQ;
    fn add(self, rhs: &MatQ) -> MatQ {
        self.try_add(rhs).expect("dimension mismatch in matrix sum")
    }
}

impl Sub for &MatQ {
    type Output = MatQ;
    fn sub(self, rhs: &MatQ) -> MatQ {
        self.try_sub(rhs).expect("dimension mismatch in matrix difference")
    }
}

impl Neg for &MatQ {
    type Output = MatQ;
    fn neg(self) -> MatQ {
        self.scale(&rat(-1))
    }
}

impl ExactMatrix for MatQ {
    fn nrows(&self) -> usize {
        self.rows
    }
    fn ncols(&self) -> usize {
        self.cols
    }
    fn row_nonzeros(&self, r: usize) -> Vec<(usize, Rational)> {
        self.row(r)
            .iter()
            .enumerate()
            .filter(|(_, q)| !q.is_zero())
            .map(|(c, q)| (c, q.clone()))
            .collect()
    }
    fn nnz(&self) -> usize {
        self.entries.iter().filter(|q| !q.is_zero()).count()
    }
}

/// Sparse rational matrix in coordinate form, kept sorted by `(row, col)`
/// with no duplicates and no stored zeros.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseMatQ {
    rows: usize,
    cols: usize,
    triplets: Vec<(usize, usize, Rational)>,
    row_ptr: Vec<usize>,
}

impl SparseMatQ {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self::from_sorted_unchecked(rows, cols, Vec::new())
    }

    /// Sorts, sums duplicates and drops zeros.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut triplets: Vec<(usize, usize, Rational)>,
    ) -> Result<Self> {
        if let Some(&(r, c, _)) = triplets.iter().find(|(r, c, _)| *r >= rows || *c >= cols) {
            return Err(Error::IndexOutOfRange(format!(
                "entry ({r},{c}) outside {rows}x{cols}"
            )));
        }
        triplets.sort_by(|x, y| (x.0, x.1).cmp(&(y.0, y.1)));
        let mut merged: Vec<(usize, usize, Rational)> = Vec::with_capacity(triplets.len());
        for (r, c, v) in triplets {
            match merged.last_mut() {
                Some(last) if last.0 == r && last.1 == c => last.2 += v,
                _ => merged.push((r, c, v)),
            }
        }
        merged.retain(|t| !t.2.is_zero());
        Ok(Self::from_sorted_unchecked(rows, cols, merged))
    }

    /// Builds column by column: `columns[j]` lists `(row, value)` pairs of
    /// column `j` (distinct rows, nonzero values).
    pub fn from_columns(rows: usize, columns: Vec<Vec<(usize, Rational)>>) -> Result<Self> {
        let cols = columns.len();
        let triplets = columns
            .into_iter()
            .enumerate()
            .flat_map(|(j, col)| col.into_iter().map(move |(i, v)| (i, j, v)))
            .collect();
        Self::from_triplets(rows, cols, triplets)
    }

    fn from_sorted_unchecked(rows: usize, cols: usize, triplets: Vec<(usize, usize, Rational)>) -> Self {
        let mut row_ptr = vec![0usize; rows + 1];
        for t in &triplets {
            row_ptr[t.0 + 1] += 1;
        }
        for i in 0..rows {
            row_ptr[i + 1] += row_ptr[i];
        }
        Self {
            rows,
            cols,
            triplets,
            row_ptr,
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn triplets(&self) -> &[(usize, usize, Rational)] {
        &self.triplets
    }

    pub fn get(&self, r: usize, c: usize) -> Rational {
        let row = &self.triplets[self.row_ptr[r]..self.row_ptr[r + 1]];
        row.binary_search_by_key(&c, |t| t.1)
            .map(|k| row[k].2.clone())
            .unwrap_or_else(|_| Rational::zero())
    }

    pub fn to_dense(&self) -> MatQ {
        let mut m = MatQ::zeros(self.rows, self.cols);
        for (r, c, v) in &self.triplets {
            m[(*r, *c)] = v.clone();
        }
        m
    }

    pub fn transpose(&self) -> SparseMatQ {
        let t = self.triplets.iter().map(|(r, c, v)| (*c, *r, v.clone())).collect();
        Self::from_triplets(self.cols, self.rows, t).expect("transpose stays in range")
    }

    /// Column `j` as a dense vector.
    pub fn column(&self, j: usize) -> Vec<Rational> {
        let mut out = vec![Rational::zero(); self.rows];
        for (r, c, v) in &self.triplets {
            if *c == j {
                out[*r] = v.clone();
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Rational]) -> Result<Vec<Rational>> {
        if v.len() != self.cols {
            return Err(Error::Shape {
                expected: format!("vector of length {}", self.cols),
                found: format!("{}", v.len()),
            });
        }
        let mut out = vec![Rational::zero(); self.rows];
        for (r, c, a) in &self.triplets {
            if !v[*c].is_zero() {
                out[*r] += a * &v[*c];
            }
        }
        Ok(out)
    }
}

impl ExactMatrix for SparseMatQ {
    fn nrows(&self) -> usize {
        self.rows
    }
    fn ncols(&self) -> usize {
        self.cols
    }
    fn row_nonzeros(&self, r: usize) -> Vec<(usize, Rational)> {
        self.triplets[self.row_ptr[r]..self.row_ptr[r + 1]]
            .iter()
            .map(|(_, c, v)| (*c, v.clone()))
            .collect()
    }
    fn nnz(&self) -> usize {
        self.triplets.len()
    }
}
