use std::fmt;
use std::ops::{Index, IndexMut, Mul};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Dense matrix of arbitrary-precision integers, row-major.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        IntMatrix {
            rows,
            cols,
            data: vec![BigInt::zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = BigInt::one();
        }
        m
    }

    /// Builds a matrix from rows; every row must have `cols` entries.
    pub fn from_rows<T>(cols: usize, rows: &[Vec<T>]) -> Self
    where
        T: Clone + Into<BigInt>,
    {
        let mut data = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            assert_eq!(row.len(), cols, "ragged row in IntMatrix::from_rows");
            data.extend(row.iter().cloned().map(Into::into));
        }
        IntMatrix {
            rows: rows.len(),
            cols,
            data,
        }
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for r in 0..rows {
            for c in 0..cols {
                data.push(f(r, c));
            }
        }
        IntMatrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn row(&self, r: usize) -> &[BigInt] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<BigInt> {
        (0..self.rows).map(|r| self[(r, c)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |r, c| self[(c, r)].clone())
    }

    pub fn mul_vec(&self, v: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub(crate) fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for c in 0..self.cols {
            self.data.swap(a * self.cols + c, b * self.cols + c);
        }
    }

    pub(crate) fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for r in 0..self.rows {
            self.data.swap(r * self.cols + a, r * self.cols + b);
        }
    }

    /// row[target] += factor * row[source]
    pub(crate) fn add_row_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for c in 0..self.cols {
            let delta = &self.data[source * self.cols + c] * factor;
            self.data[target * self.cols + c] += delta;
        }
    }

    /// col[target] += factor * col[source]
    pub(crate) fn add_col_multiple(&mut self, target: usize, source: usize, factor: &BigInt) {
        if factor.is_zero() {
            return;
        }
        for r in 0..self.rows {
            let delta = &self.data[r * self.cols + source] * factor;
            self.data[r * self.cols + target] += delta;
        }
    }

    pub(crate) fn negate_row(&mut self, r: usize) {
        for c in 0..self.cols {
            let v = std::mem::take(&mut self.data[r * self.cols + c]);
            self.data[r * self.cols + c] = -v;
        }
    }

    /// Rank over the rationals, by fraction-free elimination.
    ///
    /// Runs in checked `i64` first and falls back to big integers on overflow.
    pub fn rank(&self) -> usize {
        if let Some(small) = self.to_i64_rows() {
            if let Some(rank) = bareiss_rank_i64(small, self.cols) {
                return rank;
            }
        }
        bareiss_rank_big(self.to_rows(), self.cols)
    }

    fn to_i64_rows(&self) -> Option<Vec<Vec<i64>>> {
        (0..self.rows)
            .map(|r| self.row(r).iter().map(ToPrimitive::to_i64).collect())
            .collect()
    }

    /// Determinant of a square matrix (Bareiss). `None` if not square.
    pub fn determinant(&self) -> Option<BigInt> {
        if self.rows != self.cols {
            return None;
        }
        let n = self.rows;
        if n == 0 {
            return Some(BigInt::one());
        }
        let mut m = self.to_rows();
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..n {
            let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
                return Some(BigInt::zero());
            };
            if p != k {
                m.swap(p, k);
                sign = -sign;
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let v = &m[k][k] * &m[i][j] - &m[i][k] * &m[k][j];
                    m[i][j] = v / &prev;
                }
                m[i][k] = BigInt::zero();
            }
            prev = m[k][k].clone();
        }
        Some(sign * &m[n - 1][n - 1])
    }

    /// Solves `self * x = rhs` for a square nonsingular matrix over the rationals.
    pub fn solve_rational(&self, rhs: &[BigInt]) -> Option<Vec<BigRational>> {
        if self.rows != self.cols || rhs.len() != self.rows {
            return None;
        }
        let n = self.rows;
        let mut aug: Vec<Vec<BigRational>> = (0..n)
            .map(|r| {
                let mut row: Vec<BigRational> = self
                    .row(r)
                    .iter()
                    .map(|v| BigRational::from_integer(v.clone()))
                    .collect();
                row.push(BigRational::from_integer(rhs[r].clone()));
                row
            })
            .collect();
        for k in 0..n {
            let p = (k..n).find(|&r| !aug[r][k].is_zero())?;
            aug.swap(p, k);
            let pivot = aug[k][k].clone();
            for v in aug[k].iter_mut() {
                *v /= &pivot;
            }
            for i in 0..n {
                if i != k && !aug[i][k].is_zero() {
                    let f = aug[i][k].clone();
                    for j in k..=n {
                        let delta = &f * &aug[k][j];
                        aug[i][j] -= delta;
                    }
                }
            }
        }
        Some(aug.into_iter().map(|mut row| row.pop().unwrap()).collect())
    }

    /// Inverse of a unimodular matrix; `None` if the matrix is not square
    /// or its determinant is not ±1.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix> {
        let det = self.determinant()?;
        if det.abs() != BigInt::one() {
            return None;
        }
        let n = self.rows;
        let mut inv = IntMatrix::zeros(n, n);
        for c in 0..n {
            let mut e = vec![BigInt::zero(); n];
            e[c] = BigInt::one();
            let x = self.solve_rational(&e)?;
            for (r, v) in x.into_iter().enumerate() {
                if !v.is_integer() {
                    return None;
                }
                inv[(r, c)] = v.to_integer();
            }
        }
        Some(inv)
    }
}

fn bareiss_rank_i64(mut m: Vec<Vec<i64>>, cols: usize) -> Option<usize> {
    let rows = m.len();
    let mut rank = 0;
    let mut prev: i64 = 1;
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(p, rank);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let a = m[rank][col].checked_mul(m[i][j])?;
                let b = m[i][col].checked_mul(m[rank][j])?;
                m[i][j] = a.checked_sub(b)? / prev;
            }
            m[i][col] = 0;
        }
        prev = m[rank][col];
        rank += 1;
    }
    Some(rank)
}

fn bareiss_rank_big(mut m: Vec<Vec<BigInt>>, cols: usize) -> usize {
    let rows = m.len();
    let mut rank = 0;
    let mut prev = BigInt::one();
    for col in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(p, rank);
        for i in rank + 1..rows {
            for j in col + 1..cols {
                let v = &m[rank][col] * &m[i][j] - &m[i][col] * &m[rank][j];
                debug_assert!(v.is_multiple_of(&prev));
                m[i][j] = v / &prev;
            }
            m[i][col] = BigInt::zero();
        }
        prev = m[rank][col].clone();
        rank += 1;
    }
    rank
}

/// Rank over GF(2).
pub fn rank_mod2(m: &IntMatrix) -> usize {
    let words = m.cols().div_ceil(64).max(1);
    let mut rows: Vec<Vec<u64>> = (0..m.rows())
        .map(|r| {
            let mut bits = vec![0u64; words];
            for (c, v) in m.row(r).iter().enumerate() {
                if v.is_odd() {
                    bits[c / 64] |= 1 << (c % 64);
                }
            }
            bits
        })
        .collect();
    let mut rank = 0;
    for col in 0..m.cols() {
        let (w, b) = (col / 64, 1u64 << (col % 64));
        let Some(p) = (rank..rows.len()).find(|&r| rows[r][w] & b != 0) else {
            continue;
        };
        rows.swap(p, rank);
        for r in 0..rows.len() {
            if r != rank && rows[r][w] & b != 0 {
                for k in 0..words {
                    let x = rows[rank][k];
                    rows[r][k] ^= x;
                }
            }
        }
        rank += 1;
    }
    rank
}

impl Index<(usize, usize)> for IntMatrix {
    type Output = BigInt;

    fn index(&self, (r, c): (usize, usize)) -> &BigInt {
        assert!(r < self.rows && c < self.cols, "IntMatrix index out of range");
        &self.data[r * self.cols + c]
    }
}

impl IndexMut<(usize, usize)> for IntMatrix {
    fn index_mut(&mut self, (r, c): (usize, usize)) -> &mut BigInt {
        assert!(r < self.rows && c < self.cols, "IntMatrix index out of range");
        &mut self.data[r * self.cols + c]
    }
}

impl Mul for &IntMatrix {
    type Output = IntMatrix;

    fn mul(self, rhs: &IntMatrix) -> IntMatrix {
        assert_eq!(self.cols, rhs.rows, "dimension mismatch in IntMatrix product");
        IntMatrix::from_fn(self.rows, rhs.cols, |r, c| {
            (0..self.cols).map(|k| &self[(r, k)] * &rhs[(k, c)]).sum()
        })
    }
}

impl fmt::Debug for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "IntMatrix{:?}", self.to_rows())
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for r in 0..self.rows {
            let cells: Vec<String> = self.row(r).iter().map(|v| v.to_string()).collect();
            writeln!(f, "[{}]", cells.join(", "))?;
        }
        Ok(())
    }
}
