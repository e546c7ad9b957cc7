//! Dense matrices over the exact rationals, sized for the small congruence
//! transforms this crate manipulates (tens of rows, not thousands).

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::ratio::format_rational;

pub type RationalVector = Vec<BigRational>;

#[derive(Clone, PartialEq, Eq)]
pub struct RationalMatrix {
    rows: usize,
    cols: usize,
    data: Vec<BigRational>,
}

impl fmt::Debug for RationalMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "RationalMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| format_rational(self.get(i, j))).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

impl RationalMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigRational::one());
        }
        m
    }

    pub fn ones(rows: usize, cols: usize) -> Self {
        RationalMatrix { rows, cols, data: vec![BigRational::one(); rows * cols] }
    }

    pub fn from_rows(rows: Vec<Vec<BigRational>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        RationalMatrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_int_rows(rows: &[Vec<i64>]) -> Self {
        Self::from_rows(
            rows.iter()
                .map(|row| row.iter().map(|&n| BigRational::from_integer(BigInt::from(n))).collect())
                .collect(),
        )
    }

    /// Permutation matrix sending coordinate perm[i] of the input to
    /// coordinate i of the output: row i has its one in column perm[i].
    pub fn permutation(perm: &[usize]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for (i, &j) in perm.iter().enumerate() {
            assert!(j < n, "permutation entry out of range");
            m.set(i, j, BigRational::one());
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigRational {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, value: BigRational) {
        assert!(i < self.rows && j < self.cols, "index ({i},{j}) out of range");
        self.data[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[BigRational] {
        assert!(i < self.rows);
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<BigRational>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let a = self.get(i, l);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(l, j);
                    if b.is_zero() {
                        continue;
                    }
                    let cur = out.get(i, j) + a * b;
                    out.set(i, j, cur);
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[BigRational]) -> RationalVector {
        assert_eq!(self.cols, v.len(), "vector length differs from column count");
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .zip(v)
                    .fold(BigRational::zero(), |acc, (a, x)| acc + a * x)
            })
            .collect()
    }

    pub fn add(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert!(self.rows == other.rows && self.cols == other.cols, "shape mismatch");
        let data = self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scaled(&self, c: &BigRational) -> Self {
        let data = self.data.iter().map(|a| a * c).collect();
        RationalMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn block_diag(blocks: &[Self]) -> Self {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(ro + i, co + j, b.get(i, j).clone());
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    pub fn hstack(blocks: &[Self]) -> Self {
        assert!(!blocks.is_empty(), "nothing to stack");
        let rows = blocks[0].rows;
        assert!(blocks.iter().all(|b| b.rows == rows), "row counts differ");
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = Self::zeros(rows, cols);
        let mut co = 0;
        for b in blocks {
            for i in 0..rows {
                for j in 0..b.cols {
                    out.set(i, co + j, b.get(i, j).clone());
                }
            }
            co += b.cols;
        }
        out
    }

    pub fn first_cols(&self, c: usize) -> Self {
        assert!(c <= self.cols);
        let mut out = Self::zeros(self.rows, c);
        for i in 0..self.rows {
            for j in 0..c {
                out.set(i, j, self.get(i, j).clone());
            }
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Zero::is_zero)
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Self> {
        assert_eq!(self.rows, self.cols, "only square matrices invert");
        let n = self.rows;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&i| !a.get(i, col).is_zero())
                .ok_or(Error::SingularMatrix)?;
            if pivot_row != col {
                for j in 0..n {
                    let (x, y) = (a.get(pivot_row, j).clone(), a.get(col, j).clone());
                    a.set(pivot_row, j, y);
                    a.set(col, j, x);
                    let (x, y) = (inv.get(pivot_row, j).clone(), inv.get(col, j).clone());
                    inv.set(pivot_row, j, y);
                    inv.set(col, j, x);
                }
            }
            let pivot = a.get(col, col).clone();
            for j in 0..n {
                a.set(col, j, a.get(col, j) / &pivot);
                inv.set(col, j, inv.get(col, j) / &pivot);
            }
            for i in 0..n {
                if i == col || a.get(i, col).is_zero() {
                    continue;
                }
                let factor = a.get(i, col).clone();
                for j in 0..n {
                    let x = a.get(i, j) - &factor * a.get(col, j);
                    a.set(i, j, x);
                    let x = inv.get(i, j) - &factor * inv.get(col, j);
                    inv.set(i, j, x);
                }
            }
        }
        Ok(inv)
    }

    /// Rank by exact forward elimination.
    pub fn rank(&self) -> usize {
        let mut a = self.clone();
        let mut rank = 0;
        let mut row = 0;
        for col in 0..a.cols {
            let Some(pivot_row) = (row..a.rows).find(|&i| !a.get(i, col).is_zero()) else {
                continue;
            };
            if pivot_row != row {
                for j in 0..a.cols {
                    let (x, y) = (a.get(pivot_row, j).clone(), a.get(row, j).clone());
                    a.set(pivot_row, j, y);
                    a.set(row, j, x);
                }
            }
            let pivot = a.get(row, col).clone();
            for i in (row + 1)..a.rows {
                if a.get(i, col).is_zero() {
                    continue;
                }
                let factor = a.get(i, col) / &pivot;
                for j in col..a.cols {
                    let x = a.get(i, j) - &factor * a.get(row, j);
                    a.set(i, j, x);
                }
            }
            rank += 1;
            row += 1;
            if row == a.rows {
                break;
            }
        }
        rank
    }
}
