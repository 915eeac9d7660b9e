//! Dense integer matrices with exact arithmetic.
//!
//! Everything in this crate works with small matrices (sizes up to the
//! dimension of the algebra, entries bounded by it as well), so the
//! representation is a plain row-major `Vec` and all checks are exact
//! integer comparisons. The scalar type is generic; the crate root exposes
//! the concrete alias [`crate::Mat`] used throughout the pipeline.

use std::fmt;
use std::ops::{Index, IndexMut};

use num_traits::PrimInt;
use serde::{Deserialize, Serialize};

/// Scalar types usable as matrix entries: fixed-width integers with exact
/// arithmetic and a total order.
pub trait Scalar: PrimInt + std::hash::Hash + fmt::Debug + fmt::Display {}
impl<T: PrimInt + std::hash::Hash + fmt::Debug + fmt::Display> Scalar for T {}

/// A dense row-major matrix over an exact integer scalar.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: Scalar> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::zero(); rows * cols],
        }
    }

    /// Builds a matrix from rows; panics if the rows are ragged.
    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::one();
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

    /// Row-major entry slice; also the lexicographic comparison key.
    pub fn flat(&self) -> &[T] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        (0..self.rows).fold(T::zero(), |acc, i| acc + self[(i, i)])
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] = out[(i, j)] + a * other[(k, j)];
                }
            }
        }
        out
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(&a, &b)| a + b)
            .collect();
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data,
        }
    }

    pub fn scale(&self, c: T) -> Self {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|&x| c * x).collect(),
        }
    }

    /// True iff every 2x2 minor vanishes, i.e. the matrix has rank at most
    /// one over the rationals. Exact integer test, no elimination.
    pub fn rank_at_most_one(&self) -> bool {
        for i in 0..self.rows {
            for s in i + 1..self.rows {
                for j in 0..self.cols {
                    for t in j + 1..self.cols {
                        if self[(i, j)] * self[(s, t)] != self[(i, t)] * self[(s, j)] {
                            return false;
                        }
                    }
                }
            }
        }
        true
    }

    pub fn all_positive(&self) -> bool {
        self.data.iter().all(|x| *x > T::zero())
    }

    pub fn all_nonnegative(&self) -> bool {
        self.data.iter().all(|x| *x >= T::zero())
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Scalar> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(
                f,
                "  {:?}",
                self.row(i)
            )?;
        }
        write!(f, "]")
    }
}

impl<T: Scalar> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let line: Vec<String> = self.row(i).iter().map(|x| x.to_string()).collect();
            writeln!(f, "{}", line.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    type M = Matrix<i64>;

    #[test]
    fn mul_and_trace() {
        let a = M::from_rows(vec![vec![2, 1], vec![2, 1]]);
        let sq = a.mul(&a);
        assert_eq!(sq, a.scale(3));
        assert_eq!(a.trace(), 3);
    }

    #[test]
    fn rank_one_by_minors() {
        let a = M::from_rows(vec![vec![2, 1], vec![2, 1]]);
        assert!(a.rank_at_most_one());
        let b = M::identity(2);
        assert!(!b.rank_at_most_one());
    }
}
