//! Dense matrices and exact rank.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{ExactScalar, Scalar};
use crate::Rational;

#[derive(Clone, Debug, PartialEq)]
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

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> &T {
        &self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: T) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[T] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<T> {
        (0..self.rows).map(|r| self.get(r, c).clone()).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c).clone());
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                self.row(r)
                    .iter()
                    .zip(v)
                    .fold(T::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
            })
            .collect()
    }

    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        Matrix::from_rows(
            rows.iter()
                .map(|&r| cols.iter().map(|&c| self.get(r, c).clone()).collect())
                .collect(),
        )
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }
}

impl<T: ExactScalar> Matrix<T> {
    /// Rank by ordinary Gaussian elimination over the field.
    pub fn rank_gauss(&self) -> usize {
        let mut m = self.clone();
        let mut rank = 0;
        for c in 0..m.cols {
            let Some(p) = (rank..m.rows).find(|&r| !m.get(r, c).is_zero()) else {
                continue;
            };
            for k in 0..m.cols {
                m.data.swap(rank * m.cols + k, p * m.cols + k);
            }
            let pivot = m.get(rank, c).clone();
            for r in rank + 1..m.rows {
                let f = m.get(r, c).clone() / pivot.clone();
                if f.is_zero() {
                    continue;
                }
                for k in c..m.cols {
                    let v = m.get(r, k).clone() - f.clone() * m.get(rank, k).clone();
                    m.set(r, k, v);
                }
            }
            rank += 1;
            if rank == m.rows {
                break;
            }
        }
        rank
    }

    /// Determinant by elimination; square matrices only.
    pub fn determinant(&self) -> T {
        assert_eq!(self.rows, self.cols);
        let mut m = self.clone();
        let n = m.rows;
        let mut det = T::one();
        for c in 0..n {
            let Some(p) = (c..n).find(|&r| !m.get(r, c).is_zero()) else {
                return T::zero();
            };
            if p != c {
                for k in 0..n {
                    m.data.swap(c * n + k, p * n + k);
                }
                det = -det;
            }
            let pivot = m.get(c, c).clone();
            det = det * pivot.clone();
            for r in c + 1..n {
                let f = m.get(r, c).clone() / pivot.clone();
                for k in c..n {
                    let v = m.get(r, k).clone() - f.clone() * m.get(c, k).clone();
                    m.set(r, k, v);
                }
            }
        }
        det
    }
}

impl Matrix<Rational> {
    /// Clears denominators row by row, giving an integer matrix of the same
    /// rank.
    pub fn to_integer_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.rows)
            .map(|r| {
                let row = self.row(r);
                let lcm = row
                    .iter()
                    .fold(BigInt::one(), |l, q| l.lcm(q.denom()));
                row.iter()
                    .map(|q| q.numer() * (&lcm / q.denom()))
                    .collect()
            })
            .collect()
    }

    /// Exact rank by fraction-free (Bareiss) elimination on the
    /// denominator-cleared integer matrix.
    pub fn rank(&self) -> usize {
        bareiss_rank(self.to_integer_rows())
    }
}

/// Bareiss elimination: every division is exact, so entries stay integral.
pub fn bareiss_rank(mut m: Vec<Vec<BigInt>>) -> usize {
    let rows = m.len();
    let cols = m.first().map_or(0, Vec::len);
    let mut prev = BigInt::one();
    let mut rank = 0;
    for c in 0..cols {
        if rank == rows {
            break;
        }
        let Some(p) = (rank..rows).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, p);
        for r in rank + 1..rows {
            for k in c + 1..cols {
                let v = &m[rank][c] * &m[r][k] - &m[r][c] * &m[rank][k];
                debug_assert!((&v % &prev).is_zero());
                m[r][k] = v / &prev;
            }
            m[r][c] = BigInt::zero();
        }
        prev = m[rank][c].clone();
        rank += 1;
    }
    rank
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn q(rows: &[&[i64]]) -> Matrix<Rational> {
        Matrix::from_rows(rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect())
    }

    #[test]
    fn rank_agrees_between_routes() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[1, 0, 1], &[0, 2, 2]]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_gauss(), 2);
        let id = q(&[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1]]);
        assert_eq!(id.rank(), 3);
        assert_eq!(Matrix::<Rational>::zeros(3, 4).rank(), 0);
    }

    #[test]
    fn rank_with_fractions_and_skipped_columns() {
        let m = Matrix::from_rows(vec![
            vec![int(0), rat(1, 2), rat(1, 3)],
            vec![int(0), rat(1, 4), rat(1, 6)],
            vec![int(0), int(1), int(5)],
        ]);
        assert_eq!(m.rank(), 2);
        assert_eq!(m.rank_gauss(), 2);
    }

    #[test]
    fn determinant_of_vandermonde() {
        // det [x_i^{2-j}] = (x1-x2)(x1-x3)(x2-x3) at (3,2,1) = 1*2*1 = 2
        let v = q(&[&[9, 3, 1], &[4, 2, 1], &[1, 1, 1]]);
        assert_eq!(v.determinant(), int(2));
    }
}
