// SPDX-License-Identifier: Apache-2.0

//! Dense square matrices and 3-index arrays with `Scalar` entries.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    n: usize,
    data: Vec<Scalar>,
}

impl Matrix {
    pub fn zeros(n: usize) -> Self {
        Matrix {
            n,
            data: vec![Scalar::zero(); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n);
        for i in 0..n {
            m.set(i, i, Scalar::one());
        }
        m
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        Matrix { n, data }
    }

    /// Rows of the matrix; every row must have length `rows.len()`.
    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::Schema(format!("matrix must be {n}x{n}")));
        }
        Ok(Matrix {
            n,
            data: rows.into_iter().flatten().collect(),
        })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Scalar) {
        self.data[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Matrix {
        Matrix::from_fn(self.n, |i, j| self.get(j, i).clone())
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        Matrix::from_fn(self.n, |i, j| {
            (0..self.n).fold(Scalar::zero(), |acc, a| &acc + &(self.get(i, a) * other.get(a, j)))
        })
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn is_symmetric(&self) -> bool {
        (0..self.n).all(|i| (0..i).all(|j| self.get(i, j) == self.get(j, i)))
    }

    pub fn is_skew(&self) -> bool {
        (0..self.n).all(|i| (0..=i).all(|j| *self.get(i, j) == -self.get(j, i)))
    }

    /// Exact inverse by Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n);
        for col in 0..n {
            let pivot = (col..n).find(|&r| !a.get(r, col).is_zero()).ok_or(Error::DegenerateMetric)?;
            if pivot != col {
                for j in 0..n {
                    a.data.swap(pivot * n + j, col * n + j);
                    inv.data.swap(pivot * n + j, col * n + j);
                }
            }
            let p = a.get(col, col).recip()?;
            for j in 0..n {
                a.set(col, j, a.get(col, j) * &p);
                inv.set(col, j, inv.get(col, j) * &p);
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let f = a.get(r, col).clone();
                for j in 0..n {
                    a.set(r, j, a.get(r, j) - &(&f * a.get(col, j)));
                    inv.set(r, j, inv.get(r, j) - &(&f * inv.get(col, j)));
                }
            }
        }
        Ok(inv)
    }

    pub fn rows(&self) -> Vec<Vec<String>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.get(i, j).to_string()).collect())
            .collect()
    }
}

impl fmt::Display for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows().iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

/// An `n×n×n` array addressed as `get(a, b, c)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Tensor3 {
    n: usize,
    data: Vec<Scalar>,
}

impl Tensor3 {
    pub fn zeros(n: usize) -> Self {
        Tensor3 {
            n,
            data: vec![Scalar::zero(); n * n * n],
        }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize, usize) -> Scalar) -> Self {
        let mut data = Vec::with_capacity(n * n * n);
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    data.push(f(a, b, c));
                }
            }
        }
        Tensor3 { n, data }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, a: usize, b: usize, c: usize) -> &Scalar {
        &self.data[(a * self.n + b) * self.n + c]
    }

    pub fn set(&mut self, a: usize, b: usize, c: usize, v: Scalar) {
        let n = self.n;
        self.data[(a * n + b) * n + c] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(Scalar::is_zero)
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.data
    }

    pub fn sub(&self, other: &Tensor3) -> Tensor3 {
        Tensor3 {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    /// First nonzero entry, for diagnostics.
    pub fn first_nonzero(&self) -> Option<((usize, usize, usize), &Scalar)> {
        let n = self.n;
        self.data
            .iter()
            .enumerate()
            .find(|(_, v)| !v.is_zero())
            .map(|(idx, v)| ((idx / (n * n), (idx / n) % n, idx % n), v))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(t: &str) -> Scalar {
        Scalar::parse(t).unwrap()
    }

    #[test]
    fn inverse_of_skew_block() {
        let m = Matrix::from_rows(vec![vec![s("0"), s("1")], vec![s("-1"), s("0")]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(inv, Matrix::from_rows(vec![vec![s("0"), s("-1")], vec![s("1"), s("0")]]).unwrap());
        assert_eq!(Matrix::identity(3).inverse().unwrap(), Matrix::identity(3));
    }

    #[test]
    fn inverse_of_rational_metric() {
        let g = Matrix::from_rows(vec![
            vec![s("1"), s("u2/u1")],
            vec![s("u2/u1"), s("(1 + u2^2)/u1^2")],
        ])
        .unwrap();
        let inv = g.inverse().unwrap();
        assert_eq!(g.mul(&inv), Matrix::identity(2));
        assert_eq!(inv.get(1, 1), &s("u1^2"));
    }

    #[test]
    fn singular_matrix_is_rejected() {
        let m = Matrix::from_rows(vec![vec![s("u1"), s("u2")], vec![s("2*u1"), s("2*u2")]]).unwrap();
        assert!(matches!(m.inverse(), Err(Error::DegenerateMetric)));
    }
}
