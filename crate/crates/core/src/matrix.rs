//! Dense square matrices over a ring.

use std::fmt;

use crate::error::{Error, Result};
use crate::ring::Ring;

#[derive(Clone, PartialEq)]
pub struct Matrix<T> {
    n: usize,
    a: Vec<T>,
}

impl<T: fmt::Debug> fmt::Debug for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[T]> = self.a.chunks(self.n.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

impl<T: Ring> Matrix<T> {
    pub fn zero(n: usize) -> Self {
        Matrix { n, a: vec![T::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.a[i * n + i] = T::one();
        }
        m
    }

    pub fn diagonal(d: Vec<T>) -> Self {
        let n = d.len();
        let mut m = Self::zero(n);
        for (i, x) in d.into_iter().enumerate() {
            m.a[i * n + i] = x;
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Matrix { n, a: rows.into_iter().flatten().collect() }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &T {
        &self.a[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, x: T) {
        self.a[i * self.n + j] = x;
    }

    pub fn rows(&self) -> Vec<Vec<T>> {
        self.a.chunks(self.n.max(1)).take(self.n).map(|r| r.to_vec()).collect()
    }

    pub fn map<U: Ring>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix { n: self.n, a: self.a.iter().map(f).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        Matrix { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x.clone() + y.clone()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        Matrix { n: self.n, a: self.a.iter().zip(&o.a).map(|(x, y)| x.clone() - y.clone()).collect() }
    }

    pub fn scale(&self, x: &T) -> Self {
        Matrix { n: self.n, a: self.a.iter().map(|y| y.clone() * x.clone()).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.n;
        let mut out = Self::zero(n);
        for i in 0..n {
            for k in 0..n {
                let x = &self.a[i * n + k];
                if x.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let y = &o.a[k * n + j];
                    if !y.is_zero() {
                        out.a[i * n + j] = out.a[i * n + j].clone() + x.clone() * y.clone();
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[T]) -> Vec<T> {
        let n = self.n;
        (0..n)
            .map(|i| {
                (0..n).fold(T::zero(), |acc, j| {
                    let x = &self.a[i * n + j];
                    if x.is_zero() || v[j].is_zero() {
                        acc
                    } else {
                        acc + x.clone() * v[j].clone()
                    }
                })
            })
            .collect()
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::identity(self.n), |acc, _| acc.mul(self))
    }

    pub fn is_lower_triangular(&self) -> bool {
        (0..self.n).all(|i| (i + 1..self.n).all(|j| self.get(i, j).is_zero()))
    }

    pub fn is_nilpotent_lower(&self) -> bool {
        (0..self.n).all(|i| (i..self.n).all(|j| self.get(i, j).is_zero()))
    }

    /// Forward substitution for a lower-triangular system.
    pub fn solve_lower(&self, b: &[T]) -> Result<Vec<T>> {
        if !self.is_lower_triangular() {
            return Err(Error::Internal("solve_lower on a non-triangular matrix".into()));
        }
        let mut x: Vec<T> = Vec::with_capacity(self.n);
        for (i, bi) in b.iter().enumerate().take(self.n) {
            let s = (0..i).fold(bi.clone(), |acc, j| acc - self.get(i, j).clone() * x[j].clone());
            let d = self
                .get(i, i)
                .try_inv()
                .ok_or_else(|| Error::NotInvertible(format!("zero diagonal entry at row {i}")))?;
            x.push(s * d);
        }
        Ok(x)
    }

    pub fn inverse_lower(&self) -> Result<Self> {
        let n = self.n;
        let mut cols = Vec::with_capacity(n);
        for j in 0..n {
            let mut e = vec![T::zero(); n];
            e[j] = T::one();
            cols.push(self.solve_lower(&e)?);
        }
        let mut m = Self::zero(n);
        for (j, c) in cols.into_iter().enumerate() {
            for (i, x) in c.into_iter().enumerate() {
                m.set(i, j, x);
            }
        }
        Ok(m)
    }
}

pub fn add_vec<T: Ring>(a: &[T], b: &[T]) -> Vec<T> {
    a.iter().zip(b).map(|(x, y)| x.clone() + y.clone()).collect()
}

pub fn scale_vec<T: Ring>(a: &[T], x: &T) -> Vec<T> {
    a.iter().map(|y| y.clone() * x.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, Q};

    #[test]
    fn lower_solve() {
        let m: Matrix<Q> = Matrix::from_rows(vec![vec![q(2), q(0)], vec![q(3), q(4)]]);
        let x = m.solve_lower(&[q(2), q(11)]).unwrap();
        assert_eq!(x, vec![q(1), q(2)]);
        assert_eq!(m.mul(&m.inverse_lower().unwrap()), Matrix::identity(2));
    }
}
