//! Truncated power series `Σ_{j≤n} c_j u^j`.

use crate::error::{Error, Result};
use crate::exponent::qr;
use crate::ring::Ring;

#[derive(Clone, Debug, PartialEq)]
pub struct Series<T> {
    c: Vec<T>,
}

impl<T: Ring> Series<T> {
    pub fn new(c: Vec<T>) -> Self {
        assert!(!c.is_empty(), "series needs at least a constant term");
        Series { c }
    }

    pub fn zero(order: usize) -> Self {
        Series { c: vec![T::zero(); order + 1] }
    }

    pub fn constant(x: T, order: usize) -> Self {
        let mut s = Self::zero(order);
        s.c[0] = x;
        s
    }

    /// `u` itself.
    pub fn variable(order: usize) -> Self {
        let mut s = Self::zero(order);
        if order >= 1 {
            s.c[1] = T::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.c.len() - 1
    }

    pub fn coeffs(&self) -> &[T] {
        &self.c
    }

    pub fn into_coeffs(self) -> Vec<T> {
        self.c
    }

    pub fn coeff(&self, j: usize) -> T {
        self.c.get(j).cloned().unwrap_or_else(T::zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        Series { c: (0..=order).map(|j| self.coeff(j)).collect() }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        Series { c: (0..=n).map(|j| self.c[j].clone() + o.c[j].clone()).collect() }
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        self.map(|x| -x.clone())
    }

    pub fn scale(&self, x: &T) -> Self {
        self.map(|c| c.clone() * x.clone())
    }

    pub fn map(&self, f: impl Fn(&T) -> T) -> Self {
        Series { c: self.c.iter().map(f).collect() }
    }

    pub fn mul(&self, o: &Self) -> Self {
        let n = self.order().min(o.order());
        let c = (0..=n)
            .map(|k| (0..=k).fold(T::zero(), |acc, i| acc + self.c[i].clone() * o.c[k - i].clone()))
            .collect();
        Series { c }
    }

    pub fn powu(&self, n: u32) -> Self {
        (0..n).fold(Self::constant(T::one(), self.order()), |acc, _| acc.mul(self))
    }

    /// Formal derivative; the order drops by one.
    pub fn derivative(&self) -> Self {
        if self.order() == 0 {
            return Self::zero(0);
        }
        Series { c: (1..self.c.len()).map(|j| self.c[j].clone() * T::from_i64(j as i64)).collect() }
    }

    /// `self ∘ inner`; `inner` must have zero constant term.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        if !inner.c[0].is_zero() {
            return Err(Error::precondition("inner series must vanish at zero"));
        }
        let n = inner.order();
        let mut acc = Self::constant(self.coeff(self.order()), n);
        for k in (0..self.order()).rev() {
            acc = acc.mul(inner);
            acc.c[0] = acc.c[0].clone() + self.c[k].clone();
        }
        Ok(acc.truncate(n))
    }

    pub fn exp(&self) -> Result<Self> {
        if !self.c[0].is_zero() {
            return Err(Error::precondition("exp needs zero constant term"));
        }
        let n = self.order();
        let mut e = vec![T::one()];
        for k in 1..=n {
            let s = (1..=k).fold(T::zero(), |acc, j| {
                acc + self.c[j].clone() * T::from_i64(j as i64) * e[k - j].clone()
            });
            e.push(s.scale_q(&qr(1, k as i64)));
        }
        Ok(Series { c: e })
    }

    pub fn log(&self) -> Result<Self> {
        if self.c[0] != T::one() {
            return Err(Error::precondition("log needs constant term one"));
        }
        let n = self.order();
        let mut l = vec![T::zero()];
        for k in 1..=n {
            let s = (1..k).fold(T::zero(), |acc, j| {
                acc + l[j].clone() * T::from_i64(j as i64) * self.c[k - j].clone()
            });
            l.push(self.c[k].clone() - s.scale_q(&qr(1, k as i64)));
        }
        Ok(Series { c: l })
    }

    pub fn reciprocal(&self) -> Result<Self> {
        let r0 = self.c[0].try_inv().ok_or_else(|| Error::NotInvertible("series with zero constant term".into()))?;
        let mut r = vec![r0.clone()];
        for k in 1..=self.order() {
            let s = (1..=k).fold(T::zero(), |acc, j| acc + self.c[j].clone() * r[k - j].clone());
            r.push(-(r0.clone() * s));
        }
        Ok(Series { c: r })
    }

    /// Coefficients of `e^{-s·u}`-type series: `(-1)^k x_k / k!`.
    pub fn from_moments(mu: &[T]) -> Self {
        let mut f = num_bigint::BigInt::from(1);
        let c = mu
            .iter()
            .enumerate()
            .map(|(k, m)| {
                if k > 0 {
                    f *= k;
                }
                let v = m.scale_q(&crate::exponent::Q::new(1.into(), f.clone()));
                if k % 2 == 1 {
                    -v
                } else {
                    v
                }
            })
            .collect();
        Series { c }
    }
}
