//! Polynomials in a formal weight `c`: finite sums of `s · c^e (log c)^k`.
//!
//! Summing a summand over all weights amounts to replacing every monomial
//! `c^e (log c)^k` by the corresponding power sum.

use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::Result;
use crate::exponent::{Exponent, Q};
use crate::ring::{Ring, Scalar};
use crate::scale::PowerLog;

#[derive(Clone, Debug)]
pub struct WeightPoly<S> {
    terms: BTreeMap<(Exponent, u32), S>,
}

impl<S: Scalar> WeightPoly<S> {
    pub fn constant(x: S) -> Self {
        Self::monomial(Exponent::zero(), 0, x)
    }

    pub fn monomial(e: Exponent, k: u32, x: S) -> Self {
        let mut terms = BTreeMap::new();
        if !x.is_zero() {
            terms.insert((e, k), x);
        }
        WeightPoly { terms }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, u32, &S)> {
        self.terms.iter().map(|((e, k), s)| (e, *k, s))
    }

    fn insert(&mut self, key: (Exponent, u32), x: S) {
        if x.is_zero() {
            return;
        }
        let v = match self.terms.remove(&key) {
            Some(old) => old + x,
            None => x,
        };
        if !v.is_zero() {
            self.terms.insert(key, v);
        }
    }

    /// Replaces each monomial by `f(e, k)`.
    pub fn evaluate(&self, mut f: impl FnMut(&Exponent, u32) -> Result<S>) -> Result<S> {
        let mut acc = S::zero();
        for ((e, k), x) in &self.terms {
            acc = acc + x.clone() * f(e, *k)?;
        }
        Ok(acc)
    }
}

impl<S: Scalar> PartialEq for WeightPoly<S> {
    fn eq(&self, o: &Self) -> bool {
        (self.clone() - o.clone()).terms.is_empty()
    }
}

impl<S: Scalar> Add for WeightPoly<S> {
    type Output = Self;
    fn add(mut self, o: Self) -> Self {
        for (k, v) in o.terms {
            self.insert(k, v);
        }
        self
    }
}

impl<S: Scalar> Sub for WeightPoly<S> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl<S: Scalar> Neg for WeightPoly<S> {
    type Output = Self;
    fn neg(self) -> Self {
        WeightPoly { terms: self.terms.into_iter().map(|(k, v)| (k, -v)).collect() }
    }
}

impl<S: Scalar> Mul for WeightPoly<S> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        let mut out = WeightPoly { terms: BTreeMap::new() };
        for ((e1, k1), x) in &self.terms {
            for ((e2, k2), y) in &o.terms {
                out.insert((e1 + e2, k1 + k2), x.clone() * y.clone());
            }
        }
        out
    }
}

impl<S: Scalar> Ring for WeightPoly<S> {
    fn zero() -> Self {
        WeightPoly { terms: BTreeMap::new() }
    }
    fn one() -> Self {
        Self::constant(S::one())
    }
    fn from_q(q: &Q) -> Self {
        Self::constant(S::from_q(q))
    }
    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }
    fn try_inv(&self) -> Option<Self> {
        match self.terms.iter().next() {
            Some(((e, 0), x)) if self.terms.len() == 1 && e.is_zero() => x.try_inv().map(Self::constant),
            _ => None,
        }
    }
}

/// The formal weight `c` itself.
#[derive(Clone, Copy, Debug, Default)]
pub struct FormalWeight;

impl<S: Scalar> PowerLog<WeightPoly<S>> for FormalWeight {
    fn power_log(&self, e: &Exponent, k: u32) -> Result<WeightPoly<S>> {
        Ok(WeightPoly::monomial(e.clone(), k, S::one()))
    }

    fn lift_exponent(&self, e: &Exponent) -> Result<WeightPoly<S>> {
        Ok(WeightPoly::constant(S::from_exponent(e)?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::q;

    #[test]
    fn products_add_exponents() {
        let a: WeightPoly<Q> = WeightPoly::monomial(Exponent::int(2), 0, q(3));
        let b = WeightPoly::monomial(Exponent::int(1), 1, q(2)) + WeightPoly::one();
        let p = a.clone() * b;
        let v = p.evaluate(|e, k| Ok(q(10).powu(e.as_i64().unwrap() as u32) * q(k as i64 + 1))).unwrap();
        assert_eq!(v, q(3 * 1000 * 2 * 2 + 3 * 100));
        assert!(a.try_inv().is_none());
        assert_eq!(WeightPoly::constant(q(4)).try_inv().unwrap(), WeightPoly::constant(crate::exponent::qr(1, 4)));
    }
}
