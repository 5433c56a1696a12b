//! Coefficient rings.
//!
//! [`Ring`] is what the operator algebra needs; [`Scalar`] adds the field and
//! transcendental operations used when concrete parameters enter.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::exponent::{parse_decimal, q_from_f64, q_to_f64, Assumptions, Exponent, Q};

pub trait Ring:
    Clone
    + fmt::Debug
    + PartialEq
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_q(q: &Q) -> Self;
    fn is_zero(&self) -> bool;
    /// Multiplicative inverse when it exists in the ring.
    fn try_inv(&self) -> Option<Self>;

    fn from_i64(n: i64) -> Self {
        Self::from_q(&Q::from_integer(BigInt::from(n)))
    }

    fn from_bigint(n: &BigInt) -> Self {
        Self::from_q(&Q::from_integer(n.clone()))
    }

    fn powu(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base.clone();
            }
            n >>= 1;
            if n > 0 {
                base = base.clone() * base;
            }
        }
        acc
    }

    fn scale_q(&self, q: &Q) -> Self {
        self.clone() * Self::from_q(q)
    }
}

pub trait Scalar: Ring + fmt::Display {
    /// Whether arithmetic is exact.
    const EXACT: bool;
    const NAME: &'static str;

    fn from_exponent(e: &Exponent) -> Result<Self>;
    fn pow_exponent(&self, e: &Exponent) -> Result<Self>;
    fn ln(&self) -> Result<Self>;
    fn atom(name: &str) -> Result<Self>;
    fn to_f64(&self) -> Option<f64>;
    fn eval_f64(&self, env: &Assumptions) -> Option<f64>;
    /// Sign when it is determined without assumptions.
    fn sign(&self) -> Option<Ordering>;
    fn parse(s: &str) -> Result<Self>;
    fn from_f64(x: f64) -> Result<Self>;

    fn div(&self, other: &Self) -> Result<Self> {
        other.try_inv().map(|i| self.clone() * i).ok_or(Error::DivisionByZero)
    }

    fn inv(&self) -> Result<Self> {
        self.try_inv().ok_or(Error::DivisionByZero)
    }

    fn powi(&self, n: i64) -> Result<Self> {
        let p = self.powu(n.unsigned_abs() as u32);
        if n < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    /// Sign under a witness when it is not determined outright.
    fn sign_with(&self, env: &Assumptions) -> Option<Ordering> {
        self.sign().or_else(|| {
            let v = self.eval_f64(env)?;
            v.partial_cmp(&0.0)
        })
    }

    fn abs_with(&self, env: &Assumptions) -> Result<Self> {
        match self.sign_with(env) {
            Some(Ordering::Less) => Ok(-self.clone()),
            Some(_) => Ok(self.clone()),
            None => Err(Error::precondition(format!("sign of {self} is undetermined"))),
        }
    }

    /// Zero test; floats use a relative band around `scale`.
    fn is_negligible(&self, scale: f64) -> bool {
        if Self::EXACT {
            self.is_zero()
        } else {
            self.to_f64().map(|v| v.abs() <= 1e-9 * scale.abs().max(1.0)).unwrap_or(false)
        }
    }
}

impl Ring for Q {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_q(q: &Q) -> Self {
        q.clone()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn try_inv(&self) -> Option<Self> {
        (!Zero::is_zero(self)).then(|| self.recip())
    }
}

impl Scalar for Q {
    const EXACT: bool = true;
    const NAME: &'static str = "rational";

    fn from_exponent(e: &Exponent) -> Result<Self> {
        e.as_constant().cloned().ok_or_else(|| Error::Inexact(format!("symbolic exponent {e}")))
    }

    fn pow_exponent(&self, e: &Exponent) -> Result<Self> {
        if let Some(n) = e.as_i64() {
            return self.powi(n);
        }
        if self.is_one() || (Zero::is_zero(self) && e.eval(&Assumptions::new()).is_some_and(|v| v > 0.0)) {
            return Ok(self.clone());
        }
        Err(Error::Inexact(format!("({self})^({e})")))
    }

    fn ln(&self) -> Result<Self> {
        if One::is_one(self) {
            Ok(<Q as Zero>::zero())
        } else {
            Err(Error::Inexact(format!("log({self})")))
        }
    }

    fn atom(name: &str) -> Result<Self> {
        Err(Error::Inexact(name.to_string()))
    }

    fn to_f64(&self) -> Option<f64> {
        Some(q_to_f64(self))
    }

    fn eval_f64(&self, _: &Assumptions) -> Option<f64> {
        Some(q_to_f64(self))
    }

    fn sign(&self) -> Option<Ordering> {
        Some(self.cmp(&<Q as Zero>::zero()))
    }

    fn parse(s: &str) -> Result<Self> {
        let f = crate::sym::RatFunc::parse(s)?;
        f.as_constant().ok_or_else(|| Error::Parse(format!("'{s}' is not a rational constant")))
    }

    fn from_f64(x: f64) -> Result<Self> {
        q_from_f64(x)
    }
}

impl Ring for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_q(q: &Q) -> Self {
        q_to_f64(q)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn try_inv(&self) -> Option<Self> {
        (*self != 0.0).then(|| 1.0 / self)
    }
}

impl Scalar for f64 {
    const EXACT: bool = false;
    const NAME: &'static str = "float";

    fn from_exponent(e: &Exponent) -> Result<Self> {
        e.as_constant().map(q_to_f64).ok_or_else(|| Error::Inexact(format!("symbolic exponent {e}")))
    }

    fn pow_exponent(&self, e: &Exponent) -> Result<Self> {
        if let Some(n) = e.as_i64() {
            return self.powi(n);
        }
        let p = f64::from_exponent(e)?;
        if *self < 0.0 {
            return Err(Error::precondition(format!("negative base {self} to non-integer power {e}")));
        }
        Ok(self.powf(p))
    }

    fn ln(&self) -> Result<Self> {
        if *self > 0.0 {
            Ok(f64::ln(*self))
        } else {
            Err(Error::precondition(format!("log of nonpositive {self}")))
        }
    }

    fn atom(name: &str) -> Result<Self> {
        Err(Error::Unsupported(format!("symbol '{name}' in float mode")))
    }

    fn to_f64(&self) -> Option<f64> {
        Some(*self)
    }

    fn eval_f64(&self, _: &Assumptions) -> Option<f64> {
        Some(*self)
    }

    fn sign(&self) -> Option<Ordering> {
        self.partial_cmp(&0.0)
    }

    fn parse(s: &str) -> Result<Self> {
        if let Ok(v) = s.trim().parse::<f64>() {
            return Ok(v);
        }
        Q::parse(s).map(|q| q_to_f64(&q))
    }

    fn from_f64(x: f64) -> Result<Self> {
        Ok(x)
    }
}

/// Exact value of a decimal literal as a scalar.
pub fn decimal<S: Scalar>(s: &str) -> Result<S> {
    Ok(S::from_q(&parse_decimal(s)?))
}

pub fn rational_to_i64(q: &Q) -> Option<i64> {
    if q.is_integer() {
        q.to_integer().to_i64()
    } else {
        None
    }
}

pub fn abs_q(q: &Q) -> Q {
    q.abs()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qr};

    #[test]
    fn powers() {
        assert_eq!(qr(1, 2).pow_exponent(&Exponent::int(-3)).unwrap(), q(8));
        assert!(qr(1, 2).pow_exponent(&"1/2".parse().unwrap()).is_err());
        assert!((2f64.pow_exponent(&"1/2".parse().unwrap()).unwrap() - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn parse_scalars() {
        assert_eq!(Q::parse("3/2").unwrap(), qr(3, 2));
        assert_eq!(Q::parse("0.25").unwrap(), qr(1, 4));
        assert!(Q::parse("beta").is_err());
        assert_eq!(f64::parse("1e-3").unwrap(), 1e-3);
    }
}
