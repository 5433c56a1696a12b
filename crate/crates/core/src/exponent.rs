//! Affine exponents `q0 + Σ q_i s_i` over named symbols.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

pub type Q = BigRational;

/// Witness values for symbols; used only to order exponents.
pub type Assumptions = BTreeMap<String, f64>;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qr(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn q_to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

/// Shortest-decimal conversion, so `0.1` becomes `1/10`.
pub fn q_from_f64(x: f64) -> Result<Q> {
    if !x.is_finite() {
        return Err(Error::Inexact(format!("{x}")));
    }
    parse_decimal(&format!("{x}"))
}

pub fn parse_decimal(s: &str) -> Result<Q> {
    let s = s.trim();
    let bad = || Error::Parse(format!("bad number '{s}'"));
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i32>().map_err(|_| bad())?),
        None => (s, 0),
    };
    let (neg, mant) = match mant.strip_prefix('-') {
        Some(r) => (true, r),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = match mant.find('.') {
        Some(i) => (&mant[..i], &mant[i + 1..]),
        None => (mant, ""),
    };
    if ip.is_empty() && fp.is_empty() {
        return Err(bad());
    }
    let digits = format!("{ip}{fp}");
    if !digits.chars().all(|c| c.is_ascii_digit()) {
        return Err(bad());
    }
    let n: BigInt = digits.parse().map_err(|_| bad())?;
    let scale = exp - fp.len() as i32;
    let ten = BigInt::from(10);
    let mut v = if scale >= 0 {
        Q::from_integer(n * num_traits::pow(ten, scale as usize))
    } else {
        Q::new(n, num_traits::pow(ten, (-scale) as usize))
    };
    if neg {
        v = -v;
    }
    Ok(v)
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Exponent {
    constant: Q,
    terms: BTreeMap<String, Q>,
}

impl Exponent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn constant(c: Q) -> Self {
        Exponent { constant: c, terms: BTreeMap::new() }
    }

    pub fn int(n: i64) -> Self {
        Self::constant(q(n))
    }

    pub fn symbol(name: &str) -> Self {
        let mut terms = BTreeMap::new();
        terms.insert(name.to_string(), Q::one());
        Exponent { constant: Q::zero(), terms }
    }

    pub fn from_parts(constant: Q, terms: impl IntoIterator<Item = (String, Q)>) -> Self {
        let mut e = Exponent::constant(constant);
        for (s, c) in terms {
            let v = e.terms.entry(s).or_insert_with(Q::zero);
            *v += c;
        }
        e.terms.retain(|_, c| !c.is_zero());
        e
    }

    pub fn constant_part(&self) -> &Q {
        &self.constant
    }

    pub fn symbolic_terms(&self) -> &BTreeMap<String, Q> {
        &self.terms
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn as_constant(&self) -> Option<&Q> {
        self.is_constant().then_some(&self.constant)
    }

    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_constant().filter(|c| c.is_integer()).map(|c| c.to_integer())
    }

    pub fn as_i64(&self) -> Option<i64> {
        self.as_integer().and_then(|n| n.to_i64())
    }

    pub fn is_zero(&self) -> bool {
        self.is_constant() && self.constant.is_zero()
    }

    pub fn add_q(&self, c: &Q) -> Self {
        let mut e = self.clone();
        e.constant += c;
        e
    }

    pub fn add_int(&self, n: i64) -> Self {
        self.add_q(&q(n))
    }

    pub fn scale(&self, c: &Q) -> Self {
        if c.is_zero() {
            return Exponent::zero();
        }
        Exponent {
            constant: &self.constant * c,
            terms: self.terms.iter().map(|(s, v)| (s.clone(), v * c)).collect(),
        }
    }

    /// Value under a witness; `None` when a symbol is unassigned.
    pub fn eval(&self, env: &Assumptions) -> Option<f64> {
        let mut v = q_to_f64(&self.constant);
        for (s, c) in &self.terms {
            v += q_to_f64(c) * env.get(s)?;
        }
        Some(v)
    }

    /// Exact comparison when the difference is constant, else by witness.
    pub fn cmp_with(&self, other: &Exponent, env: &Assumptions) -> Result<Ordering> {
        let d = self - other;
        if let Some(c) = d.as_constant() {
            return Ok(c.cmp(&Q::zero()));
        }
        let amb = || Error::AmbiguousOrder(self.to_string(), other.to_string());
        let v = d.eval(env).ok_or_else(amb)?;
        if v.abs() < 1e-12 {
            return Err(amb());
        }
        Ok(if v < 0.0 { Ordering::Less } else { Ordering::Greater })
    }

    /// Splits into `s + n` with `n` a nonnegative integer and the constant of `s` in `[0, 1)`
    /// when `self` is constant; symbolic parts keep their constant in `[0, 1)` as well.
    pub fn split_integer(&self) -> (Exponent, BigInt) {
        let n = self.constant.floor().to_integer();
        let n = if n.is_negative() { BigInt::zero() } else { n };
        let mut s = self.clone();
        s.constant -= Q::from_integer(n.clone());
        (s, n)
    }

    pub fn parse(s: &str) -> Result<Self> {
        s.parse()
    }
}

impl std::ops::Add for &Exponent {
    type Output = Exponent;
    fn add(self, o: &Exponent) -> Exponent {
        Exponent::from_parts(
            &self.constant + &o.constant,
            self.terms.iter().chain(o.terms.iter()).map(|(s, c)| (s.clone(), c.clone())),
        )
    }
}

impl std::ops::Sub for &Exponent {
    type Output = Exponent;
    fn sub(self, o: &Exponent) -> Exponent {
        self + &(-o)
    }
}

impl std::ops::Neg for &Exponent {
    type Output = Exponent;
    fn neg(self) -> Exponent {
        self.scale(&q(-1))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut out = String::new();
        for (s, c) in &self.terms {
            let neg = c.is_negative();
            let a = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { "-" } else { "+" });
            }
            if !a.is_one() {
                out.push_str(&fmt_q(&a));
                out.push('*');
            }
            out.push_str(s);
        }
        if out.is_empty() {
            out = fmt_q(&self.constant);
        } else if !self.constant.is_zero() {
            out.push_str(if self.constant.is_negative() { "-" } else { "+" });
            out.push_str(&fmt_q(&self.constant.abs()));
        }
        f.write_str(&out)
    }
}

impl FromStr for Exponent {
    type Err = Error;

    /// Accepts affine expressions such as `alpha+1`, `33/2`, `2*alpha-1/2`, `alpha/2`.
    fn from_str(s: &str) -> Result<Self> {
        let f = crate::sym::RatFunc::parse(s)?;
        f.as_affine().ok_or_else(|| Error::Parse(format!("'{s}' is not an affine exponent")))
    }
}

impl serde::Serialize for Exponent {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

pub fn factorial(n: u64) -> BigInt {
    (1..=n).fold(BigInt::one(), |a, k| a * BigInt::from(k))
}

pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    factorial(n) / (factorial(k) * factorial(n - k))
}

pub fn gcd_i64(a: i64, b: i64) -> i64 {
    a.gcd(&b)
}
