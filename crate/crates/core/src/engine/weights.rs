//! Weight sequences and their power sums.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exponent::{binomial, factorial, Assumptions, Exponent};
use crate::ring::{Ring, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Sign {
    Positive,
    Negative,
}

impl Sign {
    pub fn apply<T: Ring>(self, x: T) -> T {
        match self {
            Sign::Positive => x,
            Sign::Negative => -x,
        }
    }

    /// `(±1)^j`.
    pub fn pow<T: Ring>(self, j: usize) -> T {
        if self == Sign::Negative && j % 2 == 1 {
            -T::one()
        } else {
            T::one()
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum WeightRepr<S> {
    /// Finitely many weights `c_1..c_n`.
    Explicit(Vec<S>),
    /// `c_i = a^i`, `i ≥ 0`.
    Ar1(S),
    /// `c_i = φ_i`, `i = 0..q`.
    Ma(Vec<S>),
    /// Nonnegative weights known only through their power sums `C[p]`.
    Symbolic,
}

#[derive(Clone, Debug, PartialEq)]
pub struct WeightSequence<S> {
    pub repr: WeightRepr<S>,
    pub env: Assumptions,
}

/// Σ_{j≥0} j^k x^j as a rational function of x.
fn polylog_neg<S: Scalar>(k: u32, x: &S) -> Result<S> {
    let one_minus = S::one() - x.clone();
    let mut s = S::zero();
    for j in 0..=k {
        let st = stirling2(k, j);
        if st == BigInt::from(0) {
            continue;
        }
        let t = S::from_bigint(&(st * factorial(j as u64))) * x.powu(j) * one_minus.powu(j + 1).inv()?;
        s = s + t;
    }
    Ok(s)
}

fn stirling2(n: u32, k: u32) -> BigInt {
    let mut row = vec![BigInt::from(1)];
    for i in 1..=n {
        let mut next = vec![BigInt::from(0); i as usize + 1];
        for j in 1..=i as usize {
            let carry = if j < row.len() { row[j].clone() * j } else { BigInt::from(0) };
            next[j] = carry + row[j - 1].clone();
        }
        row = next;
    }
    row.get(k as usize).cloned().unwrap_or_else(|| BigInt::from(0))
}

impl<S: Scalar> WeightSequence<S> {
    pub fn explicit(c: Vec<S>) -> Self {
        WeightSequence { repr: WeightRepr::Explicit(c), env: Assumptions::new() }
    }

    pub fn ar1(a: S) -> Self {
        WeightSequence { repr: WeightRepr::Ar1(a), env: Assumptions::new() }
    }

    pub fn ma(phi: Vec<S>) -> Self {
        WeightSequence { repr: WeightRepr::Ma(phi), env: Assumptions::new() }
    }

    pub fn symbolic() -> Self {
        WeightSequence { repr: WeightRepr::Symbolic, env: Assumptions::new() }
    }

    pub fn with_env(mut self, env: Assumptions) -> Self {
        self.env = env;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if let WeightRepr::Ar1(a) = &self.repr {
            if let Some(v) = a.eval_f64(&self.env) {
                if v.abs() >= 1.0 {
                    return Err(Error::Divergent(format!("AR(1) coefficient {a} has |a| ≥ 1")));
                }
            }
        }
        Ok(())
    }

    /// The finite list of weights, when there is one.
    pub fn finite(&self) -> Option<&[S]> {
        match &self.repr {
            WeightRepr::Explicit(c) | WeightRepr::Ma(c) => Some(c),
            _ => None,
        }
    }

    /// First `n` weights (all of them for finite lists).
    pub fn truncated(&self, n: usize) -> Result<Vec<S>> {
        match &self.repr {
            WeightRepr::Explicit(c) | WeightRepr::Ma(c) => Ok(c.clone()),
            WeightRepr::Ar1(a) => Ok((0..n).map(|i| a.powu(i as u32)).collect()),
            WeightRepr::Symbolic => Err(Error::Unsupported("symbolic weights have no numeric values".into())),
        }
    }

    pub fn sign_of(&self, c: &S) -> Result<Option<Sign>> {
        if c.is_zero() {
            return Ok(None);
        }
        match c.sign_with(&self.env) {
            Some(Ordering::Greater) => Ok(Some(Sign::Positive)),
            Some(Ordering::Less) => Ok(Some(Sign::Negative)),
            Some(Ordering::Equal) => Ok(None),
            None => Err(Error::precondition(format!("sign of weight {c} is undetermined"))),
        }
    }

    /// Sign classes that carry at least one nonzero weight.
    pub fn classes(&self) -> Result<Vec<Sign>> {
        let mut out = Vec::new();
        match &self.repr {
            WeightRepr::Explicit(c) | WeightRepr::Ma(c) => {
                for x in c {
                    if let Some(s) = self.sign_of(x)? {
                        if !out.contains(&s) {
                            out.push(s);
                        }
                    }
                }
            }
            WeightRepr::Ar1(a) => {
                out.push(Sign::Positive);
                if self.sign_of(a)? == Some(Sign::Negative) {
                    out.push(Sign::Negative);
                }
            }
            WeightRepr::Symbolic => out.push(Sign::Positive),
        }
        out.sort();
        Ok(out)
    }

    /// `Σ_{c_i of sign s} |c_i|^e (log|c_i|)^k`.
    pub fn class_power_sum(&self, s: Sign, e: &Exponent, k: u32) -> Result<S> {
        match &self.repr {
            WeightRepr::Explicit(c) | WeightRepr::Ma(c) => {
                let mut acc = S::zero();
                for x in c {
                    if self.sign_of(x)? != Some(s) {
                        continue;
                    }
                    let ax = s.apply(x.clone());
                    let mut t = ax.pow_exponent(e)?;
                    if k > 0 {
                        t = t * ax.ln()?.powu(k);
                    }
                    acc = acc + t;
                }
                Ok(acc)
            }
            WeightRepr::Ar1(a) => self.ar1_class_sum(a, s, e, k),
            WeightRepr::Symbolic => match s {
                Sign::Negative => Ok(S::zero()),
                Sign::Positive if k == 0 => S::atom(&format!("C[{e}]")),
                Sign::Positive => S::atom(&format!("ClogC[{e},{k}]")),
            },
        }
    }

    fn ar1_class_sum(&self, a: &S, s: Sign, e: &Exponent, k: u32) -> Result<S> {
        self.validate()?;
        let neg = self.sign_of(a)? == Some(Sign::Negative);
        if self.sign_of(a)?.is_none() {
            // weights (1, 0, 0, ...)
            return Ok(match (s, k) {
                (Sign::Positive, 0) => S::one(),
                _ => S::zero(),
            });
        }
        let abs = if neg { -a.clone() } else { a.clone() };
        let log = if k > 0 { abs.ln()? } else { S::one() };
        if !neg {
            if s == Sign::Negative {
                return Ok(S::zero());
            }
            let x = abs.pow_exponent(e)?;
            return Ok(log.powu(k) * polylog_neg(k, &x)?);
        }
        // even indices carry +, odd indices carry −; y = |a|^{2e}
        let y = abs.pow_exponent(&e.scale(&crate::exponent::q(2)))?;
        match s {
            Sign::Positive => Ok(S::from_i64(2).powu(k) * log.powu(k) * polylog_neg(k, &y)?),
            Sign::Negative => {
                let mut acc = S::zero();
                for r in 0..=k {
                    let c = S::from_bigint(&binomial(k as u64, r as u64)) * S::from_i64(2).powu(r);
                    acc = acc + c * polylog_neg(r, &y)?;
                }
                Ok(abs.pow_exponent(e)? * log.powu(k) * acc)
            }
        }
    }

    /// `C_p = Σ c_i^p`; signed weights need an integer `p`.
    pub fn power_sum(&self, p: &Exponent) -> Result<S> {
        let classes = self.classes()?;
        let mut acc = S::zero();
        for s in classes {
            let v = self.class_power_sum(s, p, 0)?;
            acc = acc
                + match s {
                    Sign::Positive => v,
                    Sign::Negative => match p.as_integer() {
                        Some(n) if n.clone() % 2 == BigInt::from(0) => v,
                        Some(_) => -v,
                        None => return Err(Error::precondition(format!("C_{p} undefined for negative weights"))),
                    },
                };
        }
        Ok(acc)
    }

    /// `|C|_p = Σ |c_i|^p`.
    pub fn abs_power_sum(&self, p: &Exponent) -> Result<S> {
        let mut acc = S::zero();
        for s in self.classes()? {
            acc = acc + self.class_power_sum(s, p, 0)?;
        }
        Ok(acc)
    }

    /// `Σ sign(c_i) |c_i|^p`.
    pub fn signed_abs_power_sum(&self, p: &Exponent) -> Result<S> {
        let mut acc = S::zero();
        for s in self.classes()? {
            acc = acc + s.apply(self.class_power_sum(s, p, 0)?);
        }
        Ok(acc)
    }

    /// `C_{p;q} = C_{p+q} − C_p C_q`.
    pub fn cross_sum(&self, p: &Exponent, q: &Exponent) -> Result<S> {
        Ok(self.power_sum(&(p + q))? - self.power_sum(p)? * self.power_sum(q)?)
    }

    pub fn scaled(&self, lambda: &S) -> Result<Self> {
        let repr = match &self.repr {
            WeightRepr::Explicit(c) => WeightRepr::Explicit(c.iter().map(|x| x.clone() * lambda.clone()).collect()),
            WeightRepr::Ma(c) => WeightRepr::Ma(c.iter().map(|x| x.clone() * lambda.clone()).collect()),
            _ => return Err(Error::Unsupported("scaling is defined for finite weight lists".into())),
        };
        Ok(WeightSequence { repr, env: self.env.clone() })
    }
}

impl WeightSequence<f64> {
    /// `|c|_p` for `p > 0`.
    pub fn lp_norm(&self, p: f64) -> Result<f64> {
        let e = crate::exponent::q_from_f64(p).map(Exponent::constant)?;
        Ok(self.abs_power_sum(&e)?.powf(1.0 / p))
    }

    pub fn sup_norm(&self) -> Result<f64> {
        match &self.repr {
            WeightRepr::Explicit(c) | WeightRepr::Ma(c) => Ok(c.iter().fold(0.0, |m, x| m.max(x.abs()))),
            WeightRepr::Ar1(a) => {
                self.validate()?;
                Ok(if *a == 0.0 { 1.0 } else { 1f64.max(a.abs()) })
            }
            WeightRepr::Symbolic => Err(Error::Unsupported("norm of symbolic weights".into())),
        }
    }

    /// `N_{α,γ,ω}(c) = |c|_p ∨ 2^{α/(α+ω)} |c|_∞` with `p = γ (α/(α+ω) ∧ 1/2)`.
    pub fn norm_n(&self, alpha: f64, gamma: f64, omega: f64) -> Result<f64> {
        let r = if omega.is_infinite() { 0.0 } else { alpha / (alpha + omega) };
        let p = gamma * r.min(0.5);
        if p <= 0.0 {
            return Err(Error::precondition("norm exponent must be positive"));
        }
        let lp = self.lp_norm(p)?;
        if !lp.is_finite() {
            return Err(Error::Divergent(format!("ℓ_{p} norm is infinite")));
        }
        Ok(lp.max(2f64.powf(r) * self.sup_norm()?))
    }
}

pub fn power_sum<S: Scalar>(w: &WeightSequence<S>, p: &Exponent) -> Result<S> {
    w.power_sum(p)
}

pub fn cross_sum<S: Scalar>(w: &WeightSequence<S>, p: &Exponent, q: &Exponent) -> Result<S> {
    w.cross_sum(p, q)
}

pub fn norm_n(w: &WeightSequence<f64>, alpha: f64, gamma: f64, omega: f64) -> Result<f64> {
    w.norm_n(alpha, gamma, omega)
}
