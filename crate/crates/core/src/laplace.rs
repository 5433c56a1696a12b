//! Laplace characters in the truncated operator ring `R_m[D]`.

use std::cmp::Ordering;

use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::exponent::{binomial, factorial, Assumptions, Q};
use crate::ring::{Ring, Scalar};
use crate::series::Series;

fn inv_fact<T: Ring>(j: usize) -> T {
    T::from_q(&Q::new(BigInt::from(1), factorial(j as u64)))
}

fn fact<T: Ring>(j: usize) -> T {
    T::from_bigint(&factorial(j as u64))
}

fn alt<T: Ring>(j: usize, x: T) -> T {
    if j % 2 == 1 {
        -x
    } else {
        x
    }
}

/// Moments `μ_0..μ_m` with `μ_0 = 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct MomentVector<T> {
    mu: Vec<T>,
    synthetic: bool,
}

impl<T: Ring> MomentVector<T> {
    pub fn new(mu: Vec<T>) -> Result<Self> {
        if mu.first() != Some(&T::one()) {
            return Err(Error::precondition("moment vector must start with μ_0 = 1"));
        }
        Ok(MomentVector { mu, synthetic: false })
    }

    /// A vector that need not come from a probability law.
    pub fn synthetic(mu: Vec<T>) -> Result<Self> {
        let mut v = Self::new(mu)?;
        v.synthetic = true;
        Ok(v)
    }

    pub fn point_mass_zero(m: usize) -> Self {
        let mut mu = vec![T::zero(); m + 1];
        mu[0] = T::one();
        MomentVector { mu, synthetic: false }
    }

    pub fn point_mass_one(m: usize) -> Self {
        MomentVector { mu: vec![T::one(); m + 1], synthetic: false }
    }

    pub fn order(&self) -> usize {
        self.mu.len() - 1
    }

    pub fn mu(&self) -> &[T] {
        &self.mu
    }

    pub fn get(&self, j: usize) -> &T {
        &self.mu[j]
    }

    pub fn is_synthetic(&self) -> bool {
        self.synthetic
    }

    pub fn truncate(&self, m: usize) -> Result<Self> {
        if m > self.order() {
            return Err(Error::OrderMismatch(format!("need order {m}, have {}", self.order())));
        }
        Ok(MomentVector { mu: self.mu[..=m].to_vec(), synthetic: self.synthetic })
    }

    /// Central moment `E(X − μ_1)^k`.
    pub fn central(&self, k: usize) -> T {
        if self.order() == 0 {
            return if k == 0 { T::one() } else { T::zero() };
        }
        let m1 = self.mu[1].clone();
        (0..=k.min(self.order())).fold(T::zero(), |acc, i| {
            let t = T::from_bigint(&binomial(k as u64, i as u64)) * self.mu[i].clone() * (-m1.clone()).powu((k - i) as u32);
            acc + t
        })
    }

    pub fn variance(&self) -> T {
        self.central(2)
    }

    pub fn kappa3(&self) -> T {
        self.central(3)
    }

    pub fn kappa4(&self) -> T {
        self.central(4)
    }

    pub fn cumulants(&self) -> Result<Vec<T>> {
        let s = Series::new(self.mu.iter().enumerate().map(|(j, m)| m.clone() * inv_fact::<T>(j)).collect());
        let l = s.log()?;
        Ok(l.coeffs().iter().enumerate().map(|(j, c)| c.clone() * fact::<T>(j)).collect())
    }

    /// Moments from cumulants `κ_1..κ_m` (index 0 ignored).
    pub fn from_cumulants(kappa: &[T]) -> Result<Self> {
        let mut c: Vec<T> = kappa.iter().enumerate().map(|(j, k)| k.clone() * inv_fact::<T>(j)).collect();
        c[0] = T::zero();
        let e = Series::new(c).exp()?;
        Self::new(e.coeffs().iter().enumerate().map(|(j, c)| c.clone() * fact::<T>(j)).collect())
    }
}

impl<S: Scalar> MomentVector<S> {
    /// Moments claimed to come from a probability law: σ² ≥ 0 is checked when decidable.
    pub fn probability(mu: Vec<S>, env: &Assumptions) -> Result<Self> {
        let v = Self::new(mu)?;
        if v.order() >= 2 && v.variance().sign_with(env) == Some(Ordering::Less) {
            return Err(Error::precondition("negative variance for a probability law"));
        }
        Ok(v)
    }
}

/// Coefficients `l_j = (−1)^j μ_j / j!` of `Σ l_j D^j`.
#[derive(Clone, Debug, PartialEq)]
pub struct LaplaceCharacter<T> {
    coeff: Vec<T>,
    moments: Vec<T>,
}

impl<T: Ring> LaplaceCharacter<T> {
    pub fn new(coeff: Vec<T>, moments: Vec<T>) -> Result<Self> {
        if coeff.len() != moments.len() || coeff.is_empty() {
            return Err(Error::OrderMismatch("coefficient and moment lengths differ".into()));
        }
        for (j, (l, mu)) in coeff.iter().zip(&moments).enumerate() {
            if alt(j, l.clone() * fact::<T>(j)) != *mu {
                return Err(Error::Internal(format!("character coefficient {j} inconsistent with its moment")));
            }
        }
        Ok(LaplaceCharacter { coeff, moments })
    }

    pub fn from_coefficients(coeff: Vec<T>) -> Self {
        let moments = coeff.iter().enumerate().map(|(j, l)| alt(j, l.clone() * fact::<T>(j))).collect();
        LaplaceCharacter { coeff, moments }
    }

    pub fn from_moment_slice(mu: &[T]) -> Self {
        let coeff = mu.iter().enumerate().map(|(j, m)| alt(j, m.clone() * inv_fact::<T>(j))).collect();
        LaplaceCharacter { coeff, moments: mu.to_vec() }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_moment_slice(MomentVector::<T>::point_mass_zero(m).mu())
    }

    pub fn constant(x: T, m: usize) -> Self {
        let mut c = vec![T::zero(); m + 1];
        c[0] = x;
        Self::from_coefficients(c)
    }

    pub fn order(&self) -> usize {
        self.coeff.len() - 1
    }

    pub fn coeff(&self) -> &[T] {
        &self.coeff
    }

    /// "Moments" `(−1)^j j! l_j`; for non-probability operators these are formal.
    pub fn moments(&self) -> &[T] {
        &self.moments
    }

    pub fn to_moment_vector(&self) -> Result<MomentVector<T>> {
        MomentVector::new(self.moments.clone())
    }

    fn check_same(&self, o: &Self) -> Result<()> {
        if self.order() != o.order() {
            return Err(Error::OrderMismatch(format!("orders {} and {}", self.order(), o.order())));
        }
        Ok(())
    }

    pub fn add(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_coefficients(self.coeff.iter().zip(&o.coeff).map(|(a, b)| a.clone() + b.clone()).collect()))
    }

    pub fn sub(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_coefficients(self.coeff.iter().zip(&o.coeff).map(|(a, b)| a.clone() - b.clone()).collect()))
    }

    pub fn scale(&self, x: &T) -> Self {
        Self::from_coefficients(self.coeff.iter().map(|a| a.clone() * x.clone()).collect())
    }

    pub fn compose(&self, o: &Self) -> Result<Self> {
        self.check_same(o)?;
        Ok(Self::from_coefficients(Series::new(self.coeff.clone()).mul(&Series::new(o.coeff.clone())).into_coeffs()))
    }

    /// Moves coefficients up `j` slots, dropping those beyond the order.
    pub fn shift(&self, j: usize) -> Self {
        let m = self.order();
        let c = (0..=m).map(|i| if i >= j { self.coeff[i - j].clone() } else { T::zero() }).collect();
        Self::from_coefficients(c)
    }

    pub fn truncate(&self, m: usize) -> Self {
        Self::from_coefficients((0..=m).map(|j| self.coeff.get(j).cloned().unwrap_or_else(T::zero)).collect())
    }

    pub fn invert_partitions(&self) -> Result<Self> {
        invert_partitions(self)
    }

    pub fn invert_nilpotent(&self) -> Result<Self> {
        invert_nilpotent(self)
    }

    /// Two-sided inverse via the series reciprocal.
    pub fn inverse(&self) -> Result<Self> {
        let r = Series::new(self.coeff.clone()).reciprocal()?;
        Ok(Self::from_coefficients(r.into_coeffs()))
    }
}

pub fn character_from_moments<T: Ring>(mv: &MomentVector<T>) -> LaplaceCharacter<T> {
    LaplaceCharacter::from_moment_slice(mv.mu())
}

pub fn compose<T: Ring>(a: &LaplaceCharacter<T>, b: &LaplaceCharacter<T>) -> Result<LaplaceCharacter<T>> {
    a.compose(b)
}

pub fn convolve_moments<T: Ring>(a: &MomentVector<T>, b: &MomentVector<T>) -> Result<MomentVector<T>> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch(format!("orders {} and {}", a.order(), b.order())));
    }
    let mu = (0..=a.order())
        .map(|k| {
            (0..=k).fold(T::zero(), |acc, i| {
                acc + T::from_bigint(&binomial(k as u64, i as u64)) * a.mu[i].clone() * b.mu[k - i].clone()
            })
        })
        .collect();
    Ok(MomentVector { mu, synthetic: a.synthetic || b.synthetic })
}

/// Partitions of `n` as part-count vectors `c[k]` = number of parts equal to `k`, parts ≤ `max`.
fn partitions(n: usize, max: usize) -> Vec<Vec<usize>> {
    fn rec(rem: usize, largest: usize, counts: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rem == 0 {
            out.push(counts.clone());
            return;
        }
        for k in (1..=largest.min(rem)).rev() {
            counts[k] += 1;
            rec(rem - k, k, counts, out);
            counts[k] -= 1;
        }
    }
    let mut out = Vec::new();
    let mut counts = vec![0; n.max(max) + 1];
    rec(n, max, &mut counts, &mut out);
    out
}

/// Inverse by the explicit sum over partitions.
pub fn invert_partitions<T: Ring>(a: &LaplaceCharacter<T>) -> Result<LaplaceCharacter<T>> {
    let inv0 = a.coeff[0].try_inv().ok_or_else(|| Error::NotInvertible("l_0 = 0".into()))?;
    let l: Vec<T> = a.coeff.iter().map(|x| x.clone() * inv0.clone()).collect();
    let m = a.order();
    let mut out = Vec::with_capacity(m + 1);
    for n in 0..=m {
        let mut s = T::zero();
        for counts in partitions(n, m) {
            let p1: usize = counts.iter().sum();
            let mut coef = factorial(p1 as u64);
            for c in &counts {
                coef /= factorial(*c as u64);
            }
            let mut t = T::from_bigint(&coef);
            for (k, c) in counts.iter().enumerate().skip(1) {
                if *c > 0 {
                    t = t * l[k].powu(*c as u32);
                }
            }
            s = s + alt(p1, t);
        }
        out.push(s * inv0.clone());
    }
    Ok(LaplaceCharacter::from_coefficients(out))
}

/// Inverse as `Σ_{k≤m} (Id − a)^k`; needs `l_0 = 1`.
pub fn invert_nilpotent<T: Ring>(a: &LaplaceCharacter<T>) -> Result<LaplaceCharacter<T>> {
    if a.coeff[0] != T::one() {
        return Err(Error::NotInvertible("nilpotent inversion needs l_0 = 1".into()));
    }
    let m = a.order();
    let id = LaplaceCharacter::identity(m);
    let n = id.sub(a)?;
    let mut acc = id.clone();
    let mut pw = id;
    for _ in 1..=m {
        pw = pw.compose(&n)?;
        acc = acc.add(&pw)?;
    }
    Ok(acc)
}

/// Character of the product law: coefficient-wise moment product.
pub fn mellin_character<T: Ring>(a: &MomentVector<T>, b: &MomentVector<T>) -> Result<LaplaceCharacter<T>> {
    if a.order() != b.order() {
        return Err(Error::OrderMismatch(format!("orders {} and {}", a.order(), b.order())));
    }
    let mu: Vec<T> = a.mu.iter().zip(&b.mu).map(|(x, y)| x.clone() * y.clone()).collect();
    Ok(LaplaceCharacter::from_moment_slice(&mu))
}

/// Order-`m` character of `H(t) = μ_1^{-1} ∫_0^t B̄` from order-`m+1` moments of `B`.
pub fn equilibrium_character<S: Scalar>(b: &MomentVector<S>) -> Result<LaplaceCharacter<S>> {
    if b.order() == 0 {
        return Err(Error::OrderMismatch("equilibrium character needs moments of order ≥ 1".into()));
    }
    let m1 = b.get(1).clone();
    match m1.sign() {
        Some(Ordering::Greater) | None if !m1.is_zero() => {}
        _ => return Err(Error::precondition("equilibrium law needs a positive mean")),
    }
    let lb = character_from_moments(b);
    let inv = m1.inv()?;
    let coeff = (0..b.order()).map(|j| -(lb.coeff[j + 1].clone() * inv.clone())).collect();
    Ok(LaplaceCharacter::from_coefficients(coeff))
}

pub fn equilibrium_moments<S: Scalar>(b: &MomentVector<S>) -> Result<MomentVector<S>> {
    MomentVector::new(equilibrium_character(b)?.moments)
}

pub fn scale_moments<T: Ring>(mv: &MomentVector<T>, c: &T) -> MomentVector<T> {
    let mut p = T::one();
    let mu = mv
        .mu
        .iter()
        .enumerate()
        .map(|(j, m)| {
            if j > 0 {
                p = p.clone() * c.clone();
            }
            m.clone() * p.clone()
        })
        .collect();
    MomentVector { mu, synthetic: mv.synthetic }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qr};
    use crate::sym::{sym, Sym};

    fn mv(v: &[Q]) -> MomentVector<Q> {
        MomentVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn definition_cases() {
        let c = character_from_moments(&mv(&[q(1), qr(1, 2)]));
        assert_eq!(c.coeff(), &[q(1), qr(-1, 2)]);
        let s = character_from_moments(&MomentVector::new(vec![sym("1"), sym("m1"), sym("m2")]).unwrap());
        assert_eq!(s.coeff(), &[sym("1"), sym("-m1"), sym("m2/2")]);
        assert_eq!(character_from_moments(&MomentVector::<Q>::point_mass_zero(3)), LaplaceCharacter::identity(3));
    }

    #[test]
    fn nilpotent_m2() {
        let a = character_from_moments(&MomentVector::new(vec![sym("1"), sym("m1"), sym("m2")]).unwrap());
        let inv = invert_nilpotent(&a).unwrap();
        assert_eq!(inv.coeff(), &[sym("1"), sym("m1"), sym("m1^2 - m2/2")]);
        assert_eq!(invert_partitions(&a).unwrap(), inv);
        assert_eq!(a.compose(&inv).unwrap(), LaplaceCharacter::identity(2));
    }

    #[test]
    fn partition_inverse_non_unit_constant() {
        let a = LaplaceCharacter::from_coefficients(vec![q(2), q(3), q(-1), q(5)]);
        let b = invert_partitions(&a).unwrap();
        assert_eq!(a.compose(&b).unwrap(), LaplaceCharacter::identity(3));
        assert_eq!(b, a.inverse().unwrap());
        assert!(invert_nilpotent(&a).is_err());
        assert!(invert_partitions(&LaplaceCharacter::from_coefficients(vec![q(0), q(1)])).is_err());
    }

    #[test]
    fn convolution_cases() {
        assert_eq!(convolve_moments(&mv(&[q(1), q(1)]), &mv(&[q(1), q(2)])).unwrap(), mv(&[q(1), q(3)]));
        let a = LaplaceCharacter::from_coefficients(vec![q(1), q(-3)]);
        let b = LaplaceCharacter::from_coefficients(vec![q(1), q(-4)]);
        assert_eq!(a.compose(&b).unwrap().coeff(), &[q(1), q(-7)]);
    }

    #[test]
    fn mellin_and_equilibrium() {
        let theta = sym("theta");
        let e1 = MomentVector::new(vec![Sym::one(), theta.clone()]).unwrap();
        let par = MomentVector::new(vec![Sym::one(), sym("1/2")]).unwrap();
        assert_eq!(mellin_character(&par, &e1).unwrap().coeff(), &[sym("1"), sym("-theta/2")]);

        let ex = MomentVector::new(vec![Sym::one(), theta.clone(), sym("2*theta^2")]).unwrap();
        let h = equilibrium_character(&ex).unwrap();
        assert_eq!(h, character_from_moments(&ex.truncate(1).unwrap()));

        let uni = mv(&[q(1), qr(1, 2), qr(1, 3)]);
        assert_eq!(equilibrium_character(&uni).unwrap().coeff(), &[q(1), qr(-1, 3)]);
        assert!(equilibrium_character(&mv(&[q(1), q(0), q(1)])).is_err());
    }

    #[test]
    fn scaling() {
        assert_eq!(scale_moments(&mv(&[q(1), q(1), q(2)]), &q(2)), mv(&[q(1), q(2), q(8)]));
        assert_eq!(scale_moments(&mv(&[q(1), q(1), q(2)]), &q(0)), MomentVector::point_mass_zero(2));
    }

    #[test]
    fn cumulant_roundtrip() {
        let m = mv(&[q(1), q(2), q(7), q(-3), q(11)]);
        let k = m.cumulants().unwrap();
        assert_eq!(k[1], q(2));
        assert_eq!(k[2], q(3));
        assert_eq!(MomentVector::from_cumulants(&k).unwrap(), m);
    }

    #[test]
    fn central_moments() {
        let m = MomentVector::new(vec![sym("1"), sym("a"), sym("b"), sym("c")]).unwrap();
        assert_eq!(m.variance(), sym("b - a^2"));
        assert_eq!(m.kappa3(), sym("c - 3*a*b + 2*a^3"));
    }
}
