//! Distribution families with closed-form tail expansions and moments.

use std::cmp::Ordering;

use statrs::distribution::{ContinuousCDF, StudentsT};
use statrs::function::beta::beta as beta_fn;
use statrs::function::gamma::{gamma, gamma_ur};

use crate::error::{Error, Result};
use crate::exponent::{factorial, q, Assumptions, Exponent, Q};
use crate::laplace::MomentVector;
use crate::matrix::Matrix;
use crate::ring::Scalar;
use crate::scale::{ScaleBasis, ScaleItem};

/// One term `coeff · t^{-power} (log t)^{log_power}`.
#[derive(Clone, Debug, PartialEq)]
pub struct TailTerm<S> {
    pub coeff: S,
    pub item: ScaleItem,
}

impl<S> TailTerm<S> {
    pub fn pure(coeff: S, power: Exponent) -> Self {
        TailTerm { coeff, item: ScaleItem::pure(power) }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Family<S> {
    /// `(1 + t^τ/β)^{-γ}`.
    Burr { beta: S, tau: Exponent, gamma: Exponent },
    /// `a t^{-α} + b t^{-β}` for `t ≥ 1`.
    HallWeissman { a: S, b: S, alpha: Exponent, beta: Exponent },
    /// `1 − exp(−t^{-α})`.
    Frechet { alpha: Exponent },
    /// `(1 + t)^{-α}`.
    Pareto { alpha: Exponent },
    /// Student t with `α` degrees of freedom.
    Student { alpha: Exponent },
    /// Law of `exp(Z/α)` with `Z ~ Gamma(λ, 1)`.
    LogGamma { lambda: Exponent, alpha: Exponent },
    /// Mean `θ`.
    Exponential { theta: S },
    PointMass { at: S },
    /// User-supplied expansion; moments must be supplied as well.
    PowerSeriesTail { terms: Vec<TailTerm<S>> },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Support<S> {
    /// Supported on `[0, ∞)`; the lower tail vanishes.
    Nonnegative,
    /// Lower tail equals the upper tail.
    Symmetric,
    /// Lower tail `P(X < −t)` given explicitly.
    TwoSided { lower: Vec<TailTerm<S>> },
    /// Lower tail unknown; negative weights are rejected.
    Unspecified,
}

#[derive(Clone, Debug, PartialEq)]
pub struct DistributionSpec<S> {
    pub family: Family<S>,
    pub support: Support<S>,
    /// Overrides the closed-form moments.
    pub moments: Option<Vec<S>>,
    pub synthetic: bool,
    pub env: Assumptions,
}

#[derive(Clone, Debug, PartialEq)]
pub struct TailVector<S> {
    pub basis: ScaleBasis,
    pub p: Vec<S>,
}

impl<S: Scalar> TailVector<S> {
    pub fn zero(basis: ScaleBasis) -> Self {
        let n = basis.len();
        TailVector { basis, p: vec![S::zero(); n] }
    }

    /// Places `terms` into `basis`; terms beyond the cutoff are dropped.
    pub fn from_terms(basis: &ScaleBasis, terms: &[TailTerm<S>]) -> Result<Self> {
        let mut v = Self::zero(basis.clone());
        for t in terms {
            if !basis.within_cutoff(&t.item.power)? {
                continue;
            }
            let i = basis
                .index_of(&t.item)
                .ok_or_else(|| Error::precondition(format!("{} is not in the scale", t.item)))?;
            v.p[i] = v.p[i].clone() + t.coeff.clone();
        }
        Ok(v)
    }

    pub fn new(basis: ScaleBasis, p: Vec<S>) -> Result<Self> {
        if basis.len() != p.len() {
            return Err(Error::OrderMismatch("tail vector length differs from the scale".into()));
        }
        Ok(TailVector { basis, p })
    }

    /// Checks that the first nonzero coefficient is not negative.
    pub fn check_sign(&self) -> Result<()> {
        if let Some(x) = self.p.iter().find(|x| !x.is_zero()) {
            if x.sign_with(self.basis.assumptions()) == Some(Ordering::Less) {
                return Err(Error::precondition(format!("leading tail coefficient {x} is negative")));
            }
        }
        Ok(())
    }

    pub fn get(&self, it: &ScaleItem) -> S {
        self.basis.index_of(it).map(|i| self.p[i].clone()).unwrap_or_else(S::zero)
    }

    pub fn leading(&self) -> Option<(&ScaleItem, &S)> {
        self.basis.items().iter().zip(&self.p).find(|(_, x)| !x.is_zero())
    }

    pub fn apply(&self, m: &Matrix<S>) -> Self {
        TailVector { basis: self.basis.clone(), p: m.mul_vec(&self.p) }
    }

    /// Re-expresses in a larger scale that contains every element of `self.basis`.
    pub fn embed(&self, basis: &ScaleBasis) -> Result<Self> {
        let terms: Vec<TailTerm<S>> = self
            .basis
            .items()
            .iter()
            .zip(&self.p)
            .map(|(it, x)| TailTerm { coeff: x.clone(), item: it.clone() })
            .collect();
        Self::from_terms(basis, &terms)
    }

    /// Restricts to a prefix scale.
    pub fn restrict(&self, basis: &ScaleBasis) -> Result<Self> {
        let p = basis.items().iter().map(|it| self.get(it)).collect();
        Self::new(basis.clone(), p)
    }

    pub fn terms(&self) -> Vec<TailTerm<S>> {
        self.basis
            .items()
            .iter()
            .zip(&self.p)
            .map(|(it, x)| TailTerm { coeff: x.clone(), item: it.clone() })
            .collect()
    }

    /// Value of the expansion at `t` (float evaluation under the witness).
    pub fn eval_at(&self, t: f64) -> Option<f64> {
        let env = self.basis.assumptions();
        let mut s = 0.0;
        for (it, x) in self.basis.items().iter().zip(&self.p) {
            let c = x.eval_f64(env)?;
            if c == 0.0 {
                continue;
            }
            s += c * t.powf(-it.power.eval(env)?) * t.ln().powf(it.log_power.eval(env)?);
        }
        Some(s)
    }
}

fn float_only<S: Scalar>(what: &str, f: impl FnOnce() -> Option<f64>) -> Result<S> {
    if S::EXACT {
        return Err(Error::Inexact(what.to_string()));
    }
    let v = f().ok_or_else(|| Error::Inexact(what.to_string()))?;
    S::from_f64(v)
}

fn fx<S: Scalar>(x: &S) -> Option<f64> {
    x.to_f64()
}

fn fe(e: &Exponent) -> Option<f64> {
    e.eval(&Assumptions::new())
}

/// `Π_{r<k} (x + r)`.
fn rising<S: Scalar>(x: &Exponent, k: usize) -> Result<S> {
    let mut acc = S::one();
    for r in 0..k {
        acc = acc * S::from_exponent(&x.add_int(r as i64))?;
    }
    Ok(acc)
}

/// `Π_{r<k} (x − r)`.
fn falling<S: Scalar>(x: &Exponent, k: usize) -> Result<S> {
    let mut acc = S::one();
    for r in 0..k {
        acc = acc * S::from_exponent(&x.add_int(-(r as i64)))?;
    }
    Ok(acc)
}

fn inv_fact<S: Scalar>(k: usize) -> S {
    S::from_q(&Q::new(1.into(), factorial(k as u64)))
}

fn alt<S: Scalar>(k: usize, x: S) -> S {
    if k % 2 == 1 {
        -x
    } else {
        x
    }
}

/// Student-t upper-tail constant `α^{(α+1)/2} K_α`.
fn student_constant<S: Scalar>(alpha: &Exponent) -> Result<S> {
    if S::EXACT {
        return S::atom(&format!("A_t[{alpha}]"));
    }
    let a = fe(alpha).ok_or_else(|| Error::Inexact("Student constant".into()))?;
    let k = gamma((a + 1.0) / 2.0) / ((a * std::f64::consts::PI).sqrt() * gamma(a / 2.0));
    S::from_f64(a.powf((a + 1.0) / 2.0) * k)
}

impl<S: Scalar> DistributionSpec<S> {
    pub fn new(family: Family<S>) -> Self {
        let support = match family {
            Family::Student { .. } => Support::Symmetric,
            _ => Support::Nonnegative,
        };
        DistributionSpec { family, support, moments: None, synthetic: false, env: Assumptions::new() }
    }

    pub fn with_support(mut self, s: Support<S>) -> Self {
        self.support = s;
        self
    }

    pub fn with_moments(mut self, mu: Vec<S>) -> Self {
        self.moments = Some(mu);
        self
    }

    pub fn with_env(mut self, env: Assumptions) -> Self {
        self.env = env;
        self
    }

    pub fn synthetic(mut self) -> Self {
        self.synthetic = true;
        self
    }

    /// Tail index `α`; `None` for light-tailed laws.
    pub fn tail_index(&self) -> Result<Option<Exponent>> {
        Ok(match &self.family {
            Family::Burr { tau, gamma, .. } => {
                let g = gamma.as_constant().ok_or_else(|| Error::Unsupported("symbolic Burr γ".into()))?;
                Some(tau.scale(g))
            }
            Family::HallWeissman { alpha, beta, .. } => Some(match alpha.cmp_with(beta, &self.env)? {
                Ordering::Greater => beta.clone(),
                _ => alpha.clone(),
            }),
            Family::Frechet { alpha } | Family::Pareto { alpha } | Family::Student { alpha } => Some(alpha.clone()),
            Family::LogGamma { alpha, .. } => Some(alpha.clone()),
            Family::Exponential { .. } | Family::PointMass { .. } => None,
            Family::PowerSeriesTail { terms } => {
                let mut best: Option<&Exponent> = None;
                for t in terms.iter().filter(|t| !t.coeff.is_zero()) {
                    best = match best {
                        Some(b) if b.cmp_with(&t.item.power, &self.env)? != Ordering::Greater => Some(b),
                        _ => Some(&t.item.power),
                    };
                }
                Some(best.cloned().ok_or_else(|| Error::precondition("empty power-series tail"))?)
            }
        })
    }

    /// The `k`-th term of the upper-tail series, if any.
    fn series_term(&self, k: usize) -> Result<Option<TailTerm<S>>> {
        Ok(match &self.family {
            Family::Burr { beta, tau, gamma } => {
                let g = gamma.as_constant().ok_or_else(|| Error::Unsupported("symbolic Burr γ".into()))?;
                let power = tau.scale(g).add_q(&(tau.as_constant().cloned().ok_or_else(|| Error::Unsupported("symbolic Burr τ".into()))? * q(k as i64)));
                let coeff = beta.pow_exponent(&gamma.add_int(k as i64))? * rising::<S>(gamma, k)? * inv_fact::<S>(k);
                Some(TailTerm::pure(alt(k, coeff), power))
            }
            Family::HallWeissman { a, b, alpha, beta } => {
                let mut v = [(a.clone(), alpha.clone()), (b.clone(), beta.clone())];
                if alpha.cmp_with(beta, &self.env)? == Ordering::Greater {
                    v.swap(0, 1);
                }
                v.get(k).map(|(c, p)| TailTerm::pure(c.clone(), p.clone()))
            }
            Family::Frechet { alpha } => {
                let j = k + 1;
                Some(TailTerm::pure(alt(k, inv_fact::<S>(j)), alpha.scale(&q(j as i64))))
            }
            Family::Pareto { alpha } => {
                Some(TailTerm::pure(alt(k, rising::<S>(alpha, k)? * inv_fact::<S>(k)), alpha.add_int(k as i64)))
            }
            Family::Student { alpha } => {
                // A Σ_k C(−(α+1)/2, k) α^k t^{−α−2k} / (α + 2k)
                let half = alpha.add_int(1).scale(&crate::exponent::qr(1, 2));
                let binom = alt(k, rising::<S>(&half, k)? * inv_fact::<S>(k));
                let a = S::from_exponent(alpha)?;
                let coeff = student_constant::<S>(alpha)? * binom * a.powu(k as u32)
                    * S::from_exponent(&alpha.add_int(2 * k as i64))?.inv()?;
                Some(TailTerm::pure(coeff, alpha.add_int(2 * k as i64)))
            }
            Family::LogGamma { lambda, alpha } => {
                if let Some(n) = lambda.as_integer() {
                    if num_bigint::BigInt::from(k) >= n {
                        return Ok(None);
                    }
                }
                let lp = lambda.add_int(-1 - k as i64);
                let coeff = S::from_exponent(alpha)?.pow_exponent(&lp)? * falling::<S>(&lambda.add_int(-1), k)? * gamma_of::<S>(lambda)?.inv()?;
                Some(TailTerm { coeff, item: ScaleItem::new(alpha.clone(), lp) })
            }
            Family::Exponential { .. } | Family::PointMass { .. } => {
                return Err(Error::Unsupported("light-tailed law has no power expansion".into()))
            }
            Family::PowerSeriesTail { terms } => terms.get(k).cloned(),
        })
    }

    /// Terms with power at most `cutoff`, at most `max_terms` of them.
    pub fn expand_tail_to(&self, cutoff: &Exponent, max_terms: usize) -> Result<Vec<TailTerm<S>>> {
        let mut out = Vec::new();
        let mut k = 0;
        let monotone = !matches!(self.family, Family::PowerSeriesTail { .. } | Family::HallWeissman { .. });
        while out.len() < max_terms {
            let Some(t) = self.series_term(k)? else { break };
            k += 1;
            if t.item.power.cmp_with(cutoff, &self.env)? == Ordering::Greater {
                if monotone {
                    break;
                }
                continue;
            }
            out.push(t);
        }
        Ok(out)
    }

    /// Lower-tail terms; `None` when the lower tail vanishes.
    pub fn lower_terms_to(&self, cutoff: &Exponent, max_terms: usize) -> Result<Option<Vec<TailTerm<S>>>> {
        match &self.support {
            Support::Nonnegative => Ok(None),
            Support::Symmetric => self.expand_tail_to(cutoff, max_terms).map(Some),
            Support::TwoSided { lower } => Ok(Some(
                lower
                    .iter()
                    .filter(|t| t.item.power.cmp_with(cutoff, &self.env).map(|o| o != Ordering::Greater).unwrap_or(false))
                    .cloned()
                    .collect(),
            )),
            Support::Unspecified => Err(Error::precondition("negative weight but the law has no lower-tail vector")),
        }
    }

    pub fn moments(&self, m: usize) -> Result<MomentVector<S>> {
        if let Some(mu) = &self.moments {
            if mu.len() < m + 1 {
                return Err(Error::OrderMismatch(format!("{} moments supplied, order {m} requested", mu.len().saturating_sub(1))));
            }
            let v = mu[..=m].to_vec();
            return if self.synthetic { MomentVector::synthetic(v) } else { MomentVector::probability(v, &self.env) };
        }
        if let Some(alpha) = self.tail_index()? {
            if alpha.cmp_with(&Exponent::int(m as i64), &self.env)? != Ordering::Greater {
                return Err(Error::MissingMoment { order: m, index: alpha.to_string() });
            }
        }
        let mu = (0..=m).map(|k| self.moment(k)).collect::<Result<Vec<S>>>()?;
        MomentVector::probability(mu, &self.env)
    }

    fn moment(&self, k: usize) -> Result<S> {
        if k == 0 {
            return Ok(S::one());
        }
        self.fractional_moment(&Exponent::int(k as i64))
    }

    /// `E X^e` for `e ≥ 0` (`E|X|^e` is not attempted for signed laws).
    pub fn fractional_moment(&self, e: &Exponent) -> Result<S> {
        let ki = e.as_i64().filter(|k| *k >= 0).map(|k| k as usize);
        match &self.family {
            Family::Exponential { theta } => match ki {
                Some(k) => Ok(S::from_bigint(&factorial(k as u64)) * theta.powu(k as u32)),
                None if S::EXACT => {
                    let (s, n) = e.split_integer();
                    let n: usize = n.try_into().map_err(|_| Error::Unsupported("huge exponent".into()))?;
                    let atom = S::atom(&format!("[{theta}^({s})*Gamma({})]", s.add_int(1)))?;
                    Ok(atom * theta.powu(n as u32) * rising::<S>(&s.add_int(1), n)?)
                }
                None => float_only("θ^e Γ(1+e)", || Some(fx(theta)?.powf(fe(e)?) * gamma(1.0 + fe(e)?))),
            },
            Family::PointMass { at } => match ki {
                Some(k) => Ok(at.powu(k as u32)),
                None => at.pow_exponent(e),
            },
            Family::Pareto { alpha } => match ki {
                Some(k) => {
                    let mut den = S::one();
                    for j in 1..=k {
                        den = den * S::from_exponent(&alpha.add_int(-(j as i64)))?;
                    }
                    Ok(S::from_bigint(&factorial(k as u64)) * den.inv()?)
                }
                None => float_only("Pareto moment", || {
                    let (s, a) = (fe(e)?, fe(alpha)?);
                    Some(gamma(s + 1.0) * gamma(a - s) / gamma(a))
                }),
            },
            Family::Burr { beta, tau, gamma: g } => {
                // β^{s} γ B(γ − s, 1 + s) with s = e/τ
                let tq = tau.as_constant().ok_or_else(|| Error::Unsupported("symbolic Burr τ".into()))?;
                let s = e.scale(&tq.recip());
                if let Some(si) = s.as_i64().filter(|x| *x >= 0) {
                    let mut den = S::one();
                    for j in 0..=si {
                        den = den * S::from_exponent(&g.add_int(-j))?;
                    }
                    return Ok(beta.pow_exponent(&s)? * S::from_bigint(&factorial(si as u64)) * S::from_exponent(g)? * den.inv()?);
                }
                float_only("Burr moment", || {
                    let (s, gv, b) = (fe(&s)?, fe(g)?, fx(beta)?);
                    Some(b.powf(s) * gv * beta_fn(gv - s, 1.0 + s))
                })
            }
            Family::HallWeissman { a, b, alpha, beta } => {
                if !(a.clone() + b.clone() - S::one()).is_negligible(1.0) {
                    return Err(Error::precondition("Hall-Weissman moments need a + b = 1 (support [1, ∞))"));
                }
                let ev = S::from_exponent(e)?;
                let ta = a.clone() * S::from_exponent(&(alpha - e))?.inv()?;
                let tb = b.clone() * S::from_exponent(&(beta - e))?.inv()?;
                Ok(S::one() + ev * (ta + tb))
            }
            Family::Frechet { alpha } => float_only("Fréchet moment", || Some(gamma(1.0 - fe(e)? / fe(alpha)?))),
            Family::LogGamma { lambda, alpha } => {
                let base = S::one() - S::from_exponent(e)? * S::from_exponent(alpha)?.inv()?;
                base.inv()?.pow_exponent(lambda)
            }
            Family::Student { alpha } => match ki {
                Some(k) if k % 2 == 1 => Ok(S::zero()),
                Some(k) => {
                    let j = k / 2;
                    let a = S::from_exponent(alpha)?;
                    let mut v = a.powu(j as u32);
                    for i in 1..=j {
                        v = v * S::from_q(&crate::exponent::qr(2 * i as i64 - 1, 2));
                        v = v * (S::from_exponent(alpha)? * S::from_q(&crate::exponent::qr(1, 2)) - S::from_i64(i as i64)).inv()?;
                    }
                    Ok(v)
                }
                None => Err(Error::Unsupported("fractional moments of a signed law".into())),
            },
            Family::PowerSeriesTail { .. } => Err(Error::precondition("power-series tails need explicit moments")),
        }
    }
}

/// `Γ(x)` for integer or float arguments.
fn gamma_of<S: Scalar>(x: &Exponent) -> Result<S> {
    if let Some(n) = x.as_i64().filter(|n| *n >= 1) {
        return Ok(S::from_bigint(&factorial(n as u64 - 1)));
    }
    float_only("Γ", || Some(gamma(fe(x)?)))
}

/// First `n_terms` terms as a scale and tail vector.
pub fn expand_tail<S: Scalar>(spec: &DistributionSpec<S>, n_terms: usize) -> Result<(ScaleBasis, TailVector<S>)> {
    if n_terms == 0 {
        return Err(Error::precondition("n_terms must be at least 1"));
    }
    let mut terms = Vec::new();
    let mut k = 0;
    while terms.len() < n_terms {
        match spec.series_term(k)? {
            Some(t) => terms.push(t),
            None => break,
        }
        k += 1;
    }
    let mut cutoff = terms[0].item.power.clone();
    for t in &terms {
        if t.item.power.cmp_with(&cutoff, &spec.env)? == Ordering::Greater {
            cutoff = t.item.power.clone();
        }
    }
    let basis = ScaleBasis::new(terms.iter().map(|t| t.item.clone()).collect(), cutoff, spec.env.clone())?;
    let v = TailVector::from_terms(&basis, &terms)?;
    Ok((basis, v))
}

pub fn moments<S: Scalar>(spec: &DistributionSpec<S>, m: usize) -> Result<MomentVector<S>> {
    spec.moments(m)
}

impl<S: Scalar> DistributionSpec<S> {
    /// Float copy with every parameter evaluated under the witness values.
    pub fn to_f64(&self) -> Result<DistributionSpec<f64>> {
        let env = &self.env;
        let val = |x: &S| x.eval_f64(env).ok_or_else(|| Error::Inexact(format!("{x} has no numeric value")));
        let ex = |e: &Exponent| -> Result<Exponent> {
            let v = e.eval(env).ok_or_else(|| Error::Inexact(format!("{e} has no numeric value")))?;
            Ok(Exponent::constant(crate::exponent::q_from_f64(v)?))
        };
        let terms = |v: &[TailTerm<S>]| -> Result<Vec<TailTerm<f64>>> {
            v.iter()
                .map(|t| Ok(TailTerm { coeff: val(&t.coeff)?, item: ScaleItem::new(ex(&t.item.power)?, ex(&t.item.log_power)?) }))
                .collect()
        };
        let family = match &self.family {
            Family::Burr { beta, tau, gamma } => Family::Burr { beta: val(beta)?, tau: ex(tau)?, gamma: ex(gamma)? },
            Family::HallWeissman { a, b, alpha, beta } => {
                Family::HallWeissman { a: val(a)?, b: val(b)?, alpha: ex(alpha)?, beta: ex(beta)? }
            }
            Family::Frechet { alpha } => Family::Frechet { alpha: ex(alpha)? },
            Family::Pareto { alpha } => Family::Pareto { alpha: ex(alpha)? },
            Family::Student { alpha } => Family::Student { alpha: ex(alpha)? },
            Family::LogGamma { lambda, alpha } => Family::LogGamma { lambda: ex(lambda)?, alpha: ex(alpha)? },
            Family::Exponential { theta } => Family::Exponential { theta: val(theta)? },
            Family::PointMass { at } => Family::PointMass { at: val(at)? },
            Family::PowerSeriesTail { terms: t } => Family::PowerSeriesTail { terms: terms(t)? },
        };
        let support = match &self.support {
            Support::Nonnegative => Support::Nonnegative,
            Support::Symmetric => Support::Symmetric,
            Support::Unspecified => Support::Unspecified,
            Support::TwoSided { lower } => Support::TwoSided { lower: terms(lower)? },
        };
        let moments = match &self.moments {
            Some(m) => Some(m.iter().map(val).collect::<Result<Vec<f64>>>()?),
            None => None,
        };
        Ok(DistributionSpec { family, support, moments, synthetic: self.synthetic, env: Assumptions::new() })
    }
}

impl DistributionSpec<f64> {
    fn num(e: &Exponent) -> Result<f64> {
        fe(e).ok_or_else(|| Error::Unsupported(format!("symbolic parameter {e} in float evaluation")))
    }

    /// Exact `P(X > t)`.
    pub fn tail_probability(&self, t: f64) -> Result<f64> {
        Ok(match &self.family {
            Family::Burr { beta, tau, gamma } => {
                if t <= 0.0 {
                    1.0
                } else {
                    (1.0 + t.powf(Self::num(tau)?) / beta).powf(-Self::num(gamma)?)
                }
            }
            Family::HallWeissman { a, b, alpha, beta } => {
                if t < 1.0 {
                    1.0
                } else {
                    a * t.powf(-Self::num(alpha)?) + b * t.powf(-Self::num(beta)?)
                }
            }
            Family::Frechet { alpha } => {
                if t <= 0.0 {
                    1.0
                } else {
                    -(-t.powf(-Self::num(alpha)?)).exp_m1()
                }
            }
            Family::Pareto { alpha } => {
                if t <= 0.0 {
                    1.0
                } else {
                    (1.0 + t).powf(-Self::num(alpha)?)
                }
            }
            Family::Student { alpha } => {
                let d = StudentsT::new(0.0, 1.0, Self::num(alpha)?).map_err(|e| Error::precondition(e.to_string()))?;
                d.sf(t)
            }
            Family::LogGamma { lambda, alpha } => {
                if t <= 1.0 {
                    1.0
                } else {
                    gamma_ur(Self::num(lambda)?, Self::num(alpha)? * t.ln())
                }
            }
            Family::Exponential { theta } => {
                if t <= 0.0 {
                    1.0
                } else {
                    (-t / theta).exp()
                }
            }
            Family::PointMass { at } => {
                if t < *at {
                    1.0
                } else {
                    0.0
                }
            }
            Family::PowerSeriesTail { .. } => return Err(Error::Unsupported("no exact tail for a power-series law".into())),
        })
    }

    /// Density on the support.
    pub fn density(&self, x: f64) -> Result<f64> {
        Ok(match &self.family {
            Family::Burr { beta, tau, gamma } => {
                if x <= 0.0 {
                    return Ok(0.0);
                }
                let (t, g) = (Self::num(tau)?, Self::num(gamma)?);
                g * t / beta * x.powf(t - 1.0) * (1.0 + x.powf(t) / beta).powf(-g - 1.0)
            }
            Family::HallWeissman { a, b, alpha, beta } => {
                if x < 1.0 {
                    return Ok(0.0);
                }
                let (p, r) = (Self::num(alpha)?, Self::num(beta)?);
                a * p * x.powf(-p - 1.0) + b * r * x.powf(-r - 1.0)
            }
            Family::Frechet { alpha } => {
                if x <= 0.0 {
                    return Ok(0.0);
                }
                let a = Self::num(alpha)?;
                a * x.powf(-a - 1.0) * (-x.powf(-a)).exp()
            }
            Family::Pareto { alpha } => {
                if x < 0.0 {
                    return Ok(0.0);
                }
                let a = Self::num(alpha)?;
                a * (1.0 + x).powf(-a - 1.0)
            }
            Family::Student { alpha } => {
                use statrs::distribution::Continuous;
                StudentsT::new(0.0, 1.0, Self::num(alpha)?).map_err(|e| Error::precondition(e.to_string()))?.pdf(x)
            }
            Family::LogGamma { lambda, alpha } => {
                if x <= 1.0 {
                    return Ok(0.0);
                }
                let (l, a) = (Self::num(lambda)?, Self::num(alpha)?);
                a.powf(l) / gamma(l) * x.ln().powf(l - 1.0) * x.powf(-a - 1.0)
            }
            Family::Exponential { theta } => {
                if x < 0.0 {
                    return Ok(0.0);
                }
                (-x / theta).exp() / theta
            }
            Family::PointMass { .. } | Family::PowerSeriesTail { .. } => {
                return Err(Error::Unsupported("law has no density".into()))
            }
        })
    }
}
