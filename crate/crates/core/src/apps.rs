//! Solvers built on the character algebra: random sums, the M/G/1 queue, branching,
//! infinitely divisible laws, renewal equations and second-order classification.

use std::cmp::Ordering;
use std::fmt;

use crate::engine::{Sign, WeightRepr, WeightSequence, DEFAULT_MAX_TERMS};
use crate::error::{Error, Result};
use crate::exponent::{binomial, q_from_f64, Assumptions, Exponent};
use crate::laplace::{equilibrium_moments, mellin_character, LaplaceCharacter, MomentVector};
use crate::matrix::{add_vec, scale_vec, Matrix};
use crate::oracle::quadrature::integrate_half_line;
use crate::ring::Scalar;
use crate::scale::{character_matrix, close_under_derivative, laplace_matrix, PowerLog, ScaleBasis, ScaleItem};
use crate::series::Series;
use crate::tails::{DistributionSpec, Family, Support, TailTerm, TailVector};

/// `μ_k = (−1)^k k! [s^k] Λ(s)`.
fn moments_from_transform<S: Scalar>(lam: &Series<S>) -> Result<MomentVector<S>> {
    let inv = LaplaceCharacter::from_coefficients(lam.coeffs().to_vec());
    let mut mu = inv.moments().to_vec();
    mu[0] = S::one();
    MomentVector::new(mu)
}

fn positive<S: Scalar>(x: &S, env: &Assumptions) -> Option<bool> {
    x.sign_with(env).map(|o| o == Ordering::Greater)
}

/// Moments of `N` with `P(N = k) = (1 − p) p^k`, `k ≥ 0`.
pub fn geometric_moments<S: Scalar>(p: &S, m: usize) -> Result<MomentVector<S>> {
    let e = Series::variable(m).neg().exp()?;
    let den = Series::constant(S::one(), m).sub(&e.scale(p));
    moments_from_transform(&den.reciprocal()?.scale(&(S::one() - p.clone())))
}

/// Moments of a Poisson(`a`) count: every cumulant equals `a`.
pub fn poisson_moments<S: Scalar>(a: &S, m: usize) -> Result<MomentVector<S>> {
    MomentVector::from_cumulants(&vec![a.clone(); m + 1])
}

/// The operator `E N ℒ_{F^{★(N−1)}}` truncated at order `m`.
///
/// Needs moments of `N` up to order `m + 1`.
pub fn stopped_sum_operator<S: Scalar>(
    n_moments: &MomentVector<S>,
    fm: &MomentVector<S>,
    m: usize,
) -> Result<LaplaceCharacter<S>> {
    if n_moments.order() < m + 1 {
        return Err(Error::OrderMismatch(format!("N needs moments to order {}, has {}", m + 1, n_moments.order())));
    }
    let fm = fm.truncate(m)?;
    let lx = Series::from_moments(fm.mu());
    let s = lx.log()?.neg();
    let dn = Series::from_moments(&n_moments.mu()[..=m + 1]).derivative();
    let c = dn.compose(&s)?.mul(&lx.reciprocal()?).neg();
    Ok(LaplaceCharacter::from_coefficients(c.into_coeffs()))
}

/// Applies `Σ l_j 𝒟^j` to a tail vector in its own scale.
pub fn apply_operator<S: Scalar>(ch: &LaplaceCharacter<S>, p: &TailVector<S>) -> Result<TailVector<S>> {
    let d = p.basis.derivative_matrix::<S>()?;
    Ok(p.apply(&laplace_matrix(ch, &d)))
}

fn check_below_index<S: Scalar>(p: &TailVector<S>, m: usize) -> Result<()> {
    if let Some((it, _)) = p.leading() {
        if it.power.cmp_with(&Exponent::int(m as i64), p.basis.assumptions())? != Ordering::Greater {
            return Err(Error::precondition(format!("m = {m} must be below the tail index {}", it.power)));
        }
    }
    Ok(())
}

/// Moments of the compound Poisson law: cumulant `j` is `a μ_{F,j}`.
pub fn compound_poisson_moments<S: Scalar>(a: &S, fm: &MomentVector<S>, m: usize) -> Result<MomentVector<S>> {
    let fm = fm.truncate(m)?;
    let kappa: Vec<S> = fm.mu().iter().map(|x| a.clone() * x.clone()).collect();
    MomentVector::from_cumulants(&kappa)
}

/// `K̄ = a ℒ_K F̄` for a Poisson(`a`) number of summands.
pub fn compound_poisson<S: Scalar>(a: &S, fm: &MomentVector<S>, m: usize, p_f: &TailVector<S>) -> Result<TailVector<S>> {
    if positive(a, p_f.basis.assumptions()) == Some(false) {
        return Err(Error::precondition(format!("Poisson parameter {a} must be positive")));
    }
    check_below_index(p_f, m)?;
    let km = compound_poisson_moments(a, fm, m)?;
    apply_operator(&LaplaceCharacter::from_moment_slice(km.mu()).scale(a), p_f)
}

/// Terms of `β^{-1} ∫_t^∞ B̄` from pure-power terms of `B̄`.
pub fn equilibrium_tail<S: Scalar>(terms: &[TailTerm<S>], mean: &S) -> Result<Vec<TailTerm<S>>> {
    let inv = mean.inv()?;
    terms
        .iter()
        .map(|t| {
            if !t.item.is_pure() {
                return Err(Error::Unsupported(format!("equilibrium tail of the log term {}", t.item)));
            }
            let p = t.item.power.add_int(-1);
            let c = t.coeff.clone() * S::from_exponent(&p)?.inv()? * inv.clone();
            Ok(TailTerm::pure(c, p))
        })
        .collect()
}

/// Waiting-time operator of the M/G/1 queue and, when `B` has a power tail, the tail itself.
#[derive(Clone, Debug, PartialEq)]
pub struct QueueTail<S> {
    /// Traffic intensity `a = β/μ`.
    pub load: S,
    /// Coefficients of `𝒟^j` acting on `H̄`.
    pub operator: LaplaceCharacter<S>,
    pub h_moments: MomentVector<S>,
    pub h_tail: Option<TailVector<S>>,
    pub tail: Option<TailVector<S>>,
    pub warnings: Vec<String>,
}

/// `W̄ = a(1−a) Σ_j [u^j](1 − aΛ_H(u))^{−2} 𝒟^j H̄` with `H` the equilibrium law of `B`.
pub fn mg1_waiting_tail<S: Scalar>(b: &DistributionSpec<S>, mean_interarrival: &S, m: usize) -> Result<QueueTail<S>> {
    let bm = b.moments(m + 1)?;
    let load = bm.get(1).div(mean_interarrival)?;
    let one = S::one();
    if positive(&load, &b.env) == Some(false) {
        return Err(Error::precondition(format!("traffic intensity {load} must be positive")));
    }
    if positive(&(one.clone() - load.clone()), &b.env) == Some(false) {
        return Err(Error::precondition(format!("unstable queue: traffic intensity {load} ≥ 1")));
    }
    let hm = equilibrium_moments(&bm)?;
    let lh = Series::from_moments(hm.mu());
    let r = Series::constant(one.clone(), m).sub(&lh.scale(&load)).reciprocal()?;
    let c = r.mul(&r).scale(&(load.clone() * (one - load.clone())));
    let operator = LaplaceCharacter::from_coefficients(c.into_coeffs());
    let mut warnings = Vec::new();
    let (h_tail, tail) = match b.tail_index()? {
        None => (None, None),
        Some(alpha) => match queue_tail(b, &alpha, bm.get(1), &operator, m) {
            Ok((h, w)) => (Some(h), Some(w)),
            Err(e) => {
                warnings.push(format!("no tail vector: {e}"));
                (None, None)
            }
        },
    };
    Ok(QueueTail { load, operator, h_moments: hm, h_tail, tail, warnings })
}

fn queue_tail<S: Scalar>(
    b: &DistributionSpec<S>,
    alpha: &Exponent,
    mean: &S,
    op: &LaplaceCharacter<S>,
    m: usize,
) -> Result<(TailVector<S>, TailVector<S>)> {
    let terms = equilibrium_tail(&b.expand_tail_to(&alpha.add_int(m as i64), DEFAULT_MAX_TERMS)?, mean)?;
    let cutoff = alpha.add_int(m as i64 - 1);
    let seed: Vec<ScaleItem> = terms.iter().map(|t| t.item.clone()).collect();
    let basis = close_under_derivative(&seed, &cutoff, &b.env)?;
    let h = TailVector::from_terms(&basis, &terms)?;
    let w = apply_operator(op, &h)?;
    Ok((h, w))
}

/// Coefficients for the expected number of particles alive, `ρ^{-1} E N ℒ_{F^{★(N−1)}}`
/// with `N` geometric(`ρ`).
pub fn branching_intensity<S: Scalar>(fm: &MomentVector<S>, rho: &S, m: usize) -> Result<LaplaceCharacter<S>> {
    let env = Assumptions::new();
    if positive(rho, &env) == Some(false) || positive(&(S::one() - rho.clone()), &env) == Some(false) {
        return Err(Error::precondition(format!("offspring mean {rho} must lie in (0, 1)")));
    }
    let n = geometric_moments(rho, m + 1)?;
    Ok(stopped_sum_operator(&n, fm, m)?.scale(&rho.inv()?))
}

/// `Ḡ_ν = ℒ_{G_ν} ν̄` with caller-supplied moments of `G_ν`.
pub fn infdiv_tail<S: Scalar>(nu: &TailVector<S>, g_moments: &MomentVector<S>, m: usize) -> Result<TailVector<S>> {
    check_below_index(nu, m)?;
    let gm = g_moments.truncate(m)?;
    apply_operator(&LaplaceCharacter::from_moment_slice(gm.mu()), nu)
}

/// `F = K + a H ★ F` (explicit) or `R = Q + M R` with `M ~ H`, `Q ~ K` (implicit).
#[derive(Clone, Debug, PartialEq)]
pub struct RenewalProblem<S> {
    pub h: DistributionSpec<S>,
    pub k: DistributionSpec<S>,
    /// Weight of the explicit equation; unused by the implicit solver.
    pub a: Option<S>,
    pub m: usize,
    pub scale: Option<ScaleBasis>,
}

impl<S: Scalar> RenewalProblem<S> {
    pub fn new(h: DistributionSpec<S>, k: DistributionSpec<S>, m: usize) -> Self {
        RenewalProblem { h, k, a: None, m, scale: None }
    }

    pub fn weight(mut self, a: S) -> Self {
        self.a = Some(a);
        self
    }

    pub fn with_scale(mut self, b: ScaleBasis) -> Self {
        self.scale = Some(b);
        self
    }

    fn env(&self) -> Assumptions {
        let mut env = self.h.env.clone();
        env.extend(self.k.env.iter().map(|(k, v)| (k.clone(), *v)));
        env
    }

    /// Closure of the heavy-tailed laws' expansions up to `α_min + m`.
    fn common_scale(&self, laws: &[&DistributionSpec<S>]) -> Result<ScaleBasis> {
        if let Some(s) = &self.scale {
            return Ok(s.clone());
        }
        let env = self.env();
        let mut alpha: Option<Exponent> = None;
        for l in laws {
            if let Some(a) = l.tail_index()? {
                alpha = match alpha {
                    Some(b) if b.cmp_with(&a, &env)? != Ordering::Greater => Some(b),
                    _ => Some(a),
                };
            }
        }
        let alpha = alpha.ok_or_else(|| Error::precondition("no law in the problem has a power tail"))?;
        if alpha.cmp_with(&Exponent::int(self.m as i64), &env)? != Ordering::Greater {
            return Err(Error::precondition(format!("m = {} must be below the tail index {alpha}", self.m)));
        }
        let cutoff = alpha.add_int(self.m as i64);
        let mut seed = Vec::new();
        for l in laws {
            if l.tail_index()?.is_some() {
                seed.extend(l.expand_tail_to(&cutoff, DEFAULT_MAX_TERMS)?.into_iter().map(|t| t.item));
            }
        }
        close_under_derivative(&seed, &cutoff, &env)
    }
}

fn tail_in<S: Scalar>(spec: &DistributionSpec<S>, basis: &ScaleBasis) -> Result<Vec<S>> {
    if spec.tail_index()?.is_none() {
        return Ok(vec![S::zero(); basis.len()]);
    }
    Ok(TailVector::from_terms(basis, &spec.expand_tail_to(basis.cutoff(), DEFAULT_MAX_TERMS)?)?.p)
}

#[derive(Clone, Debug, PartialEq)]
pub struct RenewalSolution<S> {
    /// `ℒ_F = (Id − aℒ_H)^{-1} ℒ_K`; its constant term is `1/(1−a)`.
    pub f_character: LaplaceCharacter<S>,
    /// Moments of the probability law `G = (1−a) F`.
    pub g_moments: MomentVector<S>,
    pub g_tail: TailVector<S>,
}

pub fn renewal_solve<S: Scalar>(prob: &RenewalProblem<S>) -> Result<RenewalSolution<S>> {
    let a = prob.a.clone().ok_or_else(|| Error::precondition("the explicit renewal equation needs a weight a"))?;
    let env = prob.env();
    let one = S::one();
    if positive(&(one.clone() - a.clone()), &env) == Some(false) || positive(&(one.clone() + a.clone()), &env) == Some(false) {
        return Err(Error::precondition(format!("renewal weight {a} must satisfy |a| < 1")));
    }
    let m = prob.m;
    let hm = prob.h.moments(m)?;
    let km = prob.k.moments(m)?;
    let lh = Series::from_moments(hm.mu());
    let lf = Series::constant(one.clone(), m)
        .sub(&lh.scale(&a))
        .reciprocal()?
        .mul(&Series::from_moments(km.mu()));
    let f_character = LaplaceCharacter::from_coefficients(lf.into_coeffs());
    let w = one.clone() - a.clone();
    let mut gm: Vec<S> = f_character.moments().iter().map(|x| x.clone() * w.clone()).collect();
    gm[0] = one;
    let g_moments = MomentVector::new(gm)?;

    let basis = prob.common_scale(&[&prob.h, &prob.k])?;
    let d = basis.derivative_matrix::<S>()?;
    let ph = tail_in(&prob.h, &basis)?;
    let pk = tail_in(&prob.k, &basis)?;
    let lhs = Matrix::identity(basis.len()).sub(&character_matrix(&hm, &d).scale(&a));
    let rhs = add_vec(&scale_vec(&pk, &w), &scale_vec(&character_matrix(&g_moments, &d).mul_vec(&ph), &a));
    let pg = lhs.solve_lower(&rhs)?;
    Ok(RenewalSolution { f_character, g_moments, g_tail: TailVector::new(basis, pg)? })
}

/// `E[M^e (log M)^k]` for `M ~ H`, as the entries of `∫ ℳ_x dH(x)`.
struct MultiplierMoments<'a, S> {
    h: &'a DistributionSpec<S>,
    float: Option<DistributionSpec<f64>>,
}

impl<S: Scalar> PowerLog<S> for MultiplierMoments<'_, S> {
    fn power_log(&self, e: &Exponent, k: u32) -> Result<S> {
        if k == 0 {
            return self.h.fractional_moment(e);
        }
        if let Family::PointMass { at } = &self.h.family {
            if at.is_zero() {
                return Ok(S::zero());
            }
            return Ok(at.pow_exponent(e)? * at.ln()?.powu(k));
        }
        if S::EXACT {
            return Err(Error::Inexact(format!("E[M^({e}) (log M)^{k}]")));
        }
        let h = self.float.as_ref().ok_or_else(|| Error::Inexact("multiplier law has no numeric form".into()))?;
        let ev = e.eval(&self.h.env).ok_or_else(|| Error::Inexact(format!("exponent {e}")))?;
        let (v, _) = integrate_half_line(
            |x| {
                if x <= 0.0 {
                    return 0.0;
                }
                x.powf(ev) * x.ln().powi(k as i32) * h.density(x).unwrap_or(0.0)
            },
            1e-11,
        )?;
        S::from_f64(v)
    }

    fn lift_exponent(&self, e: &Exponent) -> Result<S> {
        S::from_exponent(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ImplicitRenewalSolution<S> {
    pub f_moments: MomentVector<S>,
    pub tail: TailVector<S>,
    pub warnings: Vec<String>,
}

/// Moments of `R` from `μ_{F,k}(1 − μ_{H,k}) = Σ_{j≥1} C(k,j) μ_{K,j} μ_{H,k−j} μ_{F,k−j}`.
pub fn implicit_renewal_moments<S: Scalar>(hm: &MomentVector<S>, km: &MomentVector<S>, m: usize) -> Result<MomentVector<S>> {
    let (hm, km) = (hm.truncate(m)?, km.truncate(m)?);
    let mut mu = vec![S::one()];
    for k in 1..=m {
        let mut rhs = S::zero();
        for j in 1..=k {
            rhs = rhs
                + S::from_bigint(&binomial(k as u64, j as u64)) * km.get(j).clone() * hm.get(k - j).clone() * mu[k - j].clone();
        }
        let den = S::one() - hm.get(k).clone();
        mu.push(rhs.div(&den).map_err(|_| Error::precondition(format!("E M^{k} = 1")))?);
    }
    MomentVector::new(mu)
}

/// `p_F̄ = (Id − ℒ_K ∫ℳ_x dH)^{-1} ℒ_{H⊛F} p_K̄`.
pub fn implicit_renewal_solve<S: Scalar>(prob: &RenewalProblem<S>) -> Result<ImplicitRenewalSolution<S>> {
    if !matches!(prob.h.support, Support::Nonnegative) {
        return Err(Error::precondition("the multiplier law must live on [0, ∞)"));
    }
    let m = prob.m;
    let env = prob.env();
    let mut warnings = Vec::new();
    let basis = prob.common_scale(&[&prob.k])?;
    let alpha = prob
        .k
        .tail_index()?
        .ok_or_else(|| Error::precondition("the forcing law needs a power tail"))?;

    let float = prob.h.to_f64().ok();
    let e = alpha.add_int(m as i64 + 1).scale(&crate::exponent::q(2));
    let contraction = e
        .eval(&env)
        .ok_or_else(|| Error::Inexact(format!("{e}")))
        .and_then(|v| match &float {
            Some(h) => h.fractional_moment(&Exponent::constant(q_from_f64(v)?)),
            None => Err(Error::Inexact("multiplier law".into())),
        });
    match contraction {
        Ok(v) if v.is_finite() && v < 1.0 => {}
        Ok(v) => return Err(Error::precondition(format!("contraction condition fails: E M^({e}) = {v} ≥ 1"))),
        Err(err) => warnings.push(format!("contraction condition E M^({e}) < 1 not checked: {err}")),
    }

    let hm = prob.h.moments(m)?;
    let km = prob.k.moments(m)?;
    let fm = implicit_renewal_moments(&hm, &km, m)?;
    let d = basis.derivative_matrix::<S>()?;
    let pk = tail_in(&prob.k, &basis)?;
    let mh = basis.scaling_matrix(&MultiplierMoments { h: &prob.h, float })?;
    let lhs = Matrix::identity(basis.len()).sub(&character_matrix(&km, &d).mul(&mh));
    let rhs = laplace_matrix(&mellin_character(&hm, &fm)?, &d).mul_vec(&pk);
    let p = lhs.solve_lower(&rhs)?;
    Ok(ImplicitRenewalSolution { f_moments: fm, tail: TailVector::new(basis, p)?, warnings })
}

/// Limit of `t^ξ g(t)`.
#[derive(Clone, Debug, PartialEq)]
pub enum AuxLimit<S> {
    Finite(S),
    Infinite,
}

/// Second-order regular variation of `F̄_*`: `F̄_*(λt)/F̄_*(t) − λ^{-α} ∼ λ^{-α} k(λ) g(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct SecondOrderSpec<S> {
    pub alpha: Exponent,
    /// Index of `g`; `k(λ) = (λ^ρ − 1)/ρ`, or `log λ` when `ρ = 0`.
    pub rho: Exponent,
    pub aux: AuxLimit<S>,
    /// `g(t) ≍ t^{-index}` when known.
    pub g_index: Option<Exponent>,
    pub p: S,
    pub q: S,
}

impl<S: Scalar> SecondOrderSpec<S> {
    pub fn new(alpha: Exponent, rho: Exponent, aux: AuxLimit<S>) -> Self {
        SecondOrderSpec { alpha, rho, aux, g_index: None, p: S::one(), q: S::zero() }
    }

    pub fn with_balance(mut self, p: S, q: S) -> Self {
        self.p = p;
        self.q = q;
        self
    }

    pub fn with_g_index(mut self, e: Exponent) -> Self {
        self.g_index = Some(e);
        self
    }

    fn validate(&self, env: &Assumptions) -> Result<()> {
        if self.rho.eval(env).is_some_and(|r| r > 0.0) {
            return Err(Error::precondition(format!("second-order index {} must be ≤ 0", self.rho)));
        }
        let one = S::one();
        for (name, x) in [("p", &self.p), ("q", &self.q)] {
            if x.sign_with(env) == Some(Ordering::Less) || (one.clone() - x.clone()).sign_with(env) == Some(Ordering::Less) {
                return Err(Error::precondition(format!("{name} = {x} must lie in [0, 1]")));
            }
        }
        if !(self.p.clone() + self.q.clone() - one).is_negligible(1.0) {
            return Err(Error::precondition("p + q must equal 1"));
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SecondOrderCase {
    /// `a = ∞`.
    InfiniteLimit,
    /// `a` finite, `μ_1 ≠ 0`.
    FiniteNonzeroMean,
    /// `a` finite, `μ_1 = 0`.
    FiniteZeroMean,
}

impl SecondOrderCase {
    pub fn number(self) -> u8 {
        match self {
            SecondOrderCase::InfiniteLimit => 1,
            SecondOrderCase::FiniteNonzeroMean => 2,
            SecondOrderCase::FiniteZeroMean => 3,
        }
    }
}

/// Order of the auxiliary function of `Ḡ_*`.
#[derive(Clone, Debug, PartialEq)]
pub enum AuxOrder {
    /// `≍ g`, index unknown.
    SameAsG,
    /// `≍ t^{-e}`.
    Power(Exponent),
}

impl fmt::Display for AuxOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AuxOrder::SameAsG => write!(f, "g"),
            AuxOrder::Power(e) => write!(f, "t^-({e})"),
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Classification<S> {
    pub case: SecondOrderCase,
    pub xi: u32,
    /// Value of the nondegeneracy condition for the case.
    pub condition: S,
    /// Leading second-order coefficient at `λ = 1`.
    pub coefficient: S,
    pub g_order: AuxOrder,
}

/// `Σ_{c of sign s} |c|^α k(1/|c|)`.
fn kernel_sum<S: Scalar>(w: &WeightSequence<S>, s: Sign, alpha: &Exponent, rho: &Exponent) -> Result<S> {
    if rho.is_zero() {
        return Ok(-w.class_power_sum(s, alpha, 1)?);
    }
    let r = S::from_exponent(rho)?;
    (w.class_power_sum(s, &(alpha - rho), 0)? - w.class_power_sum(s, alpha, 0)?).div(&r)
}

pub fn second_order_classify<S: Scalar>(
    so: &SecondOrderSpec<S>,
    w: &WeightSequence<S>,
    fm: &MomentVector<S>,
) -> Result<Classification<S>> {
    so.validate(&w.env)?;
    w.validate()?;
    let fm = fm.truncate(2)?;
    let alpha = &so.alpha;
    let al = S::from_exponent(alpha)?;
    let rho = S::from_exponent(&so.rho)?;
    let classes = w.classes()?;
    let class_sum = |s: Sign, e: &Exponent| -> Result<S> {
        if classes.contains(&s) {
            w.class_power_sum(s, e, 0)
        } else {
            Ok(S::zero())
        }
    };
    let kernel = |s: Sign| -> Result<S> {
        if classes.contains(&s) {
            kernel_sum(w, s, alpha, &so.rho)
        } else {
            Ok(S::zero())
        }
    };
    let (vp, vn) = (kernel(Sign::Positive)?, kernel(Sign::Negative)?);
    let v = vp.clone() + vn.clone();
    let kappa = so.p.clone() * vp + so.q.clone() * vn;
    let abs_a = w.abs_power_sum(alpha)?;
    let scale = abs_a.eval_f64(&w.env).unwrap_or(1.0);
    let star = |e: &Exponent| -> Result<S> {
        Ok(so.p.clone() * class_sum(Sign::Positive, e)? + so.q.clone() * class_sum(Sign::Negative, e)?)
    };
    let mu1 = fm.get(1).clone();
    let mu2 = fm.get(2).clone();
    let xi = if mu1.is_negligible(1.0) { 2 } else { 1 };
    let (case, condition, coefficient, a_zero) = match &so.aux {
        AuxLimit::Infinite => (SecondOrderCase::InfiniteLimit, abs_a.clone() + rho * v, kappa, false),
        AuxLimit::Finite(a) => {
            let base = a.clone() * abs_a.clone() + a.clone() * rho.clone() * v;
            let c1 = w.power_sum(&Exponent::int(1))?;
            if xi == 1 {
                let cond = base
                    + al.clone() * rho * mu1.clone() * (so.p.clone() - so.q.clone())
                        * (c1.clone() * w.signed_abs_power_sum(alpha)? - w.abs_power_sum(&alpha.add_int(1))?);
                let a1 = alpha.add_int(1);
                let cstar1 = so.p.clone()
                    * (class_sum(Sign::Positive, &a1)? - c1.clone() * class_sum(Sign::Positive, alpha)?)
                    - so.q.clone() * (class_sum(Sign::Negative, &a1)? + c1 * class_sum(Sign::Negative, alpha)?);
                let coef = a.clone() * kappa - al * mu1 * cstar1;
                (SecondOrderCase::FiniteNonzeroMean, cond, coef, a.is_negligible(1.0))
            } else {
                let c2 = w.power_sum(&Exponent::int(2))?;
                let a2 = alpha.add_int(2);
                let aa = al.clone() * (al + S::one());
                let cond = base - aa.clone() * mu2.clone() * (c2.clone() * abs_a.clone() - w.abs_power_sum(&a2)?);
                let half = S::from_q(&crate::exponent::qr(1, 2));
                let coef = a.clone() * kappa - half * aa * mu2 * (star(&a2)? - c2 * star(alpha)?);
                (SecondOrderCase::FiniteZeroMean, cond, coef, a.is_negligible(1.0))
            }
        }
    };
    if condition.is_negligible(scale) {
        let name = ["A", "B", "C"][case.number() as usize - 1];
        return Err(Error::HigherOrderNeeded(format!(
            "nondegeneracy condition {name} vanishes for case {}",
            case.number()
        )));
    }
    let g_order = if a_zero {
        AuxOrder::Power(Exponent::int(xi as i64))
    } else {
        so.g_index.clone().map_or(AuxOrder::SameAsG, AuxOrder::Power)
    };
    Ok(Classification { case, xi, condition, coefficient, g_order })
}

/// `λ = α^{-2}(1 + 2 Σ_{j≥1} Σ_k |c_k|^α ∧ |c_{j+k}|^α / Σ_k |c_k|^α)`.
pub fn hill_variance<S: Scalar>(w: &WeightSequence<S>, alpha: &Exponent) -> Result<S> {
    w.validate()?;
    let env = &w.env;
    let a2 = S::from_exponent(alpha)?.powu(2);
    match &w.repr {
        WeightRepr::Ar1(r) => {
            let x = r.abs_with(env)?.pow_exponent(alpha)?;
            (S::one() + x.clone()).div(&(a2 * (S::one() - x)))
        }
        WeightRepr::Explicit(c) | WeightRepr::Ma(c) => {
            let s: Vec<S> = c.iter().map(|x| x.abs_with(env)?.pow_exponent(alpha)).collect::<Result<_>>()?;
            let total = s.iter().fold(S::zero(), |acc, x| acc + x.clone());
            let mut num = S::zero();
            for k in 0..s.len() {
                for l in k + 1..s.len() {
                    let smaller = match (s[k].clone() - s[l].clone()).sign_with(env) {
                        Some(Ordering::Greater) => &s[l],
                        Some(_) => &s[k],
                        None => return Err(Error::precondition("cannot order weight powers")),
                    };
                    num = num + smaller.clone();
                }
            }
            let ratio = num.div(&total).map_err(|_| Error::precondition("all weights vanish"))?;
            (S::one() + S::from_i64(2) * ratio).div(&a2)
        }
        WeightRepr::Symbolic => Err(Error::Unsupported("Hill variance of symbolic weights".into())),
    }
}

/// Truncated double sum with its remainder bound.
#[derive(Clone, Debug, PartialEq)]
pub struct HillSeries {
    pub value: f64,
    pub terms: usize,
    pub bound: f64,
}

/// Float evaluation by truncating the double sum once the remainder bound drops below `tol`.
pub fn hill_variance_series(w: &WeightSequence<f64>, alpha: f64, tol: f64) -> Result<HillSeries> {
    w.validate()?;
    let a2 = alpha * alpha;
    let r = match &w.repr {
        WeightRepr::Ar1(r) => *r,
        WeightRepr::Explicit(_) | WeightRepr::Ma(_) => {
            let e = Exponent::constant(q_from_f64(alpha)?);
            let c = w.finite().expect("finite").len();
            return Ok(HillSeries { value: hill_variance(w, &e)?, terms: c, bound: 0.0 });
        }
        WeightRepr::Symbolic => return Err(Error::Unsupported("Hill variance of symbolic weights".into())),
    };
    let x = r.abs().powf(alpha);
    if x == 0.0 {
        return Ok(HillSeries { value: 1.0 / a2, terms: 1, bound: 0.0 });
    }
    let total = 1.0 / (1.0 - x);
    // Σ_{l≥n} l x^l bounds the pairs with a member beyond the cut
    let remainder = |n: usize| x.powi(n as i32) * (n as f64 * (1.0 - x) + x) / ((1.0 - x) * (1.0 - x));
    let mut n = 1;
    while 2.0 * remainder(n) / (a2 * total) >= tol {
        n += 1;
        if n > 1_000_000 {
            return Err(Error::Divergent("Hill variance series converges too slowly".into()));
        }
    }
    let s: Vec<f64> = (0..n).map(|l| x.powi(l as i32)).collect();
    let mut num = 0.0;
    for l in 1..n {
        for k in 0..l {
            num += s[k].min(s[l]);
        }
    }
    Ok(HillSeries { value: (1.0 + 2.0 * num / total) / a2, terms: n, bound: 2.0 * remainder(n) / (a2 * total) })
}
