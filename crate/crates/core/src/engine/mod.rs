//! Moments of weighted sums and the master tail expansion.

pub mod formal;
pub mod reference;
pub mod weights;

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::exponent::{Assumptions, Exponent};
use crate::laplace::{LaplaceCharacter, MomentVector};
use crate::matrix::Matrix;
use crate::ring::{Ring, Scalar};
use crate::scale::{character_matrix, close_under_derivative, laplace_matrix, Factor, ScaleBasis, ScaleItem};
use crate::tails::{DistributionSpec, TailVector};

pub use formal::{FormalWeight, WeightPoly};
pub use weights::{cross_sum, norm_n, power_sum, Sign, WeightRepr, WeightSequence};

pub const DEFAULT_MAX_TERMS: usize = 64;

#[derive(Clone, Debug, PartialEq)]
pub struct ExpansionRequest {
    /// Number of correction orders.
    pub m: usize,
    /// Derivative order.
    pub k: usize,
    /// Smoothness order; recorded, and checked when present.
    pub omega: Option<f64>,
    /// Norm parameter in `(0, 1)`.
    pub gamma: Option<f64>,
    /// Defaults to `α + m + k`.
    pub cutoff: Option<Exponent>,
    pub max_terms: usize,
}

impl ExpansionRequest {
    pub fn new(m: usize) -> Self {
        ExpansionRequest { m, k: 0, omega: None, gamma: None, cutoff: None, max_terms: DEFAULT_MAX_TERMS }
    }

    pub fn derivative(mut self, k: usize) -> Self {
        self.k = k;
        self
    }

    pub fn smoothness(mut self, omega: f64, gamma: f64) -> Self {
        self.omega = Some(omega);
        self.gamma = Some(gamma);
        self
    }

    pub fn with_cutoff(mut self, c: Exponent) -> Self {
        self.cutoff = Some(c);
        self
    }

    pub fn validate(&self, alpha: &Exponent, env: &Assumptions) -> Result<()> {
        if alpha.cmp_with(&Exponent::int(self.m as i64), env)? != Ordering::Greater {
            return Err(Error::precondition(format!("m = {} must be below the tail index {alpha}", self.m)));
        }
        let mk = (self.m + self.k) as f64;
        if let Some(w) = self.omega {
            if mk >= w {
                return Err(Error::precondition(format!("m + k = {mk} must be below ω = {w}")));
            }
        }
        if let Some(g) = self.gamma {
            let cap = self.omega.map_or(1.0, |w| (w - mk).min(1.0));
            if !(g > 0.0 && g < cap) {
                return Err(Error::precondition(format!("γ = {g} must lie in (0, {cap})")));
            }
        }
        Ok(())
    }
}

/// A tail vector together with truncation notes.
#[derive(Clone, Debug, PartialEq)]
pub struct Expansion<S> {
    pub tail: TailVector<S>,
    pub g_moments: MomentVector<S>,
    pub warnings: Vec<String>,
}

fn merged_env<S>(w: &WeightSequence<S>, spec_env: &Assumptions) -> Assumptions {
    let mut env = spec_env.clone();
    env.extend(w.env.iter().map(|(k, v)| (k.clone(), *v)));
    env
}

/// Moments of the law built from `F` whose `j`-th cumulant is `s_j κ_j`.
fn from_scaled_cumulants<S: Scalar>(fm: &MomentVector<S>, s: impl Fn(usize) -> Result<S>) -> Result<MomentVector<S>> {
    let kappa = fm.cumulants()?;
    let mut out = vec![S::zero(); kappa.len()];
    for (j, k) in kappa.into_iter().enumerate().skip(1) {
        if !k.is_zero() {
            out[j] = s(j)? * k;
        }
    }
    MomentVector::from_cumulants(&out)
}

/// Moments of `G_c`, the law of `Σ c_i X_i`.
pub fn g_moments<S: Scalar>(w: &WeightSequence<S>, fm: &MomentVector<S>, m: usize) -> Result<MomentVector<S>> {
    let fm = fm.truncate(m)?;
    from_scaled_cumulants(&fm, |j| w.power_sum(&Exponent::int(j as i64)))
}

/// Moments of `G_c ♮ M_{c} F`: the sum with one summand of weight `c` removed.
pub fn residual_moments_for<S: Scalar>(w: &WeightSequence<S>, c: &S, fm: &MomentVector<S>, m: usize) -> Result<MomentVector<S>> {
    let fm = fm.truncate(m)?;
    from_scaled_cumulants(&fm, |j| Ok(w.power_sum(&Exponent::int(j as i64))? - c.powu(j as u32)))
}

/// As [`residual_moments_for`], removing the `i`-th weight.
pub fn residual_moments<S: Scalar>(w: &WeightSequence<S>, i: usize, fm: &MomentVector<S>, m: usize) -> Result<MomentVector<S>> {
    let c = match &w.repr {
        WeightRepr::Explicit(c) | WeightRepr::Ma(c) => {
            c.get(i).cloned().ok_or_else(|| Error::precondition(format!("no weight with index {i}")))?
        }
        WeightRepr::Ar1(a) => a.powu(i as u32),
        WeightRepr::Symbolic => return Err(Error::Unsupported("individual symbolic weights".into())),
    };
    residual_moments_for(w, &c, fm, m)
}

/// Scale, derivative matrix and both tail vectors for one expansion problem.
pub struct Setup<S> {
    pub basis: ScaleBasis,
    pub d: Matrix<S>,
    pub upper: Vec<S>,
    /// `None` when the lower tail vanishes.
    pub lower: Option<Vec<S>>,
    pub fm: MomentVector<S>,
    pub warnings: Vec<String>,
}

pub fn setup<S: Scalar>(w: &WeightSequence<S>, spec: &DistributionSpec<S>, req: &ExpansionRequest) -> Result<Setup<S>> {
    w.validate()?;
    let env = merged_env(w, &spec.env);
    let mut spec = spec.clone();
    spec.env = env.clone();
    let alpha = spec
        .tail_index()?
        .ok_or_else(|| Error::precondition("the innovation law has no power tail"))?;
    req.validate(&alpha, &env)?;
    let cutoff = match &req.cutoff {
        Some(c) => c.clone(),
        None => alpha.add_int((req.m + req.k) as i64),
    };
    let classes = w.classes()?;
    let upper_terms = spec.expand_tail_to(&cutoff, req.max_terms)?;
    let lower_terms = if classes.contains(&Sign::Negative) {
        spec.lower_terms_to(&cutoff, req.max_terms)?
    } else {
        None
    };
    let mut seed: Vec<ScaleItem> = upper_terms.iter().map(|t| t.item.clone()).collect();
    if let Some(l) = &lower_terms {
        seed.extend(l.iter().map(|t| t.item.clone()));
    }
    let basis = close_under_derivative(&seed, &cutoff, &env)?;
    let (d, warnings) = basis.derivative_matrix_with_warnings::<S>()?;
    let upper = TailVector::from_terms(&basis, &upper_terms)?;
    upper.check_sign()?;
    let lower = match lower_terms {
        Some(l) => Some(TailVector::from_terms(&basis, &l)?.p),
        None => None,
    };
    let fm = spec.moments(req.m)?;
    Ok(Setup { basis, d, upper: upper.p, lower, fm, warnings })
}

/// `Σ_{c_i of sign s} ℒ_{M_{c_i}F}^{-1} 𝒟^k ℳ_{|c_i|}` summed weight by weight.
fn class_operator_explicit<S: Scalar>(
    w: &WeightSequence<S>,
    list: &[S],
    s: Sign,
    fm: &MomentVector<S>,
    basis: &ScaleBasis,
    d: &Matrix<S>,
    k: usize,
) -> Result<Matrix<S>> {
    let dk = d.pow(k as u32);
    let mut acc = Matrix::zero(basis.len());
    for c in list {
        if w.sign_of(c)? != Some(s) {
            continue;
        }
        let mc = crate::laplace::scale_moments(fm, c);
        let inv = LaplaceCharacter::from_moment_slice(mc.mu()).inverse()?;
        let scaling = basis.scaling_matrix(&Factor(s.apply(c.clone())))?;
        acc = acc.add(&laplace_matrix(&inv, d).mul(&dk).mul(&scaling));
    }
    Ok(acc)
}

/// The same sum for a formal weight `c`, with `c^e (log c)^k` replaced by class power sums.
fn class_operator_formal<S: Scalar>(
    w: &WeightSequence<S>,
    s: Sign,
    fm: &MomentVector<S>,
    basis: &ScaleBasis,
    d: &Matrix<S>,
    k: usize,
) -> Result<Matrix<S>> {
    let lift = |x: &S| WeightPoly::constant(x.clone());
    let mu: Vec<WeightPoly<S>> = fm
        .mu()
        .iter()
        .enumerate()
        .map(|(j, x)| WeightPoly::monomial(Exponent::int(j as i64), 0, s.pow::<S>(j) * x.clone()))
        .collect();
    let inv = LaplaceCharacter::from_moment_slice(&mu).inverse()?;
    let dl = d.map(lift);
    let scaling = basis.scaling_matrix::<WeightPoly<S>>(&FormalWeight)?;
    let op = laplace_matrix(&inv, &dl).mul(&dl.pow(k as u32)).mul(&scaling);
    let n = basis.len();
    let mut out = Matrix::zero(n);
    for i in 0..n {
        for j in 0..n {
            let x = op.get(i, j);
            if !x.is_zero() {
                out.set(i, j, x.evaluate(|e, lk| w.class_power_sum(s, e, lk))?);
            }
        }
    }
    Ok(out)
}

fn class_operator<S: Scalar>(
    w: &WeightSequence<S>,
    s: Sign,
    fm: &MomentVector<S>,
    basis: &ScaleBasis,
    d: &Matrix<S>,
    k: usize,
) -> Result<Matrix<S>> {
    match w.finite() {
        Some(list) => class_operator_explicit(w, list, s, fm, basis, d, k),
        None => class_operator_formal(w, s, fm, basis, d, k),
    }
}

/// `ℒ_{G_c} Σ_i ℒ_{M_{c_i}F}^{-1} 𝒟^k ℳ_{c_i} p` for both sign classes.
pub fn expand_convolution<S: Scalar>(
    w: &WeightSequence<S>,
    spec: &DistributionSpec<S>,
    req: &ExpansionRequest,
) -> Result<Expansion<S>> {
    let st = setup(w, spec, req)?;
    let gm = g_moments(w, &st.fm, req.m)?;
    let n = st.basis.len();
    let mut sum = vec![S::zero(); n];
    for s in w.classes()? {
        let p = match s {
            Sign::Positive => &st.upper,
            Sign::Negative => match &st.lower {
                Some(l) => l,
                None => continue,
            },
        };
        let a = class_operator(w, s, &st.fm, &st.basis, &st.d, req.k)?;
        sum = crate::matrix::add_vec(&sum, &a.mul_vec(p));
    }
    let p = character_matrix(&gm, &st.d).mul_vec(&sum);
    Ok(Expansion { tail: TailVector::new(st.basis, p)?, g_moments: gm, warnings: st.warnings })
}

/// `Σ_i ℒ_{G_c ♮ M_{c_i}F} 𝒟^k ℳ_{c_i} p`, explicit weight lists only.
pub fn expand_direct<S: Scalar>(
    w: &WeightSequence<S>,
    spec: &DistributionSpec<S>,
    req: &ExpansionRequest,
) -> Result<Expansion<S>> {
    let list = w
        .finite()
        .ok_or_else(|| Error::Unsupported("the direct route needs a finite weight list".into()))?;
    let st = setup(w, spec, req)?;
    let gm = g_moments(w, &st.fm, req.m)?;
    let dk = st.d.pow(req.k as u32);
    let n = st.basis.len();
    let mut acc = vec![S::zero(); n];
    for c in list {
        let Some(s) = w.sign_of(c)? else { continue };
        let p = match s {
            Sign::Positive => &st.upper,
            Sign::Negative => match &st.lower {
                Some(l) => l,
                None => continue,
            },
        };
        let res = residual_moments_for(w, c, &st.fm, req.m)?;
        let scaling = st.basis.scaling_matrix(&Factor(s.apply(c.clone())))?;
        let v = character_matrix(&res, &st.d).mul(&dk).mul(&scaling).mul_vec(p);
        acc = crate::matrix::add_vec(&acc, &v);
    }
    Ok(Expansion { tail: TailVector::new(st.basis, acc)?, g_moments: gm, warnings: st.warnings })
}

/// A tail `p` on `{t^{-α-j}}_{j ≤ m}` whose expansion for `G_c` is `t^{-α}` alone.
///
/// The innovation law is taken to vanish near `−∞`, so negative weights contribute nothing.
pub fn degenerate_tail<S: Scalar>(
    w: &WeightSequence<S>,
    alpha: &Exponent,
    m: usize,
    fm: &MomentVector<S>,
) -> Result<TailVector<S>> {
    w.validate()?;
    let env = w.env.clone();
    let powers: Vec<Exponent> = (0..=m).map(|j| alpha.add_int(j as i64)).collect();
    let basis = ScaleBasis::pure(&powers, alpha.add_int(m as i64), env)?;
    let d = basis.derivative_matrix::<S>()?;
    let fm = fm.truncate(m)?;
    let gm = g_moments(w, &fm, m)?;
    let a = character_matrix(&gm, &d).mul(&class_operator(w, Sign::Positive, &fm, &basis, &d, 0)?);
    let mut e0 = vec![S::zero(); basis.len()];
    e0[0] = S::one();
    let p = a.solve_lower(&e0)?;
    let v = TailVector::new(basis, p)?;
    if v.p[0].sign_with(v.basis.assumptions()) != Some(Ordering::Greater) {
        return Err(Error::precondition("degenerate tail has a nonpositive leading coefficient"));
    }
    Ok(v)
}

/// Diagonal of the degenerate-case system, `(C_α, …, C_{α+m})` for nonnegative weights.
pub fn degenerate_diagonal<S: Scalar>(w: &WeightSequence<S>, alpha: &Exponent, m: usize, fm: &MomentVector<S>) -> Result<Vec<S>> {
    let powers: Vec<Exponent> = (0..=m).map(|j| alpha.add_int(j as i64)).collect();
    let basis = ScaleBasis::pure(&powers, alpha.add_int(m as i64), w.env.clone())?;
    let d = basis.derivative_matrix::<S>()?;
    let fm = fm.truncate(m)?;
    let a = character_matrix(&g_moments(w, &fm, m)?, &d).mul(&class_operator(w, Sign::Positive, &fm, &basis, &d, 0)?);
    Ok((0..=m).map(|i| a.get(i, i).clone()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qr, Q};
    use crate::sym::{sym, Sym};
    use crate::tails::{Family, Support, TailTerm};

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn env(pairs: &[(&str, f64)]) -> Assumptions {
        pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
    }

    #[test]
    fn g_moments_two_unit_weights() {
        let w = WeightSequence::explicit(vec![sym("1"), sym("1")]);
        let fm = MomentVector::synthetic(vec![sym("1"), sym("mu1"), sym("mu2")]).unwrap();
        let g = g_moments(&w, &fm, 2).unwrap();
        assert_eq!(g.mu(), &[sym("1"), sym("2*mu1"), sym("2*mu2+2*mu1^2")]);
        let r = residual_moments(&w, 0, &fm, 2).unwrap();
        assert_eq!(r.mu(), fm.mu());
    }

    #[test]
    fn ar1_mean() {
        let w = WeightSequence::ar1(sym("a")).with_env(env(&[("a", 0.5)]));
        let fm = MomentVector::synthetic(vec![sym("1"), sym("mu1")]).unwrap();
        assert_eq!(g_moments(&w, &fm, 1).unwrap().mu()[1], sym("mu1/(1-a)"));
        assert_eq!(residual_moments(&w, 0, &fm, 1).unwrap().mu()[1], sym("mu1*(1/(1-a)-1)"));
    }

    #[test]
    fn single_weight_is_derivative_of_tail() {
        let spec = DistributionSpec::<Q>::new(Family::Pareto { alpha: e("3") });
        let w = WeightSequence::explicit(vec![q(1)]);
        let r = expand_convolution(&w, &spec, &ExpansionRequest::new(2).derivative(1)).unwrap();
        let st = setup(&w, &spec, &ExpansionRequest::new(2).derivative(1)).unwrap();
        assert_eq!(r.tail.p, st.d.mul_vec(&st.upper));
    }

    #[test]
    fn routes_agree_with_negative_weights() {
        let spec = DistributionSpec::<Q>::new(Family::Pareto { alpha: e("4") })
            .with_support(Support::TwoSided { lower: vec![TailTerm::pure(qr(1, 2), e("4")), TailTerm::pure(q(3), e("5"))] })
            .with_moments(vec![q(1), qr(1, 3), q(2), q(5)])
            .synthetic();
        let w = WeightSequence::explicit(vec![q(1), qr(-1, 2), qr(1, 3), q(0)]);
        for k in 0..2 {
            let req = ExpansionRequest::new(3).derivative(k);
            let a = expand_convolution(&w, &spec, &req).unwrap();
            let b = expand_direct(&w, &spec, &req).unwrap();
            assert_eq!(a.tail, b.tail);
        }
    }

    #[test]
    fn formal_route_matches_truncated_ar1() {
        // with weights a^i for i < n against the closed form, at a = 1/2 in floats
        let spec = DistributionSpec::<f64>::new(Family::Pareto { alpha: e("3") })
            .with_support(Support::Symmetric)
            .with_moments(vec![1.0, 0.0, 2.0])
            .synthetic();
        for a in [0.5, -0.5] {
            let req = ExpansionRequest::new(2);
            let f = expand_convolution(&WeightSequence::ar1(a), &spec, &req).unwrap();
            let t = expand_convolution(&WeightSequence::explicit(WeightSequence::ar1(a).truncated(80).unwrap()), &spec, &req)
                .unwrap();
            for (x, y) in f.tail.p.iter().zip(&t.tail.p) {
                assert!((x - y).abs() < 1e-10 * (1.0 + y.abs()), "a={a}: {x} vs {y}");
            }
        }
    }

    #[test]
    fn degenerate_roundtrip() {
        let w = WeightSequence::explicit(vec![q(1), qr(1, 2)]);
        let fm = MomentVector::synthetic(vec![q(1), qr(1, 2), q(3)]).unwrap();
        let p = degenerate_tail(&w, &e("3"), 2, &fm).unwrap();
        let spec = DistributionSpec::new(Family::PowerSeriesTail { terms: p.terms() })
            .with_moments(fm.mu().to_vec())
            .synthetic();
        let r = expand_convolution(&w, &spec, &ExpansionRequest::new(2)).unwrap();
        assert_eq!(r.tail.p, vec![q(1), q(0), q(0)]);
        let diag = degenerate_diagonal(&w, &e("3"), 2, &fm).unwrap();
        assert_eq!(diag, vec![qr(9, 8), qr(17, 16), qr(33, 32)]);
    }

    #[test]
    fn rejects_m_at_tail_index() {
        let spec = DistributionSpec::<Q>::new(Family::Pareto { alpha: e("2") });
        let w = WeightSequence::explicit(vec![q(1)]);
        assert!(matches!(
            expand_convolution(&w, &spec, &ExpansionRequest::new(2)),
            Err(Error::Precondition(_))
        ));
    }

    #[test]
    fn symbolic_symmetric_variance_term() {
        let spec = DistributionSpec::<Sym>::new(Family::PowerSeriesTail {
            terms: vec![TailTerm::pure(sym("1"), e("alpha")), TailTerm::pure(sym("-1"), e("alpha+3"))],
        })
        .with_support(Support::Symmetric)
        .with_moments(vec![sym("1"), sym("0"), sym("mu2")])
        .synthetic()
        .with_env(env(&[("alpha", 3.5)]));
        let r = expand_convolution(&WeightSequence::symbolic(), &spec, &ExpansionRequest::new(2)).unwrap();
        let want = sym("-alpha*(alpha+1)/2*(C[alpha+2]-C[alpha]*C[2])*mu2");
        assert_eq!(r.tail.get(&ScaleItem::pure(e("alpha+2"))), want);
        assert_eq!(r.tail.get(&ScaleItem::pure(e("alpha+1"))), sym("0"));
    }
}
