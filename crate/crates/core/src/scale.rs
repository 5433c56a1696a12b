//! Star-asymptotic scales `t^{-a} (log t)^b` and their matrices.

use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::exponent::{Assumptions, Exponent, Q};
use crate::laplace::{LaplaceCharacter, MomentVector};
use crate::matrix::Matrix;
use crate::ring::{Ring, Scalar};

pub const MAX_BASIS: usize = 4096;

/// `t^{-power} (log t)^{log_power}`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize)]
pub struct ScaleItem {
    pub power: Exponent,
    pub log_power: Exponent,
}

impl ScaleItem {
    pub fn pure(power: Exponent) -> Self {
        ScaleItem { power, log_power: Exponent::zero() }
    }

    pub fn new(power: Exponent, log_power: Exponent) -> Self {
        ScaleItem { power, log_power }
    }

    pub fn is_pure(&self) -> bool {
        self.log_power.is_zero()
    }

    /// Dominance order: smaller power first, then larger log power.
    pub fn cmp_with(&self, o: &ScaleItem, env: &Assumptions) -> Result<Ordering> {
        if self == o {
            return Ok(Ordering::Equal);
        }
        match self.power.cmp_with(&o.power, env) {
            Ok(Ordering::Equal) => Ok(o.log_power.cmp_with(&self.log_power, env)?),
            r => r,
        }
    }
}

impl fmt::Display for ScaleItem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "t^-({})", self.power)?;
        if !self.is_pure() {
            write!(f, "*log(t)^({})", self.log_power)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScaleBasis {
    items: Vec<ScaleItem>,
    cutoff: Exponent,
    env: Assumptions,
}

fn sort_items(mut v: Vec<ScaleItem>, env: &Assumptions) -> Result<Vec<ScaleItem>> {
    v.sort();
    v.dedup();
    let mut out: Vec<ScaleItem> = Vec::with_capacity(v.len());
    for it in v {
        let mut pos = out.len();
        for (i, o) in out.iter().enumerate() {
            if it.cmp_with(o, env)? == Ordering::Less {
                pos = i;
                break;
            }
        }
        out.insert(pos, it);
    }
    Ok(out)
}

impl ScaleBasis {
    pub fn new(items: Vec<ScaleItem>, cutoff: Exponent, env: Assumptions) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::precondition("empty scale"));
        }
        let items = sort_items(items, &env)?;
        for it in &items {
            if it.power.cmp_with(&cutoff, &env)? == Ordering::Greater {
                return Err(Error::precondition(format!("{it} lies beyond the cutoff {cutoff}")));
            }
        }
        Ok(ScaleBasis { items, cutoff, env })
    }

    pub fn pure(powers: &[Exponent], cutoff: Exponent, env: Assumptions) -> Result<Self> {
        Self::new(powers.iter().cloned().map(ScaleItem::pure).collect(), cutoff, env)
    }

    pub fn items(&self) -> &[ScaleItem] {
        &self.items
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn cutoff(&self) -> &Exponent {
        &self.cutoff
    }

    pub fn assumptions(&self) -> &Assumptions {
        &self.env
    }

    pub fn index_of(&self, it: &ScaleItem) -> Option<usize> {
        self.items.iter().position(|x| x == it)
    }

    pub fn is_pure(&self) -> bool {
        self.items.iter().all(ScaleItem::is_pure)
    }

    pub fn within_cutoff(&self, e: &Exponent) -> Result<bool> {
        Ok(e.cmp_with(&self.cutoff, &self.env)? != Ordering::Greater)
    }

    /// Whether `self` is a prefix of `other` in dominance order.
    pub fn is_prefix_of(&self, other: &ScaleBasis) -> bool {
        other.items.len() >= self.items.len() && other.items[..self.items.len()] == self.items[..]
    }

    pub fn derivative_matrix<S: Scalar>(&self) -> Result<Matrix<S>> {
        Ok(self.derivative_matrix_with_warnings()?.0)
    }

    /// `𝒟` together with notes on images that fall inside the cutoff but outside the basis.
    pub fn derivative_matrix_with_warnings<S: Scalar>(&self) -> Result<(Matrix<S>, Vec<String>)> {
        let n = self.len();
        let mut d = Matrix::zero(n);
        let mut warnings = Vec::new();
        for (i, it) in self.items.iter().enumerate() {
            let a1 = it.power.add_int(1);
            if !self.within_cutoff(&a1)? {
                continue;
            }
            let main = ScaleItem::new(a1.clone(), it.log_power.clone());
            match self.index_of(&main) {
                Some(j) => d.set(j, i, -S::from_exponent(&it.power)?),
                None => warnings.push(format!("derivative image {main} of {it} truncated")),
            }
            if !it.is_pure() {
                let corr = ScaleItem::new(a1, it.log_power.add_int(-1));
                match self.index_of(&corr) {
                    Some(j) => {
                        let x = d.get(j, i).clone() + S::from_exponent(&it.log_power)?;
                        d.set(j, i, x);
                    }
                    None => warnings.push(format!("log correction {corr} of {it} truncated")),
                }
            }
        }
        Ok((d, warnings))
    }

    /// `ℳ_c` for a scaling factor given through its powers.
    pub fn scaling_matrix<T: Ring>(&self, c: &impl PowerLog<T>) -> Result<Matrix<T>> {
        let n = self.len();
        let mut m = Matrix::zero(n);
        for (j, col) in self.items.iter().enumerate() {
            for (i, row) in self.items.iter().enumerate() {
                if row.power != col.power {
                    continue;
                }
                let k = &col.log_power - &row.log_power;
                let Some(k) = k.as_i64() else { continue };
                if k < 0 {
                    continue;
                }
                let k = k as u32;
                // generalized binomial (b_j choose k)
                let mut coef = c.lift_q(&Q::from_integer(1.into()));
                for r in 0..k {
                    coef = coef * c.lift_exponent(&col.log_power.add_int(-(r as i64)))?;
                }
                coef = coef * c.lift_q(&Q::new(1.into(), crate::exponent::factorial(k as u64)));
                if k % 2 == 1 {
                    coef = -coef;
                }
                m.set(i, j, coef * c.power_log(&col.power, k)?);
            }
        }
        Ok(m)
    }
}

/// Access to `c^e (log c)^k` in a coefficient ring.
pub trait PowerLog<T: Ring> {
    fn power_log(&self, e: &Exponent, k: u32) -> Result<T>;
    fn lift_exponent(&self, e: &Exponent) -> Result<T>;
    fn lift_q(&self, q: &Q) -> T {
        T::from_q(q)
    }
}

/// A concrete positive scaling factor.
#[derive(Clone, Debug)]
pub struct Factor<S>(pub S);

impl<S: Scalar> PowerLog<S> for Factor<S> {
    fn power_log(&self, e: &Exponent, k: u32) -> Result<S> {
        if self.0.sign() == Some(Ordering::Less) || self.0.is_zero() {
            return Err(Error::precondition(format!("scaling factor {} must be positive", self.0)));
        }
        let p = self.0.pow_exponent(e)?;
        if k == 0 {
            Ok(p)
        } else {
            Ok(p * self.0.ln()?.powu(k))
        }
    }

    fn lift_exponent(&self, e: &Exponent) -> Result<S> {
        S::from_exponent(e)
    }
}

pub fn close_under_derivative(seed: &[ScaleItem], cutoff: &Exponent, env: &Assumptions) -> Result<ScaleBasis> {
    if seed.is_empty() {
        return Err(Error::precondition("empty seed"));
    }
    for s in seed {
        if s.power.eval(env).is_some_and(|v| v <= 0.0) {
            return Err(Error::precondition(format!("nonpositive exponent {}", s.power)));
        }
    }
    let mut all: Vec<ScaleItem> = Vec::new();
    let mut frontier: Vec<ScaleItem> = Vec::new();
    for s in seed {
        if s.power.cmp_with(cutoff, env)? != Ordering::Greater && !all.contains(s) {
            all.push(s.clone());
            frontier.push(s.clone());
        }
    }
    if all.is_empty() {
        return Err(Error::precondition("every seed element lies beyond the cutoff"));
    }
    while let Some(it) = frontier.pop() {
        let next = ScaleItem::new(it.power.add_int(1), it.log_power.clone());
        if next.power.cmp_with(cutoff, env)? != Ordering::Greater && !all.contains(&next) {
            all.push(next.clone());
            frontier.push(next);
            if all.len() > MAX_BASIS {
                return Err(Error::ScaleOverflow(MAX_BASIS));
            }
        }
    }
    ScaleBasis::new(all, cutoff.clone(), env.clone())
}

/// `Σ_j l_j 𝒟^j` by Horner's rule.
pub fn operator_matrix<T: Ring>(coeff: &[T], d: &Matrix<T>) -> Matrix<T> {
    let n = d.dim();
    let mut acc = Matrix::zero(n);
    for l in coeff.iter().rev() {
        acc = acc.mul(d).add(&Matrix::identity(n).scale(l));
    }
    acc
}

pub fn character_matrix<T: Ring>(mv: &MomentVector<T>, d: &Matrix<T>) -> Matrix<T> {
    operator_matrix(LaplaceCharacter::from_moment_slice(mv.mu()).coeff(), d)
}

pub fn laplace_matrix<T: Ring>(ch: &LaplaceCharacter<T>, d: &Matrix<T>) -> Matrix<T> {
    operator_matrix(ch.coeff(), d)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exponent::{q, qr};
    use crate::sym::{sym, Sym};

    fn e(s: &str) -> Exponent {
        s.parse().unwrap()
    }

    fn burr_basis() -> ScaleBasis {
        let seed: Vec<_> = ["15", "33/2", "18"].iter().map(|s| ScaleItem::pure(e(s))).collect();
        close_under_derivative(&seed, &e("19"), &Assumptions::new()).unwrap()
    }

    #[test]
    fn burr_closure() {
        let b = burr_basis();
        let got: Vec<String> = b.items().iter().map(|i| i.power.to_string()).collect();
        assert_eq!(got, ["15", "16", "33/2", "17", "35/2", "18", "37/2", "19"]);
    }

    #[test]
    fn symbolic_closure() {
        let env: Assumptions = [("alpha".to_string(), 3.0)].into();
        let seed = [ScaleItem::pure(e("alpha")), ScaleItem::pure(e("alpha+1/2"))];
        let b = close_under_derivative(&seed, &e("alpha+2"), &env).unwrap();
        let got: Vec<String> = b.items().iter().map(|i| i.power.to_string()).collect();
        assert_eq!(got, ["alpha", "alpha+1/2", "alpha+1", "alpha+3/2", "alpha+2"]);
        let single = close_under_derivative(&seed[..1], &e("alpha"), &env).unwrap();
        assert_eq!(single.len(), 1);
        assert!(close_under_derivative(&[], &e("1"), &env).is_err());
    }

    #[test]
    fn burr_derivative_pattern() {
        let d: Matrix<Q> = burr_basis().derivative_matrix().unwrap();
        let expect = [(1, 0, q(-15)), (3, 1, q(-16)), (4, 2, qr(-33, 2)), (5, 3, q(-17)), (6, 4, qr(-35, 2)), (7, 5, q(-18))];
        for i in 0..8 {
            for j in 0..8 {
                let want = expect.iter().find(|(a, b, _)| *a == i && *b == j).map(|x| x.2.clone()).unwrap_or(q(0));
                assert_eq!(d.get(i, j), &want, "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn burr_character_matrix() {
        let b = burr_basis();
        let d: Matrix<Sym> = b.derivative_matrix().unwrap();
        let mv = MomentVector::new(vec![sym("1"), sym("c*mu1"), sym("c^2*mu2"), sym("c^3*mu3"), sym("c^4*mu4")]).unwrap();
        let l = character_matrix(&mv, &d);
        let checks = [
            (1, 0, "15*c*mu1"),
            (3, 0, "120*c^2*mu2"),
            (5, 0, "680*c^3*mu3"),
            (7, 0, "3060*c^4*mu4"),
            (3, 1, "16*c*mu1"),
            (5, 1, "136*c^2*mu2"),
            (7, 1, "816*c^3*mu3"),
            (4, 2, "33/2*c*mu1"),
            (6, 2, "1155/8*c^2*mu2"),
            (5, 3, "17*c*mu1"),
            (7, 3, "153*c^2*mu2"),
            (6, 4, "35/2*c*mu1"),
            (7, 5, "18*c*mu1"),
        ];
        for (i, j, s) in checks {
            assert_eq!(l.get(i, j), &sym(s), "entry ({i},{j})");
        }
        for i in 0..8 {
            assert_eq!(l.get(i, i), &Sym::one());
        }
    }

    #[test]
    fn log_gamma_matrices() {
        let env: Assumptions = [("alpha".to_string(), 2.0)].into();
        let items: Vec<_> = (0..3).map(|k| ScaleItem::new(e("alpha"), Exponent::int(2 - k))).collect();
        let b = ScaleBasis::new(items, e("alpha"), env).unwrap();
        let d: Matrix<Sym> = b.derivative_matrix().unwrap();
        assert_eq!(d, Matrix::zero(3));
        let m = b.scaling_matrix(&Factor(q(1))).unwrap();
        assert_eq!(m, Matrix::identity(3));
    }

    #[test]
    fn log_scaling_numeric() {
        // e_j = t^{-a} (log t)^{λ-1-j}, λ = 3, a = 2; compare e_j(t/c) with ℳ_c applied.
        let items: Vec<_> = (0..3).map(|k| ScaleItem::new(Exponent::int(2), Exponent::int(2 - k))).collect();
        let b = ScaleBasis::new(items, Exponent::int(2), Assumptions::new()).unwrap();
        let c = 1.7f64;
        let m = b.scaling_matrix(&Factor(c)).unwrap();
        let t = 1e6f64;
        let ev = |k: usize, t: f64| t.powi(-2) * t.ln().powi(2 - k as i32);
        for j in 0..3 {
            let exact = ev(j, t / c);
            let approx: f64 = (0..3).map(|i| m.get(i, j) * ev(i, t)).sum();
            assert!((exact - approx).abs() <= 1e-12 * exact.abs());
        }
    }

    #[test]
    fn nilpotent_degree() {
        let b = ScaleBasis::pure(&[Exponent::int(3), Exponent::int(4), Exponent::int(5)], Exponent::int(5), Assumptions::new()).unwrap();
        let d: Matrix<Q> = b.derivative_matrix().unwrap();
        assert_ne!(d.pow(2), Matrix::zero(3));
        assert_eq!(d.pow(3), Matrix::zero(3));
    }
}
