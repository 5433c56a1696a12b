#![allow(dead_code)]

use tailcalc::engine::{expand_convolution, ExpansionRequest, WeightSequence};
use tailcalc::scale::ScaleItem;
use tailcalc::sym::sym;
use tailcalc::tails::{DistributionSpec, Family, Support, TailTerm, TailVector};
use tailcalc::{Assumptions, Exponent, Scalar, Sym};

pub fn e(s: &str) -> Exponent {
    s.parse().unwrap()
}

pub fn env(pairs: &[(&str, f64)]) -> Assumptions {
    pairs.iter().map(|(k, v)| (k.to_string(), *v)).collect()
}

pub fn c(p: &str) -> Sym {
    Sym::atom(&format!("C[{}]", e(p))).unwrap()
}

/// `C_{p;q} = C_{p+q} − C_p C_q`.
pub fn cc(p: &str, q: &str) -> Sym {
    c(&(&e(p) + &e(q)).to_string()) - c(p) * c(q)
}

pub fn coeff(v: &TailVector<Sym>, power: &str) -> Sym {
    v.get(&ScaleItem::pure(e(power)))
}

/// Burr(β, 3/2, 10) with raw moments `mu1..mu4`, expanded over symbolic weights to seven corrections.
pub fn burr_expansion() -> TailVector<Sym> {
    let spec = DistributionSpec::<Sym>::new(Family::Burr { beta: sym("beta"), tau: e("3/2"), gamma: e("10") })
        .with_moments(vec![sym("1"), sym("mu1"), sym("mu2"), sym("mu3"), sym("mu4")]);
    expand_convolution(&WeightSequence::symbolic(), &spec, &ExpansionRequest::new(4)).unwrap().tail
}

/// `F̄ = (a t^{-α} + b t^{-β})/(a+b)`, nonnegative support, first moment `mu1`.
pub fn hall_weissman(beta: &str, assumptions: &[(&str, f64)]) -> TailVector<Sym> {
    let spec = DistributionSpec::<Sym>::new(Family::HallWeissman {
        a: sym("a/(a+b)"),
        b: sym("b/(a+b)"),
        alpha: e("alpha"),
        beta: e(beta),
    })
    .with_moments(vec![sym("1"), sym("mu1")])
    .synthetic()
    .with_env(env(assumptions));
    expand_convolution(&WeightSequence::symbolic(), &spec, &ExpansionRequest::new(1)).unwrap().tail
}

/// `F̄ = t^{-α} + x t^{-α-k}` with symbolic moments, expanded to order `m`.
pub fn two_term_law(x: &str, k: i64, support: Support<Sym>, moments: &[&str], m: usize) -> TailVector<Sym> {
    let spec = DistributionSpec::<Sym>::new(Family::PowerSeriesTail {
        terms: vec![TailTerm::pure(sym("1"), e("alpha")), TailTerm::pure(sym(x), e("alpha").add_int(k))],
    })
    .with_support(support)
    .with_moments(moments.iter().map(|s| sym(s)).collect())
    .synthetic()
    .with_env(env(&[("alpha", 3.5)]));
    expand_convolution(&WeightSequence::symbolic(), &spec, &ExpansionRequest::new(m)).unwrap().tail
}
