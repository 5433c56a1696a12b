//! Reference closed forms for the Burr(β, 3/2, 10) coefficients `q_0..q_7`.
//!
//! Written with `σ², κ_3, κ_4` (central moments) and `C_{p;q} = C_{p+q} − C_p C_q`,
//! kept literally, including entries that disagree with the computed expansion.

use crate::error::Result;
use crate::exponent::{Exponent, Q};
use crate::ring::{Ring, Scalar};
use crate::sym::{sym, Sym};

fn c(p: &str) -> Sym {
    let e: Exponent = p.parse().expect("exponent");
    Sym::atom(&format!("C[{e}]")).expect("atom")
}

fn cc(p: &str, q: &str) -> Sym {
    let pe: Exponent = p.parse().expect("exponent");
    let qe: Exponent = q.parse().expect("exponent");
    c(&(&pe + &qe).to_string()) - c(p) * c(q)
}

fn n(x: i64) -> Sym {
    Sym::from_i64(x)
}

/// `σ², κ_3, κ_4` in terms of raw moments `mu1..mu4`.
pub fn central_moments() -> (Sym, Sym, Sym) {
    (
        sym("mu2 - mu1^2"),
        sym("mu3 - 3*mu1*mu2 + 2*mu1^3"),
        sym("mu4 - 4*mu1*mu3 + 6*mu1^2*mu2 - 3*mu1^4"),
    )
}

/// `q_0..q_7`; `q_5` has an unbalanced parenthesis, closed before its `κ_3` term.
pub fn burr_reference() -> Vec<Sym> {
    let (s2, k3, k4) = central_moments();
    let b10 = sym("beta^10");
    let b11 = sym("beta^11");
    let b12 = sym("beta^12");
    let (m1, c1, c2, c3) = (sym("mu1"), c("1"), c("2"), c("3"));
    let q0 = b10.clone() * c("15");
    let q1 = n(-15) * b10.clone() * m1.clone() * cc("15", "1");
    let q2 = n(-10) * b11.clone() * c("33/2");
    let q3 = n(120) * b10.clone() * m1.powu(2) * (cc("17", "1") - c1.clone() * cc("15", "1"))
        - n(120) * b10.clone() * s2.clone() * cc("15", "2");
    let q4 = n(165) * b11.clone() * m1.clone() * cc("33/2", "1");
    let q5 = n(-680) * b10.clone() * m1.powu(3)
        * (cc("17", "1") - n(2) * c1.clone() * cc("16", "1") + c1.powu(2) * cc("15", "1"))
        + n(2040) * b10.clone() * s2.clone() * m1.clone() * (cc("17", "1") - c2.clone() * cc("15", "1"))
        - n(680) * b10.clone() * k3.clone() * cc("15", "3")
        + n(55) * b12.clone() * c("18");
    let q6 = Sym::from_q(&Q::new(5775.into(), 4.into()))
        * b11
        * (-(m1.powu(2)) * (cc("35/2", "1") - c1.clone() * cc("33/2", "1")) + s2.clone() * cc("33/2", "2"));
    let q7 = n(3060) * b10.clone() * m1.powu(4)
        * (cc("18", "1") - n(3) * c1.clone() * cc("17", "1") - n(3) * c1.powu(2) * cc("16", "1") - c1.powu(3) * cc("15", "1"))
        - n(18360) * b10.clone() * s2.clone() * m1.powu(2)
            * (cc("18", "1") - c1.clone() * cc("17", "1") - c2.clone() * cc("16", "1") - c1.clone() * c2.clone() * cc("15", "1"))
        - n(9180) * b10.clone() * s2.powu(2) * (n(2) * cc("17", "2") - c("15") * cc("2", "2"))
        + n(12240) * b10.clone() * k3 * m1.clone() * (cc("18", "1") - c3 * cc("15", "1"))
        - n(990) * b12 * m1 * cc("18", "1")
        - n(3060) * b10 * k4 * cc("15", "4");
    vec![q0, q1, q2, q3, q4, q5, q6, q7]
}

/// One row of the comparison between computed and reference coefficients.
#[derive(Clone, Debug, PartialEq, serde::Serialize)]
pub struct CoefficientDiff {
    pub index: usize,
    pub computed: String,
    pub reference: String,
    /// `computed − reference`.
    pub difference: String,
    pub matches: bool,
}

pub fn diff_against_reference(computed: &[Sym]) -> Result<Vec<CoefficientDiff>> {
    Ok(burr_reference()
        .into_iter()
        .zip(computed)
        .enumerate()
        .map(|(index, (r, x))| {
            let d = x.clone() - r.clone();
            CoefficientDiff {
                index,
                computed: x.to_string(),
                reference: r.to_string(),
                matches: d.is_zero(),
                difference: d.to_string(),
            }
        })
        .collect())
}
