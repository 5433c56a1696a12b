mod common;

use common::e;
use proptest::prelude::*;
use tailcalc::engine::{expand_convolution, g_moments, ExpansionRequest, WeightSequence};
use tailcalc::laplace::MomentVector;
use tailcalc::matrix::Matrix;
use tailcalc::oracle::brute_moments;
use tailcalc::scale::{Factor, ScaleBasis};
use tailcalc::tails::{DistributionSpec, Family, Support, TailTerm};
use tailcalc::{Assumptions, Exponent, Ring, Scalar, Q};

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn rational(lo: i64, hi: i64) -> impl Strategy<Value = Q> {
    (lo..=hi, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn positive() -> impl Strategy<Value = Q> {
    (1i64..=9, 1i64..=5).prop_map(|(n, d)| q(n, d))
}

fn law(alpha: i64, coeffs: Vec<Q>, mu: Vec<Q>) -> DistributionSpec<Q> {
    let a = Exponent::int(alpha);
    let mut terms = vec![TailTerm::pure(q(1, 1), a.clone())];
    terms.extend(coeffs.into_iter().enumerate().map(|(j, c)| TailTerm::pure(c, a.add_int(j as i64 + 1))));
    let mut moments = vec![q(1, 1)];
    moments.extend(mu);
    DistributionSpec::new(Family::PowerSeriesTail { terms }).with_moments(moments).synthetic()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn scaling_weights_scales_moments(
        c in prop::collection::vec(rational(-5, 5), 1..4),
        mu in prop::collection::vec(rational(-5, 5), 3),
        lambda in rational(-4, 4),
    ) {
        let mut m = vec![q(1, 1)];
        m.extend(mu);
        let fm = MomentVector::synthetic(m).unwrap();
        let w = WeightSequence::explicit(c.clone());
        let scaled = WeightSequence::explicit(c.iter().map(|x| x * &lambda).collect());
        let a = g_moments(&w, &fm, 3).unwrap();
        let b = g_moments(&scaled, &fm, 3).unwrap();
        for j in 0..=3 {
            prop_assert_eq!(b.get(j).clone(), a.get(j).clone() * lambda.powu(j as u32));
            prop_assert_eq!(a.get(j).clone(), brute_moments(&c, &fm, j).unwrap());
        }
    }

    #[test]
    fn scaling_matrices_form_a_semigroup(alpha in 1i64..6, m in 0usize..4, c in positive(), d in positive()) {
        let powers: Vec<Exponent> = (0..=m).map(|j| Exponent::int(alpha + j as i64)).collect();
        let b = ScaleBasis::pure(&powers, Exponent::int(alpha + m as i64), Assumptions::new()).unwrap();
        let mc: Matrix<Q> = b.scaling_matrix(&Factor(c.clone())).unwrap();
        let md: Matrix<Q> = b.scaling_matrix(&Factor(d.clone())).unwrap();
        let mcd: Matrix<Q> = b.scaling_matrix(&Factor(c * d)).unwrap();
        prop_assert_eq!(mc.mul(&md), mcd);
    }

    #[test]
    fn single_unit_weight_reproduces_the_tail(
        alpha in 3i64..7,
        coeffs in prop::collection::vec(rational(-5, 5), 2),
        mu in prop::collection::vec(rational(-5, 5), 2),
    ) {
        let spec = law(alpha, coeffs.clone(), mu);
        let r = expand_convolution(&WeightSequence::explicit(vec![q(1, 1)]), &spec, &ExpansionRequest::new(2)).unwrap();
        let mut want = vec![q(1, 1)];
        want.extend(coeffs);
        prop_assert_eq!(r.tail.p, want);
    }

    #[test]
    fn zero_weights_are_ignored(
        alpha in 3i64..6,
        coeffs in prop::collection::vec(rational(-3, 3), 2),
        mu in prop::collection::vec(rational(-3, 3), 2),
        c in prop::collection::vec(positive(), 1..3),
    ) {
        let spec = law(alpha, coeffs, mu);
        let req = ExpansionRequest::new(2);
        let a = expand_convolution(&WeightSequence::explicit(c.clone()), &spec, &req).unwrap();
        let mut padded = c;
        padded.push(q(0, 1));
        let b = expand_convolution(&WeightSequence::explicit(padded), &spec, &req).unwrap();
        prop_assert_eq!(a.tail, b.tail);
    }

    #[test]
    fn float_mode_tracks_exact_mode(
        alpha in 3i64..6,
        coeffs in prop::collection::vec(rational(-3, 3), 2),
        mu in prop::collection::vec(rational(-3, 3), 2),
        c in prop::collection::vec(rational(-4, 4), 1..4),
    ) {
        let spec = law(alpha, coeffs.clone(), mu.clone()).with_support(Support::Nonnegative);
        let req = ExpansionRequest::new(2);
        let exact = expand_convolution(&WeightSequence::explicit(c.clone()), &spec, &req).unwrap();
        let fspec = spec.to_f64().unwrap();
        let fw = WeightSequence::explicit(c.iter().map(|x| x.to_f64().unwrap()).collect());
        let float = expand_convolution(&fw, &fspec, &req).unwrap();
        for (x, y) in exact.tail.p.iter().zip(&float.tail.p) {
            let x = x.to_f64().unwrap();
            prop_assert!((x - y).abs() <= 1e-9 * x.abs().max(1.0), "{} vs {}", x, y);
        }
    }
}

#[test]
fn exact_mode_refuses_transcendental_constants() {
    let spec = DistributionSpec::<Q>::new(Family::Student { alpha: e("5") });
    let r = expand_convolution(&WeightSequence::explicit(vec![q(1, 1), q(1, 2)]), &spec, &ExpansionRequest::new(3));
    assert!(r.is_err());
}
