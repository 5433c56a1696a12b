//! Acceptance suite: one PASS/FAIL line per criterion.

mod common;

use std::time::{Duration, Instant};

use common::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use tailcalc::apps::{
    branching_intensity, geometric_moments, implicit_renewal_solve, mg1_waiting_tail, second_order_classify,
    stopped_sum_operator, AuxLimit, RenewalProblem, SecondOrderCase, SecondOrderSpec, AuxOrder,
};
use tailcalc::engine::reference::{burr_reference, diff_against_reference};
use tailcalc::engine::{degenerate_tail, expand_convolution, expand_direct, g_moments, ExpansionRequest, WeightSequence};
use tailcalc::laplace::{character_from_moments, convolve_moments, scale_moments, LaplaceCharacter, MomentVector};
use tailcalc::matrix::Matrix;
use tailcalc::oracle::{brute_moments, mc_tail, numeric_convolution, McConfig, TailGrid};
use tailcalc::scale::{character_matrix, laplace_matrix, Factor, ScaleBasis};
use tailcalc::sym::sym;
use tailcalc::tails::{expand_tail, DistributionSpec, Family, Support, TailTerm};
use tailcalc::{Assumptions, Error, Exponent, Ring, Scalar, Sym, Q};

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn q(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

fn rq(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Q {
    q(rng.gen_range(lo..=hi), rng.gen_range(1..=6))
}

fn nonzero(rng: &mut ChaCha8Rng, lo: i64, hi: i64) -> Q {
    loop {
        let x = rq(rng, lo, hi);
        if !x.is_zero() {
            return x;
        }
    }
}

fn moments(rng: &mut ChaCha8Rng, m: usize) -> MomentVector<Q> {
    let mut mu = vec![q(1, 1)];
    mu.extend((1..=m).map(|_| rq(rng, -9, 9)));
    MomentVector::synthetic(mu).unwrap()
}

fn pure_basis(alpha: &Exponent, m: usize) -> ScaleBasis {
    let powers: Vec<Exponent> = (0..=m).map(|j| alpha.add_int(j as i64)).collect();
    ScaleBasis::pure(&powers, alpha.add_int(m as i64), Assumptions::new()).unwrap()
}

fn timed(limit: Duration, elapsed: Duration) -> (bool, String) {
    (elapsed < limit, format!("{:.2?} (limit {:?})", elapsed, limit))
}

fn burr() -> Outcome {
    let start = Instant::now();
    let p = burr_expansion();
    let (fast, time) = timed(Duration::from_secs(5), start.elapsed());
    let reference = burr_reference();
    let literal: Vec<usize> = (0..5).filter(|&i| p.p[i] == reference[i]).collect();
    let q3_shift = sym("120*beta^10*mu1^2") * (cc("16", "1") - cc("17", "1"));
    let q3_index_shift = p.p[3].clone() - reference[3].clone() == q3_shift;
    let diff = diff_against_reference(&p.p).unwrap();
    let path = std::path::Path::new(env!("CARGO_TARGET_TMPDIR")).join("burr_reference_diff.json");
    let written = std::fs::write(&path, serde_json::to_string_pretty(&diff).unwrap()).is_ok();
    let late: Vec<String> = diff[5..].iter().map(|d| format!("q{}={}", d.index, if d.matches { "match" } else { "differs" })).collect();
    outcome(
        literal.len() == 5 && written && fast,
        format!(
            "literal match for q{:?} of q0..q4; q3 differs from the reference form by exactly 120β^10μ1²(C_(16;1) − C_(17;1)): {}; \
             {} diff at {}; {}",
            literal,
            q3_index_shift,
            late.join(" "),
            path.display(),
            time
        ),
    )
}

fn hall_weissman_regimes() -> Outcome {
    let start = Instant::now();
    let cross = c("1") * c("alpha") - c("alpha+1");
    let lead = sym("a/(a+b)") * c("alpha");
    let below = hall_weissman("beta", &[("alpha", 2.5), ("beta", 3.0), ("a", 1.0), ("b", 1.0)]);
    let r1 = below.p[0] == lead && coeff(&below, "beta") == sym("b/(a+b)") * c("beta");
    let at = hall_weissman("alpha+1", &[("alpha", 2.5), ("a", 1.0), ("b", 1.0)]);
    let r2 = at.basis.len() == 2
        && at.p[0] == lead
        && at.p[1] == (sym("b") * c("alpha+1") + sym("a*mu1*alpha") * cross.clone()) * sym("1/(a+b)");
    let above = hall_weissman("beta", &[("alpha", 2.5), ("beta", 4.0), ("a", 1.0), ("b", 1.0)]);
    let r3 = above.p[0] == lead && coeff(&above, "alpha+1") == sym("a*alpha/(a+b)*mu1") * cross;
    let (fast, time) = timed(Duration::from_secs(1), start.elapsed());
    outcome(r1 && r2 && r3 && fast, format!("β<α+1: {r1}, β=α+1: {r2}, β>α+1: {r3}; {time}"))
}

fn two_term_laws() -> Outcome {
    let ex2 = two_term_law("1", 2, Support::Nonnegative, &["1", "mu1"], 1);
    let reference2 = sym("alpha*mu1") * cc("alpha", "1");
    let lead2 = coeff(&ex2, "alpha") == c("alpha");
    let second2 = coeff(&ex2, "alpha+1");
    let matches_reference = second2 == reference2;
    let opposite_sign = second2 == -reference2;
    let ex3 = two_term_law("-1", 3, Support::Symmetric, &["1", "0", "mu2"], 2);
    let r3 = coeff(&ex3, "alpha") == c("alpha")
        && coeff(&ex3, "alpha+1").is_zero()
        && coeff(&ex3, "alpha+2") == -(sym("alpha*(alpha+1)/2*mu2") * cc("alpha", "2"));
    let oracle = mean_correction_sign_is_positive();
    outcome(
        lead2 && matches_reference && r3,
        format!(
            "C_α: {lead2}; symmetric law −(α(α+1)/2)C_(α;2)μ2: {r3}; nonnegative law reference αC_(α;1)μ1: {matches_reference}, \
             computed is −αC_(α;1)μ1: {opposite_sign}, numeric convolution of two Pareto(4) summands confirms the computed sign: {oracle}"
        ),
    )
}

/// Two iid nonnegative summands: the computed `t^{-α-1}` term must beat its sign flip against quadrature.
fn mean_correction_sign_is_positive() -> bool {
    let spec = DistributionSpec::<f64>::new(Family::Pareto { alpha: e("4") });
    let p = expand_convolution(&WeightSequence::explicit(vec![1.0, 1.0]), &spec, &ExpansionRequest::new(2)).unwrap().tail;
    let h = 0.005;
    let grid = TailGrid::from_fn(h, 8000, |t| (1.0 + t).powi(-4));
    let g = numeric_convolution(&grid, &grid).unwrap();
    [20.0, 30.0, 40.0].iter().all(|&t| {
        let exact = g.values[(t / h) as usize];
        let approx = p.eval_at(t).unwrap();
        let second = p.p[1] * f64::powi(t, -5);
        (exact - approx).abs() < (exact - (approx - 2.0 * second)).abs()
    })
}

fn implicit_renewal() -> Outcome {
    let env = env(&[("alpha", 3.5), ("theta", 0.05)]);
    let h = DistributionSpec::new(Family::Exponential { theta: sym("theta") }).with_env(env.clone());
    let k = DistributionSpec::<Sym>::new(Family::Pareto { alpha: e("alpha") }).with_env(env);
    let sol = match implicit_renewal_solve(&RenewalProblem::new(h, k, 1)) {
        Ok(s) => s,
        Err(err) => return outcome(false, format!("solver failed: {err}")),
    };
    let g = Sym::atom("[theta^(alpha)*Gamma(alpha+1)]").unwrap();
    let one = Sym::one();
    let p0 = sol.tail.p[0] == (one.clone() - g.clone()).inv().unwrap();
    let num = sym("alpha") * (g.clone() * sym("theta - alpha + theta*alpha") + sym("alpha - 1 - theta*alpha"));
    let den = sym("(1-alpha)*(1-theta)") * (one.clone() - g.clone()) * (one - g * sym("theta*(alpha+1)"));
    let p1 = sol.tail.p[1] == num.div(&den).unwrap();
    let mu = *sol.f_moments.get(1) == sym("1/((1-theta)*(alpha-1))");
    outcome(p0 && p1 && mu, format!("p0: {p0}, p1: {p1}, μ_(F,1): {mu}"))
}

fn branching() -> Outcome {
    let fm = MomentVector::new(vec![sym("1"), sym("mu1"), sym("s2 + mu1^2")]).unwrap();
    let op = branching_intensity(&fm, &sym("rho"), 2).unwrap();
    let want = [
        sym("1/(1-rho)"),
        sym("-2*rho*mu1/(1-rho)^2"),
        sym("rho/(1-rho)^3*((1-rho)*s2 + (1+2*rho)*mu1^2)"),
    ];
    let hits: Vec<bool> = op.coeff().iter().zip(&want).map(|(a, b)| a == b).collect();
    outcome(hits.iter().all(|x| *x), format!("Id, D, D² coefficients: {hits:?}"))
}

fn algebra_properties() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut fails: Vec<String> = Vec::new();
    let cases = 1000;
    for case in 0..cases {
        let m = rng.gen_range(0..=6);
        let (x, y, z) = (moments(&mut rng, m), moments(&mut rng, m), moments(&mut rng, m));
        let (a, b, c) = (character_from_moments(&x), character_from_moments(&y), character_from_moments(&z));
        let mut check = |ok: bool, what: &str| {
            if !ok {
                fails.push(format!("case {case} (m={m}): {what}"));
            }
        };
        check(a.compose(&b.compose(&c).unwrap()).unwrap() == a.compose(&b).unwrap().compose(&c).unwrap(), "associativity");
        check(character_from_moments(&convolve_moments(&x, &y).unwrap()) == a.compose(&b).unwrap(), "homomorphism");
        let inv = a.invert_partitions().unwrap();
        check(inv == a.invert_nilpotent().unwrap(), "inversion formulas");
        let id = LaplaceCharacter::identity(m);
        check(a.compose(&inv).unwrap() == id && inv.compose(&a).unwrap() == id, "two-sided inverse");
        let alpha = Exponent::constant(q(rng.gen_range(m as i64 + 1..=m as i64 + 12), rng.gen_range(1..=4)));
        let d: Matrix<Q> = pure_basis(&alpha, m).derivative_matrix().unwrap();
        check(
            character_matrix(&convolve_moments(&x, &y).unwrap(), &d) == character_matrix(&x, &d).mul(&character_matrix(&y, &d)),
            "matrix representation",
        );
        check(laplace_matrix(&a.compose(&b).unwrap(), &d) == laplace_matrix(&a, &d).mul(&laplace_matrix(&b, &d)), "operator matrix");
        let alpha_int = Exponent::int(rng.gen_range(m as i64 + 1..=m as i64 + 6));
        let basis = pure_basis(&alpha_int, m);
        let dn: Matrix<Q> = basis.derivative_matrix().unwrap();
        let s = nonzero(&mut rng, 1, 9);
        let mc: Matrix<Q> = basis.scaling_matrix(&Factor(s.clone())).unwrap();
        check(
            character_matrix(&scale_moments(&x, &s), &dn).mul(&mc) == mc.mul(&character_matrix(&x, &dn)),
            "scaling commutation",
        );
    }
    outcome(fails.is_empty(), format!("{cases} cases, {} failures {:?}", fails.len(), fails.iter().take(3).collect::<Vec<_>>()))
}

fn oracle_equivalence() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut moment_fails = 0;
    for _ in 0..200 {
        let n = rng.gen_range(1..=4);
        let m = rng.gen_range(0..=4);
        let c: Vec<Q> = (0..n).map(|_| rq(&mut rng, -6, 6)).collect();
        let fm = moments(&mut rng, m);
        let g = g_moments(&WeightSequence::explicit(c.clone()), &fm, m).unwrap();
        if (0..=m).any(|j| *g.get(j) != brute_moments(&c, &fm, j).unwrap()) {
            moment_fails += 1;
        }
    }
    let mut route_fails = 0;
    let mut cases = 0;
    while cases < 50 {
        let m = rng.gen_range(0..=3);
        let k = rng.gen_range(0..=1);
        let alpha = Exponent::int(rng.gen_range(m as i64 + 1..=m as i64 + 4));
        let terms: Vec<TailTerm<Q>> =
            (0..=m + k + 1).map(|j| TailTerm::pure(if j == 0 { q(1, 1) } else { rq(&mut rng, -5, 5) }, alpha.add_int(j as i64))).collect();
        let mut spec = DistributionSpec::new(Family::PowerSeriesTail { terms: terms.clone() })
            .with_moments(moments(&mut rng, m).mu().to_vec())
            .synthetic();
        if rng.gen_bool(0.5) {
            let lower = terms.iter().map(|t| TailTerm { coeff: t.coeff.clone() * rq(&mut rng, 1, 3), item: t.item.clone() }).collect();
            spec = spec.with_support(Support::TwoSided { lower });
        }
        let n = rng.gen_range(1..=4);
        let w = WeightSequence::explicit((0..n).map(|_| rq(&mut rng, -6, 6)).collect());
        let req = ExpansionRequest::new(m).derivative(k);
        let (Ok(a), Ok(b)) = (expand_convolution(&w, &spec, &req), expand_direct(&w, &spec, &req)) else {
            continue;
        };
        cases += 1;
        if a.tail != b.tail {
            route_fails += 1;
        }
    }
    outcome(
        moment_fails == 0 && route_fails == 0,
        format!("g_moments vs brute force: {moment_fails}/200 failures; convolution vs direct route: {route_fails}/{cases} failures"),
    )
}

fn monte_carlo() -> Outcome {
    let start = Instant::now();
    let spec = DistributionSpec::<f64>::new(Family::Pareto { alpha: e("3") });
    let w = WeightSequence::ar1(0.5);
    let p = expand_convolution(&w, &spec, &ExpansionRequest::new(1)).unwrap().tail;
    let one = |t: f64| p.p[0] * t.powi(-3);
    let second = |t: f64| p.p[1] * t.powi(-4);
    let thresholds: Vec<f64> = [11.0, 13.0, 16.0, 20.0, 25.0, 32.0, 40.0, 48.0].into_iter().filter(|&t| (1e-5..=1e-3).contains(&one(t))).collect();
    let cfg = McConfig::new(100_000_000, thresholds).seed(20_240_601).truncation(24);
    let report = match mc_tail(&w, &spec, &cfg) {
        Ok(r) => r,
        Err(err) => return outcome(false, format!("simulation failed: {err}")),
    };
    let mut ok = true;
    let mut notes = Vec::new();
    let mut compared = 0;
    for r in &report.rows {
        let (t, mc) = (r.threshold, r.estimate);
        let p1 = one(t);
        let side = if second(t) < 0.0 { p1 > r.ci_hi } else { p1 < r.ci_lo };
        let first_ok = (r.ci_lo..=r.ci_hi).contains(&p1) || side;
        let half = 0.5 * (r.ci_hi - r.ci_lo);
        let resolved = half < 0.2 * second(t).abs();
        let two_better = (mc - p1 - second(t)).abs() < (mc - p1).abs();
        if resolved {
            compared += 1;
        }
        ok &= first_ok && (!resolved || two_better);
        notes.push(format!(
            "t={t}: mc={mc:.4e} ci=[{:.4e},{:.4e}] 1-term={p1:.4e} 2-term={:.4e}{}",
            r.ci_lo,
            r.ci_hi,
            p1 + second(t),
            if resolved { if two_better { " (2-term closer)" } else { " (2-term NOT closer)" } } else { "" }
        ));
    }
    let (fast, time) = timed(Duration::from_secs(600), start.elapsed());
    for n in &notes {
        println!("    {n}");
    }
    outcome(
        ok && fast && compared > 0,
        format!("{} thresholds, {compared} with resolved second-order term, 1e8 samples, {time}", report.rows.len()),
    )
}

fn queue_cross_route() -> Outcome {
    let mut bad = Vec::new();
    let mut laws: Vec<(DistributionSpec<Q>, Q)> = vec![
        (DistributionSpec::new(Family::Pareto { alpha: e("7") }), q(1, 1)),
        (DistributionSpec::new(Family::Pareto { alpha: e("13/2") }), q(2, 3)),
        (DistributionSpec::new(Family::Exponential { theta: q(1, 2) }), q(3, 4)),
    ];
    laws.push((DistributionSpec::new(Family::PointMass { at: q(1, 3) }), q(1, 2)));
    for (b, mu) in &laws {
        for m in 0..=4 {
            let qt = mg1_waiting_tail(b, mu, m).unwrap();
            let geo = stopped_sum_operator(&geometric_moments(&qt.load, m + 1).unwrap(), &qt.h_moments, m).unwrap();
            let a = qt.load.clone();
            if qt.operator != geo || qt.operator.coeff()[0] != a.clone() / (q(1, 1) - a) {
                bad.push(format!("{:?} m={m}", b.family));
            }
        }
    }
    let sb = DistributionSpec::<Sym>::new(Family::Pareto { alpha: e("9") })
        .with_moments(vec![sym("1"), sym("b1"), sym("b2"), sym("b3"), sym("b4"), sym("b5")])
        .synthetic();
    for m in 0..=4 {
        let qt = mg1_waiting_tail(&sb, &sym("beta"), m).unwrap();
        let geo = stopped_sum_operator(&geometric_moments(&qt.load, m + 1).unwrap(), &qt.h_moments, m).unwrap();
        if qt.operator != geo || qt.operator.coeff()[0] != sym("b1/(beta-b1)") {
            bad.push(format!("symbolic m={m}"));
        }
    }
    outcome(bad.is_empty(), format!("{} rational and 5 symbolic cases; mismatches {bad:?}", laws.len() * 5))
}

fn degenerate_cases() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut fails = Vec::new();
    let mut done = 0;
    while done < 20 {
        let m = rng.gen_range(0..=3);
        let alpha = Exponent::constant(q(rng.gen_range(2 * m as i64 + 1..=2 * m as i64 + 10), 2));
        let n = rng.gen_range(1..=4);
        let c: Vec<Sym> = (0..n).map(|_| Sym::from_q(&nonzero(&mut rng, 1, 8))).collect();
        let fm = MomentVector::synthetic((0..=m).map(|j| if j == 0 { Sym::one() } else { Sym::from_q(&rq(&mut rng, -4, 4)) }).collect())
            .unwrap();
        let w = WeightSequence::explicit(c);
        let p = match degenerate_tail(&w, &alpha, m, &fm) {
            Ok(p) => p,
            Err(err) => {
                fails.push(format!("construction: {err}"));
                done += 1;
                continue;
            }
        };
        let spec = DistributionSpec::new(Family::PowerSeriesTail { terms: p.terms() }).with_moments(fm.mu().to_vec()).synthetic();
        let r = expand_convolution(&w, &spec, &ExpansionRequest::new(m)).unwrap();
        let mut want = vec![Sym::zero(); m + 1];
        want[0] = Sym::one();
        if r.tail.p != want {
            fails.push(format!("α={alpha} m={m}"));
        }
        done += 1;
    }
    outcome(fails.is_empty(), format!("20 cases, failures {fails:?}"))
}

fn classifier() -> Outcome {
    let alpha = e("3");
    let (_, st) = expand_tail(&DistributionSpec::<Sym>::new(Family::Student { alpha: alpha.clone() }), 2).unwrap();
    // F̄(t) = A t^{-α}(1 + a_ex t^{-2} + …); the remainder constant of U(λt)/U(t) − λ^{-α} is −2 a_ex
    let a_ex = st.p[1].div(&st.p[0]).unwrap();
    let Some(a) = (Sym::from_i64(-2) * a_ex).as_constant() else {
        return outcome(false, "Student second-order constant is not rational");
    };
    let student = DistributionSpec::<Q>::new(Family::Student { alpha: alpha.clone() });
    let fm = student.moments(2).unwrap();
    let so = SecondOrderSpec::new(alpha.clone(), e("-2"), AuxLimit::Finite(a)).with_g_index(e("2"));
    let c = second_order_classify(&so, &WeightSequence::ar1(q(1, 2)), &fm);
    let student_ok = matches!(&c, Ok(c) if c.case == SecondOrderCase::FiniteZeroMean && c.g_order == AuxOrder::Power(e("2")));

    let w = WeightSequence::explicit(vec![q(1, 1), q(1, 2), q(1, 3)]);
    let fm = MomentVector::new(vec![q(1, 1), q(0, 1), q(2, 1)]).unwrap();
    let (ca, c5, c2) = (w.power_sum(&alpha).unwrap(), w.power_sum(&e("5")).unwrap(), w.power_sum(&e("2")).unwrap());
    // a C_{α+2} = ½α(α+1)μ₂ C_{α;2}
    let a_ex = q(1, 2) * q(12, 1) * q(2, 1) * (c5.clone() - ca * c2) / c5;
    let so = SecondOrderSpec::new(alpha, e("-2"), AuxLimit::Finite(-q(2, 1) * a_ex));
    let cancel = second_order_classify(&so, &w, &fm);
    let cancel_ok = matches!(cancel, Err(Error::HigherOrderNeeded(_)));
    outcome(
        student_ok && cancel_ok,
        format!(
            "Student(3)/AR1(1/2): {}; engineered cancellation: {}",
            match &c {
                Ok(c) => format!("case {} with g of order {}", c.case.number(), c.g_order),
                Err(err) => err.to_string(),
            },
            match &cancel {
                Err(err) => err.to_string(),
                Ok(c) => format!("numeric coefficient {}", c.coefficient),
            }
        ),
    )
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 11] = [
        ("Burr golden coefficients", burr),
        ("Hall-Weissman three regimes", hall_weissman_regimes),
        ("two-term laws, mean and variance terms", two_term_laws),
        ("implicit renewal Exponential/Pareto", implicit_renewal),
        ("branching m=2", branching),
        ("character algebra properties", algebra_properties),
        ("oracle equivalence", oracle_equivalence),
        ("Monte-Carlo validation", monte_carlo),
        ("queue cross-route", queue_cross_route),
        ("degenerate-case construction", degenerate_cases),
        ("second-order classifier", classifier),
    ];
    let only: Option<usize> = std::env::args().skip(1).find_map(|a| a.parse().ok());
    let mut failed = Vec::new();
    for (i, (name, run)) in criteria.iter().enumerate() {
        let n = i + 1;
        if only.is_some_and(|k| k != n) {
            continue;
        }
        let start = Instant::now();
        let r = run();
        let tag = if r.pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {tag} {name} [{:.1?}]: {}", start.elapsed(), r.detail);
        if !r.pass {
            failed.push(n);
        }
    }
    if !failed.is_empty() {
        println!("acceptance: failed criteria {failed:?}");
        std::process::exit(1);
    }
    println!("acceptance: all criteria passed");
}
