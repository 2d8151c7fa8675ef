use std::cmp::Ordering;

use genpres_core::bohr::harness::{lemma41_converse, lemma43, lemma44, lemma45, lemma45_bounded};
use genpres_core::bohr::{BohrBounds, BohrChecker, BohrError, BohrParams};
use genpres_core::fo::{Status, Verdict};
use genpres_core::numeric::AlgebraicReal;
use genpres_core::presets::{bohr_params, sqrt_two};
use num_rational::BigRational;
use proptest::prelude::*;

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn checker() -> BohrChecker {
    BohrChecker::new(bohr_params(), BohrBounds::default()).unwrap()
}

// Decimal oracle: ‖√2·n²‖ in f64, None when within 1e-6 of the threshold.
fn g_oracle(n: i64) -> Option<u8> {
    let x = std::f64::consts::SQRT_2 * (n as f64) * (n as f64);
    let d = (x - x.round()).abs();
    if (d - 0.2).abs() < 1e-6 {
        None
    } else {
        Some(u8::from(d < 0.2))
    }
}

#[test]
fn indicator_values() {
    let c = checker();
    assert_eq!(c.g(0).unwrap(), 1);
    assert_eq!(c.g(1).unwrap(), 0);
    for n in 1..=1000 {
        if let Some(want) = g_oracle(n) {
            assert_eq!(c.g(n).unwrap(), want, "n = {n}");
        }
    }
}

#[test]
fn delta_threshold_at_one() {
    let c = checker();
    let want = AlgebraicReal::theta(&sqrt_two()).add_rational(&q(-6, 5));
    assert_eq!(c.delta_threshold(1).unwrap().cmp_value(&want), Ordering::Equal);
    assert!((c.delta_threshold(1).unwrap().to_f64() - (std::f64::consts::SQRT_2 - 1.2)).abs() < 1e-12);
    assert!(c.delta_threshold(0).is_err());
}

#[test]
fn delta_threshold_positive_and_non_increasing() {
    let c = checker();
    let mut prev = c.delta_threshold(1).unwrap();
    for n in 2..=120 {
        let d = c.delta_threshold(n).unwrap();
        assert_eq!(d.cmp_rational(&q(0, 1)), Ordering::Greater);
        assert_ne!(d.cmp_value(&prev), Ordering::Greater, "N = {n}");
        prev = d;
    }
}

#[test]
fn mu_examples() {
    let c = checker();
    for n in [1, 5, 50] {
        assert!(c.mu(0, n).unwrap());
    }
    assert!(c.mu(-1, 1).is_err());
    // Surrogate premise implies μ: 15049 and 54251 meet it at N = 10.
    let (e1, e2) = c.mu_premise(10).unwrap();
    for m in [15049i64, 54251] {
        assert!(c.alpha().norm_lt(2 * m as i128, &e1) && c.alpha().norm_lt((m as i128) * (m as i128), &e2));
        assert!(c.mu(m, 10).unwrap());
    }
    // A random large m fails at N = 50.
    assert!(!c.mu(123_457, 50).unwrap());
    // Brute force against the decimal oracle.
    for m in 1..=300 {
        let want = (1..=20).all(|n| g_oracle(n + m) == g_oracle(n));
        assert_eq!(c.mu(m, 20).unwrap(), want, "m = {m}");
    }
}

#[test]
fn mu_set_matches_membership() {
    let c = checker();
    let s = c.mu_set(3, 500);
    assert_eq!(s, (1..=500).filter(|&m| c.mu(m, 3).unwrap()).collect::<Vec<_>>());
}

#[test]
fn lambda_examples() {
    let c = checker();
    let n = c.lambda(0, 5).unwrap().expect("some μ-witness within n_cap");
    assert!(c.mu(n, 5).unwrap());
    // Tiny ‖2αm‖: the equidistribution search produces a verified witness.
    let m = 40391;
    assert!(c.norm_2am(m).to_f64() < 1e-5);
    let w = c.lambda_witness(m, 5, 2, 16).unwrap().expect("witness");
    assert!(c.mu(w, 5).unwrap() && c.mu(w + m, 5).unwrap());
    assert!(c.lambda(1, 0).is_err());
}

#[test]
fn lemma41_converse_counts_premises() {
    let c = checker();
    let r = lemma41_converse(&c, 3, 100_000).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.witness.as_ref().unwrap()["premise_count"], 4);
    let r = lemma41_converse(&c, 50, 100_000).unwrap();
    assert_eq!(r.status, Status::Pass);
    assert_eq!(r.verdict, Verdict::CapExhausted);
}

#[test]
fn kappa_examples() {
    let c = checker();
    // ‖α·13²‖ ≈ 0.002.
    let k = c.kappa(13, 1).unwrap();
    assert!(k.measure.unwrap() < 0.01);
    assert_eq!(k.verdict, Verdict::VerifiedInRange);
    let d = BohrChecker::new(bohr_params(), BohrBounds::degenerate()).unwrap();
    assert_eq!(d.kappa(1, 1).unwrap().verdict, Verdict::CapExhausted);
    assert!(c.kappa(0, 1).is_err());
}

#[test]
fn nu_examples() {
    let c = checker();
    for m in 1..=5 {
        let v = c.nu(m, m, 1).unwrap();
        assert_eq!(v.verdict, Verdict::VerifiedInRange);
        assert_eq!(v.measure, Some(0.0));
    }
}

#[test]
fn bounded_delta_examples() {
    let c = checker();
    for (m, mt) in [(2, 6), (5, 5)] {
        assert_eq!(c.delta(m, mt).unwrap().verdict, Verdict::VerifiedInRange);
    }
    // Informational records never count as passes or violations.
    for r in lemma45_bounded(&c, &[(2, 3), (2, 6)]).unwrap() {
        assert_eq!(r.status, Status::Excluded);
    }
    for r in lemma43(&c, &[1, 2], &[1]).unwrap().into_iter().chain(lemma44(&c, &[(1, 2)], &[1]).unwrap()) {
        assert_eq!(r.status, Status::Excluded);
        assert_eq!(r.witness.as_ref().unwrap()["informational"], true);
    }
}

#[test]
fn divisibility_examples() {
    let c = checker();
    let r = c.divisibility_sequence_check(2, 6).unwrap();
    assert!(r.divides && r.agrees() && r.tail_max < 0.01);
    let r = c.divisibility_sequence_check(2, 3).unwrap();
    assert!(!r.divides && r.agrees());
    assert!(r.terms[r.terms.len() - 2..].iter().all(|t| (t.norm_2am_tilde_n - 0.5).abs() < 0.05));
    for m in [1, 5, 9] {
        let r = c.divisibility_sequence_check(m, m).unwrap();
        assert!(r.agrees() && r.tail_max < 0.01);
    }
    for t in &r.terms {
        assert!(t.norm_2am_n < t.eps && t.norm_an2 < t.eps);
    }
    assert!(r.terms.windows(2).all(|w| w[0].n < w[1].n));
    assert!(c.divisibility_sequence_check(0, 3).is_err());
}

#[test]
fn divisibility_agrees_up_to_twelve() {
    let c = checker();
    let recs = lemma45(&c, 12, 0.05).unwrap();
    assert_eq!(recs.len(), 144);
    assert!(recs.iter().all(|r| r.status == Status::Pass));
}

#[test]
fn parameter_validation() {
    let f = sqrt_two();
    let a = AlgebraicReal::theta(&f);
    assert!(matches!(BohrParams::new(a.clone(), q(1, 4)), Err(BohrError::InvalidParams(_))));
    assert!(matches!(BohrParams::new(a.clone(), q(0, 1)), Err(BohrError::InvalidParams(_))));
    assert!(BohrParams::new(a, q(1, 5)).is_ok());
    assert!(matches!(BohrParams::new(AlgebraicReal::from_rational(&f, q(3, 2)), q(1, 5)), Err(BohrError::InvalidParams(_))));
    let bad = BohrBounds { h_cap: 0, ..BohrBounds::default() };
    assert!(BohrChecker::new(bohr_params(), bad).is_err());
    let wide = BohrBounds { n_cap: 1 << 21, ..BohrBounds::default() };
    assert!(matches!(BohrChecker::new(bohr_params(), wide), Err(BohrError::RangeOverflow { .. })));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn indicator_is_even_and_binary(n in -5000i64..5000) {
        let c = checker();
        let v = c.g(n).unwrap();
        prop_assert!(v <= 1);
        prop_assert_eq!(v, c.g(-n).unwrap());
    }

    #[test]
    fn mu_antitone_in_n(m in 0i64..3000, n in 1i64..30) {
        let c = checker();
        if c.mu(m, n + 1).unwrap() {
            prop_assert!(c.mu(m, n).unwrap());
        }
    }

    #[test]
    fn lambda_witnesses_check(m in 0i64..2000, n in 1i64..6) {
        let c = checker();
        if let Some(w) = c.lambda(m, n).unwrap() {
            prop_assert!(c.mu(w, n).unwrap() && c.mu(w + m, n).unwrap());
        }
    }

    #[test]
    fn premise_implies_mu(n in 1i64..8, m in 1i64..20_000) {
        let c = checker();
        let (e1, e2) = c.mu_premise(n).unwrap();
        if c.alpha().norm_lt(2 * m as i128, &e1) && c.alpha().norm_lt((m as i128) * (m as i128), &e2) {
            prop_assert!(c.mu(m, n).unwrap());
        }
    }
}
