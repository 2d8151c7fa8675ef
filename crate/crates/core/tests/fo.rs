use std::sync::Arc;

use genpres_core::fo::harness;
use genpres_core::fo::*;
use genpres_core::genpoly::TheoremA;
use genpres_core::numeric::AlgebraicReal;
use genpres_core::presets::{cube_root_two, theorem_a_default};
use genpres_core::search::{find_progression_base, SearchBudget};
use proptest::prelude::*;

/// ⌊2^{1/3}·n⌉ by integer arithmetic: the a with (2a−1)³ < 16n³ < (2a+1)³.
fn nint_cbrt2(n: i64) -> i128 {
    let target = 16 * (n as i128).pow(3);
    let sign = if n < 0 { -1 } else { 1 };
    let t = target.abs();
    let mut a = ((t as f64).cbrt() / 2.0).round() as i128;
    while (2 * a - 1).pow(3) >= t {
        a -= 1;
    }
    while (2 * a + 1).pow(3) <= t {
        a += 1;
    }
    sign * a
}

/// g(n) = n⌊2^{1/3}n⌉, computed without the library.
fn g_oracle(n: i64) -> i128 {
    n as i128 * nint_cbrt2(n)
}

fn d2_oracle(a: i64, b: i64, c: i64) -> i128 {
    g_oracle(a + b + c) - g_oracle(a + b) - g_oracle(a + c) - g_oracle(b + c) + g_oracle(a) + g_oracle(b) + g_oracle(c)
}

fn checker(bounds: BoundProfile) -> Arc<TheoremAChecker> {
    Arc::new(TheoremAChecker::new(Arc::new(theorem_a_default()), 2, bounds).unwrap())
}

fn tiny() -> BoundProfile {
    BoundProfile { big_m_cap: 6, big_m_prime_cap: 4, big_h_cap: 2, range_multiplier: 4, n2_span: 400, ..Default::default() }
}

fn eval_closed(src: &str) -> Result<bool, FoError> {
    eval_formula(&parse_formula(src)?, &Vec::new(), &Structure::new(), &BoundProfile::default())
}

#[test]
fn oracle_matches_library_sequence() {
    let chk = checker(BoundProfile::default());
    for n in -300..=3000 {
        assert_eq!(chk.g(n), g_oracle(n), "n = {n}");
    }
}

#[test]
fn bounded_quantifier_examples() {
    assert!(eval_closed("exists x in [1, 10]: x + x = 10").unwrap());
    assert!(!eval_closed("forall x in [1, 3]: x < 1").unwrap());
    let f = parse_formula("exists x in [1, 10]: x + x = 10").unwrap();
    let w = find_witness(&f, &Vec::new(), &Structure::new(), &BoundProfile::default()).unwrap();
    assert_eq!(w, Some(vec![("x".to_string(), 5)]));
}

#[test]
fn empty_ranges_and_nesting() {
    assert!(!eval_closed("exists x in [3, 1]: true").unwrap());
    assert!(eval_closed("forall x in [3, 1]: false").unwrap());
    assert!(eval_closed("forall x in [1, 5]: exists y in [x, 2*x]: y = x + x - 1 or y = 2*x").unwrap());
    assert!(eval_closed("not (forall x in [-4, 4]: x * x > 0)").unwrap());
    assert!(eval_closed("forall x in [1, 6]: x < 4 -> x != 5").unwrap());
}

#[test]
fn evaluation_errors() {
    let f = parse_formula("x = 1").unwrap();
    assert!(matches!(
        eval_formula(&f, &Vec::new(), &Structure::new(), &BoundProfile::default()),
        Err(FoError::UnboundVariable(v)) if v == "x"
    ));
    let small = BoundProfile { max_range: 100, ..Default::default() };
    let f = parse_formula("exists x in [1, 1000]: x < 0").unwrap();
    assert!(matches!(
        eval_formula(&f, &Vec::new(), &Structure::new(), &small),
        Err(FoError::RangeOverflow { size: 1000, .. })
    ));
    let f = parse_formula("exists x in [1, 3]: g(x) = 0").unwrap();
    assert!(matches!(
        eval_formula(&f, &Vec::new(), &Structure::new(), &BoundProfile::default()),
        Err(FoError::UnknownSymbol(_))
    ));
    assert!(matches!(parse_formula("exists x [1, 2]: true"), Err(FoError::Syntax { .. })));
}

#[test]
fn relations_and_sequences_in_structures() {
    let chk = checker(BoundProfile::default());
    let st = chk.structure(PsiBackend::Window);
    let f = parse_formula("forall n in [1, 40]: g(n) >= n * n").unwrap();
    assert!(eval_formula(&f, &Vec::new(), &st, &BoundProfile::default()).unwrap());
    let st = Structure::new().with_relation("div", Arc::new(|a: &[i128]| a[0] != 0 && a[1] % a[0] == 0));
    let f = parse_formula("forall x in [1, 12]: div(x, 12) -> (exists y in [1, 12]: x * y = 12)").unwrap();
    assert!(eval_formula(&f, &Vec::new(), &st, &BoundProfile::default()).unwrap());
}

#[test]
fn psi_formula_matches_hand_rolled_loop() {
    let b = BoundProfile { n2_span: 300, ..Default::default() };
    let chk = checker(b.clone());
    let st = chk.structure(PsiBackend::Window);
    for m in 1..=60 {
        for big_n in [0, 1, 3, 6] {
            let oracle = (1..=big_n).all(|n| (2 * m..=2 * m + 300).any(|n2| d2_oracle(n, m, n2) == 0));
            let f = chk.psi_formula(Term::int(m as i128), Term::int(big_n as i128));
            let by_formula = eval_formula(&f, &Vec::new(), &st, &b).unwrap();
            assert_eq!(by_formula, oracle, "m = {m}, N = {big_n}");
            assert_eq!(chk.def_psi(m, big_n), oracle, "m = {m}, N = {big_n}");
        }
    }
}

#[test]
fn mu_edges() {
    let chk = checker(BoundProfile::default());
    // ⦃α⦄ ≈ 0.26, so ⦃α⦄ + ⦃α⦄ > 1/2.
    assert!(!chk.pair_condition(1, 1));
    assert!(!chk.def_mu(1, 1).holds);
    // ⦃2α⦄ ≈ −0.48 brings the sum back inside.
    assert!(chk.pair_condition(1, 2));
    assert!(chk.def_psi(7, 0));
    let capped = checker(BoundProfile { n2_cap: 5, ..Default::default() });
    let out = capped.def_mu(1, 10);
    assert!(!out.holds && out.lo > out.hi);
    let good = (1..200).find(|&m| chk.pair_condition(1, m)).unwrap();
    let out = chk.def_mu(1, good);
    let w = out.witness.unwrap();
    assert!(w >= 2 * good && d2_oracle(1, good, w) == 0);
}

#[test]
fn window_endpoints_shrink_towards_zero() {
    let chk = checker(BoundProfile::default());
    let mut prev = chk.window_endpoints(1);
    for n in 2..=40 {
        let cur = chk.window_endpoints(n);
        assert!(cur.0.cmp_value(&prev.0).is_ge() && cur.1.cmp_value(&prev.1).is_le());
        assert!(cur.0.sign() < 0 && cur.1.sign() > 0);
        prev = cur;
    }
}

#[test]
fn delta_routes_agree_on_small_caps() {
    let chk = checker(tiny());
    for n in 1..=4 {
        for np in 1..=8 {
            let fast = chk.def_delta(n, np).holds;
            assert_eq!(fast, chk.def_delta_literal(n, np, PsiBackend::Window), "({n}, {np})");
            assert_eq!(fast, chk.def_delta_literal(n, np, PsiBackend::BoundedMu), "({n}, {np})");
            assert_eq!(fast, chk.def_delta_formula(n, np, PsiBackend::Window).unwrap(), "({n}, {np})");
        }
    }
}

#[test]
fn delta_examples_at_default_caps() {
    let chk = checker(BoundProfile::default());
    let g = theorem_a_default();
    // ‖3α‖ ≈ 0.22, so 3‖3α‖ > 1/2; ‖4α‖ ≈ 0.04, so 3‖4α‖ < 1/2.
    let d = chk.def_delta(4, 12);
    assert!(d.holds && d.h.is_some() && lemma36_characterisation(&g, 4, 12));
    assert!(!chk.def_delta(4, 10).holds && !lemma36_characterisation(&g, 4, 10));
    for n in [1, 5, 9] {
        assert!(chk.def_delta(n, n).holds);
    }
    assert_eq!(chk.def_delta(4, 4 * 13).verdict, Verdict::RefutedInRange);
}

#[test]
fn ell_values() {
    let chk = checker(BoundProfile::default());
    assert_eq!(chk.ell(4).unwrap(), 48);
    // ‖α‖ ≈ 0.26 lies in (1/4, 1/2].
    assert_eq!(chk.ell(1).unwrap(), 1);
    for k in 1..=200 {
        let l = chk.ell(k).unwrap();
        assert!(l >= k && l % k == 0);
    }
    assert!(chk.ell(0).is_err());
    assert_eq!(chk.ell_via_delta(4, 20), Some(48));
}

#[test]
fn progressions() {
    let chk = checker(BoundProfile::default());
    assert_eq!(chk.progression(7, 7).unwrap().elements, vec![7]);
    let p = chk.progression(4, 48).unwrap();
    assert_eq!(p.elements, (1..=12).map(|t| 4 * t).collect::<Vec<_>>());
    assert!(matches!(chk.progression(4, 3), Err(FoError::PreconditionViolated(_))));
    assert!(matches!(chk.progression(4, 52), Err(FoError::PreconditionViolated(_))));
    let by_delta: Vec<i64> = (4..=48).filter(|&n| chk.def_delta(4, n).holds).collect();
    assert_eq!(by_delta, p.elements);
}

#[test]
fn pi_and_quadratic_fit() {
    let chk = checker(BoundProfile::default());
    let out = chk.def_pi(4, 8).unwrap();
    assert!(!out.holds && out.failure == Some(PiFailure::Range));
    let m = find_progression_base(5, chk.sequence(), &SearchBudget::hybrid(1_000_000)).unwrap().m;
    assert!(chk.def_pi(m, 5 * m).unwrap().holds);
    let r = chk.verify_lemma37(m, 5 * m).unwrap();
    assert!(r.side1 && r.side2 && r.leading_matches == Some(true));
    // g(n) = (n/m)²g(m) on the progression.
    let gm = chk.g(m);
    assert!(r.fit[0].numer().sign() == num_bigint::Sign::NoSign && r.fit[1].numer().sign() == num_bigint::Sign::NoSign);
    assert_eq!(r.fit[2], num_rational::BigRational::new(gm.into(), ((m * m) as i128).into()));
}

#[test]
fn non_constant_second_difference_is_reported() {
    // With β = 1 every in-range progression is admissible; β = 2^{1/3} is not.
    let f = cube_root_two();
    let theta = AlgebraicReal::theta(&f);
    let g = Arc::new(TheoremA::new(&theta, &theta).unwrap());
    let chk = TheoremAChecker::new(g, 2, BoundProfile::default()).unwrap();
    let (m, h) = (1..=100)
        .flat_map(|m| {
            let l = chk.ell(m).unwrap();
            (3 * m..=l.min(30 * m)).map(move |h| (m, h))
        })
        .find(|&(m, h)| matches!(chk.def_pi(m, h).unwrap().failure, Some(PiFailure::NonConstant(_))))
        .unwrap();
    let Some(PiFailure::NonConstant(at)) = chk.def_pi(m, h).unwrap().failure else { unreachable!() };
    assert_ne!(chk.second_difference(m, at), chk.second_difference(m, m));
    let r = chk.verify_lemma37(m, h).unwrap();
    assert!(!r.side1 && !r.side2);
}

#[test]
fn max_factor_matches_pi_scan() {
    let chk = checker(BoundProfile::default());
    for m in 1..=60 {
        let direct = (3..=40).rev().find(|&t| chk.def_pi(m, t * m).unwrap().holds);
        assert_eq!(chk.max_admissible_factor(m, 40).unwrap(), direct, "m = {m}");
    }
}

#[test]
fn harness_records_are_clean_at_small_scale() {
    let chk = checker(BoundProfile::default());
    let mut all = harness::lemma32(&chk, 10, 100_000, 20_000, 1);
    all.extend(harness::lemma33(&chk, 500, 10));
    all.extend(harness::lemma35_converse(&chk, 100, 30, 20_000, 1));
    all.extend(harness::lemma36(&chk, 4, 60));
    all.extend(harness::lemma37(&chk, 30, 30).unwrap());
    let s = Summary::of(&all);
    assert_eq!(s.violations, 0, "{s:?}");
    let line = all[0].to_line();
    assert!(line.contains("\"verdict\":\"verified-in-range\"") && !line.contains("runtime_ms"));
    assert_eq!(harness::lemma35_converse(&chk, 20, 30, 20_000, 9), harness::lemma35_converse(&chk, 20, 30, 20_000, 9));
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![(0i128..50).prop_map(Term::int), prop::sample::select(vec!["x", "y"]).prop_map(Term::var)];
    leaf.prop_recursive(3, 16, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a + b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a - b),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| a * b),
            inner.prop_map(|a| Term::Neg(Box::new(a))),
        ]
    })
}

fn formula_strategy() -> impl Strategy<Value = Formula> {
    let cmp = prop::sample::select(vec![Cmp::Eq, Cmp::Ne, Cmp::Lt, Cmp::Le, Cmp::Gt, Cmp::Ge]);
    let atom = (cmp, term_strategy(), term_strategy()).prop_map(|(c, a, b)| Formula::cmp(c, a, b));
    atom.prop_recursive(3, 12, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::not),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::And(vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::Or(vec![a, b])),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Formula::implies(a, b)),
            inner.clone().prop_map(|b| Formula::exists("y", Term::int(-2), Term::var("x"), b)),
            inner.prop_map(|b| Formula::forall("y", Term::var("x"), Term::int(3), b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn printing_then_parsing_preserves_meaning(f in formula_strategy(), x in -3i128..4, y in -3i128..4) {
        let text = f.to_string();
        let back = parse_formula(&text).unwrap();
        prop_assert_eq!(back.to_string(), text);
        let v = vec![("x".to_string(), x), ("y".to_string(), y)];
        let st = Structure::new();
        let b = BoundProfile::default();
        prop_assert_eq!(eval_formula(&f, &v, &st, &b).ok(), eval_formula(&back, &v, &st, &b).ok());
    }

    #[test]
    fn widening_mu_span_never_loses_witnesses(n0 in 1i64..40, n1 in 1i64..400) {
        let narrow = checker(BoundProfile { n2_span: 50, ..Default::default() });
        let wide = checker(BoundProfile { n2_span: 500, ..Default::default() });
        if narrow.def_mu(n0, n1).holds {
            prop_assert!(wide.def_mu(n0, n1).holds);
        }
    }

    #[test]
    fn bounded_psi_equals_window(m in 1i64..20_000, big_n in 1i64..20) {
        let chk = checker(BoundProfile::default());
        prop_assert_eq!(chk.def_psi(m, big_n), chk.psi_window(m, big_n));
    }

    #[test]
    fn widening_h_cap_never_loses_delta(n in 1i64..6, np in 1i64..40) {
        let one = checker(BoundProfile { big_h_cap: 1, ..tiny() });
        let three = checker(BoundProfile { big_h_cap: 3, ..tiny() });
        if one.def_delta(n, np).holds {
            prop_assert!(three.def_delta(n, np).holds);
        }
    }
}
