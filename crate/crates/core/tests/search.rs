use genpres_core::numeric::{AlgebraicReal, FracMul, Threshold};
use genpres_core::presets::{cube_root_two, sqrt_two, theorem_a_default};
use genpres_core::search::{
    calibrate_c, continued_fraction, convergent_denominators, equidist_check, find_lemma32_witness,
    find_progression_base, find_small_norm, find_weyl_witness, pair_condition_holds, SearchBudget, SearchError,
    WeylTarget,
};
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ints(v: &[i64]) -> Vec<BigInt> {
    v.iter().map(|&x| BigInt::from(x)).collect()
}

fn norm_f64(x: f64) -> f64 {
    (x - x.round()).abs()
}

// g(n) = n·⌊2^{1/3} n⌉ in f64, exact for the small n used here.
fn g_oracle(n: i64) -> i128 {
    n as i128 * (2f64.cbrt() * n as f64 + 0.5).floor() as i128
}

fn d2_oracle(a: i64, b: i64, c: i64) -> i128 {
    g_oracle(a + b + c) - g_oracle(a + b) - g_oracle(a + c) - g_oracle(b + c) + g_oracle(a) + g_oracle(b) + g_oracle(c)
}

#[test]
fn continued_fraction_examples() {
    let s = AlgebraicReal::theta(&sqrt_two());
    assert_eq!(continued_fraction(&s, 6).unwrap().quotients, ints(&[1, 2, 2, 2, 2, 2]));
    let c = AlgebraicReal::theta(&cube_root_two());
    let e = continued_fraction(&c, 6).unwrap();
    assert_eq!(e.quotients, ints(&[1, 3, 1, 5, 1, 1]));
    assert!(!e.terminated);
    let q = AlgebraicReal::from_rational(&sqrt_two(), r(7, 3));
    let e = continued_fraction(&q, 5).unwrap();
    assert_eq!(e.quotients, ints(&[2, 3]));
    assert!(e.terminated);
    assert!(continued_fraction(&s, 0).is_err());
}

#[test]
fn convergent_denominators_are_good_approximations() {
    for x in [AlgebraicReal::theta(&sqrt_two()), AlgebraicReal::theta(&cube_root_two())] {
        let fm = FracMul::new(&x).unwrap();
        let qs = convergent_denominators(&x, 1_000_000_000);
        assert!(qs.len() > 5);
        assert!(qs.windows(2).all(|w| w[0] < w[1]));
        for q in qs {
            let bound = Threshold::new(AlgebraicReal::from_rational(x.field(), r(1, q as i64)));
            assert!(fm.norm_lt(q as i128, &bound), "q = {q}");
        }
    }
}

#[test]
fn small_norm_examples() {
    let s = AlgebraicReal::theta(&sqrt_two());
    assert_eq!(find_small_norm(&s, &r(1, 10), &SearchBudget::exhaustive(100)).unwrap().m, 5);
    assert_eq!(find_small_norm(&s, &r(1, 2), &SearchBudget::exhaustive(100)).unwrap().m, 1);
    assert_eq!(
        find_small_norm(&s, &r(1, 1_000_000_000), &SearchBudget::exhaustive(10)).unwrap_err(),
        SearchError::NotFoundWithinBudget
    );
    let w = find_small_norm(&s, &r(1, 1000), &SearchBudget::hybrid(100_000)).unwrap();
    assert!(w.get("norm(x*m)").unwrap().cmp_rational(&r(1, 1000)).is_lt());
    assert!(find_small_norm(&s, &r(0, 1), &SearchBudget::exhaustive(10)).is_err());
}

#[test]
fn progression_base_examples() {
    let g = theorem_a_default();
    // Smallest m with ‖2^{1/3} m‖ < 1/4 (the β-condition is automatic for β = 1).
    let want = (1..).find(|&m| norm_f64(2f64.cbrt() * m as f64) < 0.25).unwrap();
    let w = find_progression_base(2, &g, &SearchBudget::exhaustive(1000)).unwrap();
    assert_eq!(w.m, want);
    assert_eq!(find_progression_base(2, &g, &SearchBudget::exhaustive(1)).unwrap_err(), SearchError::NotFoundWithinBudget);
    assert!(find_progression_base(1, &g, &SearchBudget::exhaustive(10)).is_err());
    for rr in 2..=5 {
        let w = find_progression_base(rr, &g, &SearchBudget::hybrid(10_000_000)).unwrap();
        assert!(norm_f64(2f64.cbrt() * w.m as f64) < 1.0 / (2.0 * rr as f64));
    }
}

#[test]
fn lemma32_witness_examples() {
    let g = theorem_a_default();
    let c = 2;
    let (n0, n1) = (2..40)
        .flat_map(|a| (c * a..c * a + 40).map(move |b| (a, b)))
        .find(|&(a, b)| pair_condition_holds(&g, a, b))
        .unwrap();
    let n2 = find_lemma32_witness(&g, n0, n1, c, &SearchBudget::exhaustive(1_000_000)).unwrap();
    assert!(n2 >= c * n1);
    assert_eq!(d2_oracle(n0, n1, n2), 0);
    assert!((c * n1..n2).all(|m| d2_oracle(n0, n1, m) != 0));
    let bad = (2..40)
        .flat_map(|a| (c * a..c * a + 40).map(move |b| (a, b)))
        .find(|&(a, b)| !pair_condition_holds(&g, a, b))
        .unwrap();
    assert!(matches!(
        find_lemma32_witness(&g, bad.0, bad.1, c, &SearchBudget::exhaustive(1000)),
        Err(SearchError::PreconditionViolated(_))
    ));
}

#[test]
fn weyl_examples() {
    let f = sqrt_two();
    let a = AlgebraicReal::theta(&f);
    assert_eq!(find_weyl_witness(&[], 1, &SearchBudget::exhaustive(10)).unwrap(), 1);
    let t1 = WeylTarget::monomial(&a, 1, r(1, 10), r(2, 10)).unwrap();
    let t2 = WeylTarget::monomial(&a, 1, r(3, 10), r(4, 10)).unwrap();
    assert_eq!(
        find_weyl_witness(&[t1, t2], 1, &SearchBudget::exhaustive(100_000)).unwrap_err(),
        SearchError::NotFoundWithinBudget
    );
    // ⦃αn²⦄ ∈ (ρ − ε, ρ) and ⦃2αn⦄ ∈ (0, ε/8m) with ρ = 1/5, ε = 1/20, m = 3.
    let targets = [
        WeylTarget::monomial(&a, 2, r(3, 20), r(1, 5)).unwrap(),
        WeylTarget::monomial(&a.mul_int(2), 1, r(0, 1), r(1, 480)).unwrap(),
    ];
    let n = find_weyl_witness(&targets, 1, &SearchBudget::exhaustive(10_000_000)).unwrap();
    assert!(targets.iter().all(|t| t.holds(n)));
    let s = std::f64::consts::SQRT_2;
    let brute = (1..).find(|&k: &i64| {
        let x = s * (k * k) as f64;
        let y = 2.0 * s * k as f64;
        let fx = x - x.round();
        let fy = y - y.round();
        fx > 0.15 && fx < 0.2 && fy > 0.0 && fy < 1.0 / 480.0
    });
    assert_eq!(Some(n), brute);
    assert!(WeylTarget::monomial(&a, 1, r(0, 1), r(1, 1)).is_err());
}

#[test]
fn equidist_preconditions_and_counts() {
    let a = AlgebraicReal::theta(&cube_root_two());
    assert!(matches!(equidist_check(&a, 0, 1, 1, 0, 10, 10, 4, 1), Err(SearchError::PreconditionViolated(_))));
    assert_eq!(equidist_check(&a, 2, 2, 1, 1, 10, 10, 4, 1).unwrap_err(), SearchError::ThetaRational);
    let rep = equidist_check(&a, 1, 2, 3, 1, 20_000, 50_000, 10, 7).unwrap();
    assert_eq!(rep.orbit_hist.iter().sum::<u64>(), 20_000);
    assert_eq!(rep.push_hist.iter().sum::<u64>(), 50_000);
    assert!(rep.sup_cell_discrepancy >= 0.0 && rep.anchored_box_discrepancy >= 0.0);
    assert!(rep.near_origin_fraction > 0.0);
    let again = equidist_check(&a, 1, 2, 3, 1, 20_000, 50_000, 10, 7).unwrap();
    assert_eq!(rep.push_hist, again.push_hist);
}

#[test]
fn calibration_rejects_empty_sample() {
    assert!(matches!(calibrate_c(&theorem_a_default(), 0, 1), Err(SearchError::InvalidArgument(_))));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn exhaustive_small_norm_is_minimal(k in 3i64..400) {
        let s = AlgebraicReal::theta(&sqrt_two());
        let w = find_small_norm(&s, &r(1, k), &SearchBudget::exhaustive(1_000_000)).unwrap();
        let eps = 1.0 / k as f64;
        for m in 1..w.m {
            prop_assert!(norm_f64(std::f64::consts::SQRT_2 * m as f64) >= eps - 1e-12);
        }
        prop_assert!(w.get("norm(x*m)").unwrap().cmp_rational(&r(1, k)).is_lt());
    }

    #[test]
    fn weyl_witnesses_reverify(lo in 0i64..90, width in 1i64..10, deg in 1u32..3) {
        let a = AlgebraicReal::theta(&cube_root_two());
        let t = WeylTarget::monomial(&a, deg, r(lo - 50, 100), r(lo - 50 + width, 100)).unwrap();
        let n = find_weyl_witness(std::slice::from_ref(&t), 1, &SearchBudget::exhaustive(100_000)).unwrap();
        prop_assert!(t.holds(n));
        prop_assert!((1..n).all(|m| !t.holds(m)));
    }
}
