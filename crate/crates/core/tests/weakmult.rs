use std::collections::BTreeSet;
use std::sync::{Arc, OnceLock};

use genpres_core::fo::{BoundProfile, Status, Summary, TheoremAChecker};
use genpres_core::presets::theorem_a_default;
use genpres_core::search::{find_progression_base, SearchBudget};
use genpres_core::weakmult::harness::{self, random_polynomial};
use genpres_core::weakmult::*;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn checker() -> Arc<TheoremAChecker> {
    Arc::new(TheoremAChecker::new(Arc::new(theorem_a_default()), 2, BoundProfile::default()).unwrap())
}

fn poly(src: &str, arity: usize) -> IntPolynomial {
    IntPolynomial::parse(src, Some(arity)).unwrap()
}

fn one() -> Term {
    Term::One
}

fn x(i: usize) -> Term {
    Term::Var(i)
}

fn example_poly() -> IntPolynomial {
    poly("x1*x2 + x2*x2 + 2*x1*x3 + 2*x2*x3 + x1*x1*x3 + 2", 3)
}

/// (x1 + x2) × (x2 + x3 + x3) + (x1 × x1) × x3 + 2
fn example_term() -> Term {
    let left = Term::times(Term::plus(x(1), x(2)), Term::plus(Term::plus(x(2), x(3)), x(3)));
    let mid = Term::times(Term::times(x(1), x(1)), x(3));
    Term::plus(Term::plus(left, mid), Term::plus(one(), one()))
}

/// ⌊2^{1/3}·n⌉ from the cube inequality (2a−1)³ < 16n³ < (2a+1)³.
fn nint_cbrt2(n: i64) -> i128 {
    let t = 16 * (n as i128).pow(3);
    let mut a = ((t as f64).cbrt() / 2.0).round() as i128;
    while (2 * a - 1).pow(3) >= t {
        a -= 1;
    }
    while (2 * a + 1).pow(3) <= t {
        a += 1;
    }
    a
}

fn g_oracle(n: i64) -> i128 {
    n as i128 * nint_cbrt2(n)
}

/// g is a genuine quadratic on {m, 2m, …, tm}, computed from second differences.
fn quadratic_on(m: i64, t: i64) -> bool {
    let d = |j: i64| g_oracle((j + 2) * m) - 2 * g_oracle((j + 1) * m) + g_oracle(j * m);
    let a = d(1);
    a != 0 && (1..=t - 2).all(|j| d(j) == a)
}

#[test]
fn canonical_terms() {
    assert_eq!(poly_to_term(&poly("x1", 1)), x(1));
    assert_eq!(poly_to_term(&IntPolynomial::constant(1, 2)), Term::plus(one(), one()));
    let p = example_poly();
    assert_eq!(term_to_poly(&poly_to_term(&p), 3).unwrap(), p);
}

#[test]
fn expansion_of_terms() {
    assert_eq!(term_to_poly(&example_term(), 3).unwrap(), example_poly());
    assert_eq!(term_to_poly(&one(), 1).unwrap(), IntPolynomial::constant(1, 1));
    assert_eq!(
        term_to_poly(&x(3), 2),
        Err(WeakMultError::ArityMismatch { expected: 2, found: 3 })
    );
}

#[test]
fn families() {
    assert!(family_f(&poly("x1", 1)).is_empty());
    assert!(family_f(&IntPolynomial::constant(1, 1)).is_empty());
    let fam = family_of_term(&example_term(), 3).unwrap();
    let want: BTreeSet<_> = [
        (poly("x1 + x2", 3), poly("x2 + 2*x3", 3)),
        (poly("x1", 3), poly("x1", 3)),
        (poly("x1*x1", 3), poly("x3", 3)),
    ]
    .into_iter()
    .collect();
    assert_eq!(fam.pairs, want);
}

#[test]
fn partial_products() {
    let q = QSet::explicit([(2, 4, 6, 12), (2, 6, 4, 12)].into_iter().collect(), Provenance::Imported, None);
    assert_eq!(q.times_m(2, 4, 6).unwrap(), Some(12));
    assert_eq!(q.times_m(2, 6, 4).unwrap(), Some(12));
    assert_eq!(q.times_m(4, 2, 3).unwrap(), None);
    assert_eq!(q.times_m(0, 2, 3), Err(WeakMultError::ZeroModulus));
}

#[test]
fn multiplication_free_terms() {
    let q = QSet::empty();
    // Without constants the partial evaluation is ordinary evaluation.
    let t = Term::minus(Term::plus(x(1), x(2)), x(1));
    for args in [[3, -7], [0, 5], [-2, -2]] {
        assert_eq!(eval_term_m(&t, 5, &args, &q).unwrap(), t.eval(&args));
    }
    // The constant reads as m, so t_m(m·n⃗) = m·t(n⃗).
    let t = Term::plus(Term::plus(x(1), one()), one());
    for m in [-3, 1, 7] {
        assert_eq!(eval_term_m(&t, m, &[4 * m], &q).unwrap(), Some(m * 6));
    }
    assert_eq!(eval_term_m(&t, 0, &[1], &q), Err(WeakMultError::ZeroModulus));
    assert!(matches!(eval_term_m(&x(2), 1, &[1], &q), Err(WeakMultError::ArityMismatch { .. })));
}

#[test]
fn undefined_products_propagate() {
    let q = QSet::synthetic(5, 2);
    let t = Term::plus(Term::times(x(1), x(1)), one());
    assert_eq!(eval_term_m(&t, 2, &[4], &q).unwrap(), Some(2 * 5));
    assert_eq!(eval_term_m(&t, 2, &[6], &q).unwrap(), None);
    assert_eq!(eval_term_m(&t, 2, &[3], &q).unwrap(), None);
}

#[test]
fn lemma22_contract_on_rule_based_q() {
    for (k_max, seed) in [(1_000_000, 1), (6, 2)] {
        let recs = harness::lemma22(500, 20, 12, k_max, seed).unwrap();
        let s = Summary::of(&recs);
        assert_eq!((s.instances, s.violations), (500, 0));
        let held: u64 = recs.iter().map(|r| r.witness.as_ref().unwrap()["domain_held"].as_u64().unwrap()).sum();
        assert!(held > 0);
    }
}

#[test]
fn build_q_small() {
    let chk = checker();
    assert!(build_q(&chk, 0, 40).unwrap().is_empty());
    let q = build_q(&chk, 40, 40).unwrap();
    assert!(!q.is_empty());
    assert!(q.check_q1().passed());
    assert!(q.iter().all(|(m, a, b, c)| m * c == a * b));
}

#[test]
fn build_q_matches_quadratic_progressions() {
    let chk = checker();
    let q = build_q(&chk, 40, 40).unwrap();
    for m in 1..=40i64 {
        let ell = chk.ell(m).unwrap();
        for k in 1..=40i128 {
            for l in 1..=40 / k {
                let t = (k * l + 1).max(3) as i64;
                let want = t <= 40 && t * m <= ell && quadratic_on(m, t);
                let mi = m as i128;
                assert_eq!(q.contains(&(mi, k * mi, l * mi, k * l * mi)), want, "m={m} k={k} l={l}");
            }
        }
    }
    let recs = harness::q_closed_form(&chk, &q, 40, 40).unwrap();
    assert_eq!(Summary::of(&recs).violations, 0);
}

#[test]
fn build_q_contains_progression_base_quadruples() {
    let chk = checker();
    let m = find_progression_base(6, chk.sequence(), &SearchBudget::hybrid(1_000_000)).unwrap().m;
    assert!(chk.def_pi(m, 7 * m).unwrap().holds && chk.def_pi(m, 5 * m).unwrap().holds);
    let q = build_q(&chk, m, 7).unwrap();
    let mi = m as i128;
    assert!(q.contains(&(mi, mi, 2 * mi, 2 * mi)));
    assert!(q.contains(&(mi, 2 * mi, 2 * mi, 4 * mi)));
}

#[test]
fn sign_closure() {
    let q = QSet::explicit([(2, 4, 6, 12)].into_iter().collect(), Provenance::Imported, None);
    let c = q.close_pm();
    let want: BTreeSet<Quad> = [(2, 4, 6, 12), (2, -4, 6, -12), (2, 4, -6, -12), (2, -4, -6, 12)].into_iter().collect();
    assert_eq!(c.iter().collect::<BTreeSet<_>>(), want);
    assert_eq!(c.close_pm(), c);
    let g = build_q(&checker(), 40, 40).unwrap().close_pm();
    assert!(g.check_q1().passed());
    assert_eq!(g.close_pm(), g);
}

#[test]
fn axiom_checks() {
    let q = build_q(&checker(), 40, 40).unwrap();
    let m = q.check_q2(&[(1, 1)]).unwrap();
    assert!(q.contains(&(m, m, m, m)));
    let f: Vec<(i128, i128)> = (1..=4).flat_map(|k| (1..=4).map(move |l| (k, l))).collect();
    let m = q.check_q2(&f).unwrap();
    assert!(f.iter().all(|&(k, l)| q.contains(&(m, k * m, l * m, k * l * m))));
    assert!(q.moduli().into_iter().filter(|&n| n < m).all(|n| !f.iter().all(|&(k, l)| q.contains(&(n, k * n, l * n, k * l * n)))));
    assert_eq!(q.check_q2(&[(100, 100)]), None);

    let bad = QSet::from_csv("2,4,6,12\n3,3,4,5\n").unwrap();
    let r = bad.check_q1();
    assert_eq!((r.checked, r.violations), (2, vec![(3, 3, 4, 5)]));
    assert_eq!(harness::q1(&bad).status, Status::Violation);
}

#[test]
fn csv_round_trip() {
    let q = build_q(&checker(), 20, 20).unwrap();
    let text = q.to_csv();
    let back = QSet::from_csv(&text).unwrap();
    assert_eq!(back.to_csv(), text);
    assert_eq!(back.provenance, Provenance::Imported);
    let lines: Vec<&str> = text.lines().collect();
    let mut sorted = lines.clone();
    sorted.sort_by_key(|l| l.split(',').map(|v| v.parse::<i128>().unwrap()).collect::<Vec<_>>());
    assert_eq!(lines, sorted);
    assert!(matches!(QSet::from_csv("1,2,3\n"), Err(WeakMultError::Csv { line: 1, .. })));
    assert!(matches!(QSet::from_csv("1,1,1,1\n1,a,1,1\n"), Err(WeakMultError::Csv { line: 2, .. })));
}

#[test]
fn compiled_sentences() {
    let q = Arc::new(build_q(&checker(), 30, 40).unwrap().close_pm());
    let b = CompileBounds::default();
    let c = compile_solvability(&poly("x1 - 2", 1), &b);
    assert_eq!(c.products, 0);
    assert!(sentence_variables(&c).contains("y1"));
    assert!(c.sentence.free_vars().is_empty());

    match check_solvability(&poly("x1 - 2", 1), q.clone(), &b).unwrap() {
        Solvability::Found { n, verified, .. } => assert!(verified && n == vec![2]),
        s => panic!("{s:?}"),
    }
    for (src, arity) in [("x1*x2 - 6", 2), ("x1*x1 + x2*x2 - x3*x3", 3)] {
        let p = poly(src, arity);
        match check_solvability(&p, q.clone(), &b).unwrap() {
            Solvability::Found { m, y, n, verified } => {
                assert!(verified);
                assert_eq!(p.eval(&n), Some(0));
                assert!(y.iter().zip(&n).all(|(&yi, &ni)| yi == m * ni));
            }
            s => panic!("{src}: {s:?}"),
        }
    }
    assert_eq!(check_solvability(&poly("x1*x1 - 2", 1), q, &b).unwrap(), Solvability::NotFound);
}

#[test]
fn compiled_sentence_text_parses_back() {
    let c = compile_solvability(&poly("x1*x2 - 6", 2), &CompileBounds::default());
    assert_eq!(c.products, 1);
    let text = c.sentence.to_string();
    assert_eq!(genpres_core::fo::parse_formula(&text).unwrap().to_string(), text);
}

fn generated_q() -> &'static QSet {
    static Q: OnceLock<QSet> = OnceLock::new();
    Q.get_or_init(|| build_q(&checker(), 30, 40).unwrap().close_pm())
}

fn small_poly() -> impl Strategy<Value = IntPolynomial> {
    any::<u64>().prop_map(|s| random_polynomial(&mut ChaCha8Rng::seed_from_u64(s), 3, 3, 5))
}

fn term_strategy() -> impl Strategy<Value = Term> {
    let leaf = prop_oneof![Just(Term::One), (1usize..=3).prop_map(Term::Var)];
    leaf.prop_recursive(4, 24, 2, |inner| {
        prop_oneof![
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::plus(a, b)),
            (inner.clone(), inner.clone()).prop_map(|(a, b)| Term::minus(a, b)),
            (inner.clone(), inner).prop_map(|(a, b)| Term::times(a, b)),
        ]
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn round_trip(p in small_poly()) {
        prop_assert_eq!(term_to_poly(&poly_to_term(&p), p.arity()).unwrap(), p.clone());
        prop_assert_eq!(IntPolynomial::parse(&p.to_string(), Some(p.arity())).unwrap(), p);
    }

    #[test]
    fn term_evaluation_matches_expansion(t in term_strategy(), n in prop::collection::vec(-5i128..=5, 3)) {
        prop_assert_eq!(t.eval(&n), term_to_poly(&t, 3).unwrap().eval(&n));
    }

    #[test]
    fn partial_product_laws(m in 1i128..=6, a in -8i128..=8, b in -8i128..=8, c in -8i128..=8) {
        let q = QSet::synthetic(6, 8);
        let (a, b, c) = (a * m, b * m, c * m);
        let t = |x: i128, y: i128| q.times_m(m, x, y).unwrap();
        if let (Some(u), Some(v)) = (t(a, b), t(b, a)) {
            prop_assert_eq!(u, v);
        }
        if let (Some(ab), Some(bc)) = (t(a, b), t(b, c)) {
            if let (Some(l), Some(r)) = (t(ab, c), t(a, bc)) {
                prop_assert_eq!(l, r);
            }
        }
        if let (Some(s), Some(ac), Some(bc)) = (t(a + b, c), t(a, c), t(b, c)) {
            prop_assert_eq!(s, ac + bc);
        }
    }

    #[test]
    fn lemma22_on_generated_q(p in small_poly(), m in 1i128..=30, n in prop::collection::vec(-3i128..=3, 3)) {
        let q = generated_q();
        let n = &n[..p.arity()];
        let fam = family_f(&p);
        if fam.domain_holds(q, m, n).unwrap() == Some(true) {
            let y: Vec<i128> = n.iter().map(|v| v * m).collect();
            prop_assert_eq!(eval_term_m(&poly_to_term(&p), m, &y, q).unwrap(), Some(m * p.eval(n).unwrap()));
        }
    }
}
