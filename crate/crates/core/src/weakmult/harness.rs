//! Bounded checks for weak multiplication, emitting report records.

use std::collections::HashMap;
use std::sync::Arc;

use rand::Rng;
use serde_json::json;

use super::compile::{check_solvability, CompileBounds, Solvability};
use super::poly::IntPolynomial;
use super::qset::{Quad, QSet};
use super::term::{eval_term_m, family_f, poly_to_term, term_to_poly};
use super::WeakMultError;
use crate::fo::harness::{rng, status, verdict};
use crate::fo::{FoError, Record, Status, TheoremAChecker, Verdict};

/// Random polynomial with 1..=`max_arity` variables, total degree ≤ `max_degree`
/// and coefficients in [−`max_coeff`, `max_coeff`].
pub fn random_polynomial<R: Rng>(rng: &mut R, max_arity: usize, max_degree: u32, max_coeff: i128) -> IntPolynomial {
    let arity = rng.gen_range(1..=max_arity);
    let terms = rng.gen_range(1..=6);
    IntPolynomial::from_terms(
        arity,
        (0..terms).map(|_| {
            let mut budget = rng.gen_range(0..=max_degree);
            let mut e = vec![0u32; arity];
            while budget > 0 {
                e[rng.gen_range(0..arity)] += 1;
                budget -= 1;
            }
            (e, rng.gen_range(-max_coeff..=max_coeff))
        }),
    )
}

/// Term round trip and t_m(m·n⃗) = m·p(n⃗) under the F(p) domain condition,
/// over `samples` random polynomials and a rule-based Q; one record per polynomial.
pub fn lemma22(samples: usize, points: usize, m_max: i64, k_max: i64, seed: u64) -> Result<Vec<Record>, WeakMultError> {
    let caps = json!({ "arity": 3, "degree": 3, "coeff": 5, "arg": 5, "m_max": m_max, "k_max": k_max });
    let q = QSet::synthetic(m_max, k_max);
    let mut rng = rng(seed, 22);
    let mut out = Vec::with_capacity(samples);
    for _ in 0..samples {
        let p = random_polynomial(&mut rng, 3, 3, 5);
        let t = poly_to_term(&p);
        let fam = family_f(&p);
        let round_trip = term_to_poly(&t, p.arity())? == p;
        let (mut held, mut overflow, mut bad) = (0usize, 0usize, Vec::new());
        for _ in 0..points {
            let n: Vec<i128> = (0..p.arity()).map(|_| rng.gen_range(-5..=5)).collect();
            let m = rng.gen_range(1..=m_max as i128);
            if t.eval(&n) != p.eval(&n) {
                bad.push(json!({ "m": m, "n": n, "kind": "ordinary-evaluation" }));
            }
            match fam.domain_holds(&q, m, &n)? {
                None => overflow += 1,
                Some(false) => {}
                Some(true) => {
                    held += 1;
                    let y: Vec<i128> = n.iter().map(|v| v * m).collect();
                    let got = eval_term_m(&t, m, &y, &q)?;
                    let want = p.eval(&n).and_then(|v| v.checked_mul(m));
                    if got.is_none() || got != want {
                        bad.push(json!({ "m": m, "n": n, "got": got, "want": want }));
                    }
                }
            }
        }
        let ok = round_trip && bad.is_empty();
        out.push(
            Record::new("2.2", json!({ "p": p.to_string(), "arity": p.arity() }), verdict(ok), status(ok), caps.clone())
                .with_witness(json!({
                    "round_trip": round_trip,
                    "family_size": fam.len(),
                    "points": points,
                    "domain_held": held,
                    "overflow": overflow,
                    "violations": bad,
                })),
        );
    }
    Ok(out)
}

fn q_caps(q: &QSet) -> serde_json::Value {
    json!({ "bounds": q.bounds, "provenance": q.provenance })
}

/// Exhaustive Q1 check, plus the count of quadruples whose swap (m, b, a, c) is absent.
pub fn q1(q: &QSet) -> Record {
    let r = q.check_q1();
    let asymmetric = q.iter().filter(|&(m, a, b, c)| !q.contains(&(m, b, a, c))).count();
    let ok = r.passed();
    Record::new("Q1", json!({ "set": "Q", "size": q.len() }), verdict(ok), status(ok), q_caps(q)).with_witness(json!({
        "checked": r.checked,
        "violations": r.violations.iter().take(5).collect::<Vec<_>>(),
        "violation_count": r.violations.len(),
        "asymmetric": asymmetric,
    }))
}

/// Q1 on the sign closure and idempotence of the closure.
pub fn q1_closure(q: &QSet) -> Record {
    let c = q.close_pm();
    let r = c.check_q1();
    let idempotent = c.close_pm() == c;
    let ok = r.passed() && idempotent;
    Record::new("Q1", json!({ "set": "Q±", "size": c.len() }), verdict(ok), status(ok), q_caps(q)).with_witness(
        json!({
            "checked": r.checked,
            "violation_count": r.violations.len(),
            "idempotent": idempotent,
        }),
    )
}

/// Smallest modulus covering F = {1..k_max}².
pub fn q2(q: &QSet, k_max: i128) -> Record {
    let f: Vec<(i128, i128)> = (1..=k_max).flat_map(|k| (1..=k_max).map(move |l| (k, l))).collect();
    let m = q.check_q2(&f);
    let instance = json!({ "family": format!("{{1..{k_max}}}^2"), "size": f.len() });
    match m {
        Some(m) => Record::new("Q2", instance, Verdict::VerifiedInRange, Status::Pass, q_caps(q))
            .with_witness(json!({ "m": m })),
        None => Record::new("Q2", instance, Verdict::RefutedInRange, Status::Violation, q_caps(q)),
    }
}

/// The quadruples of Q with modulus m are exactly (m, km, lm, klm) with
/// k, l ≥ 1 and π(m, max(3, kl+1)·m), π taken from its definition.
pub fn q_closed_form(chk: &TheoremAChecker, q: &QSet, m_max: i64, h_factor_max: i64) -> Result<Vec<Record>, FoError> {
    let caps = json!({ "m_max": m_max, "h_factor_max": h_factor_max });
    let mut per_m: HashMap<i128, usize> = HashMap::new();
    for (m, ..) in q.iter() {
        *per_m.entry(m).or_default() += 1;
    }
    let (mut checked, mut missing, mut count_mismatch): (usize, Vec<Quad>, Vec<i64>) = (0, Vec::new(), Vec::new());
    for m in 1..=m_max {
        // π(m, tm) for 3 ≤ t ≤ t_top, stopping at the first failure.
        let mut t_top = 2;
        while t_top < h_factor_max && chk.def_pi(m, (t_top + 1) * m)?.holds {
            t_top += 1;
        }
        let mut expected = 0usize;
        if t_top >= 3 {
            for k in 1..t_top as i128 {
                for l in 1..=((t_top as i128 - 1) / k) {
                    let mi = m as i128;
                    let quad = (mi, k * mi, l * mi, k * l * mi);
                    expected += 1;
                    checked += 1;
                    if !q.contains(&quad) {
                        missing.push(quad);
                    }
                }
            }
        }
        if per_m.get(&(m as i128)).copied().unwrap_or(0) != expected {
            count_mismatch.push(m);
        }
    }
    let ok = missing.is_empty() && count_mismatch.is_empty();
    Ok(vec![Record::new("Q", json!({ "check": "closed-form", "m_max": m_max }), verdict(ok), status(ok), caps)
        .with_witness(json!({
            "checked": checked,
            "missing": missing.iter().take(5).collect::<Vec<_>>(),
            "count_mismatch": count_mismatch.iter().take(5).collect::<Vec<_>>(),
        }))])
}

/// Bounded solvability checks. A verified witness passes, an unverifiable one
/// is a violation, and "not found" is excluded, never read as unsolvable.
pub fn compile_checks(q: Arc<QSet>, polys: &[&str], bounds: &CompileBounds) -> Result<Vec<Record>, WeakMultError> {
    let caps = json!({ "bounds": bounds, "q": q_caps(&q) });
    let mut out = Vec::new();
    for src in polys {
        let p = IntPolynomial::parse(src, None)?;
        let instance = json!({ "p": p.to_string() });
        let rec = match check_solvability(&p, q.clone(), bounds)? {
            s @ Solvability::Found { verified, .. } => {
                Record::new("2.1", instance, verdict(verified), status(verified), caps.clone())
                    .with_witness(serde_json::to_value(&s).expect("witness serialises"))
            }
            Solvability::NotFound => {
                Record::new("2.1", instance, Verdict::CapExhausted, Status::Excluded, caps.clone())
                    .with_witness(json!({ "result": "not-found" }))
            }
        };
        out.push(rec);
    }
    Ok(out)
}
