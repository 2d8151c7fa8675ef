//! Bounded checks for the Bohr-set sequence, emitting report records.
//!
//! The ε–N correspondences here are non-effective, so thresholds are either
//! the explicit surrogates δ/10N, δ/10 or empirical, and each record says which.
//! Nested properties κ, ν, δ are reported for information only.

use std::cmp::Ordering;

use serde_json::{json, Value};

use super::{approx, BohrChecker, BohrError, NestedOutcome};
use crate::fo::harness::{status, verdict};
use crate::fo::{Record, Status, Verdict};
use crate::numeric::AlgebraicReal;

fn bounds_json(chk: &BohrChecker) -> Value {
    serde_json::to_value(chk.bounds()).expect("bounds serialise")
}

fn max_exact(it: impl Iterator<Item = AlgebraicReal>) -> Option<AlgebraicReal> {
    it.fold(None, |best: Option<AlgebraicReal>, x| match best {
        Some(b) if b.cmp_value(&x) != Ordering::Less => Some(b),
        _ => Some(x),
    })
}

fn le_opt(a: &Option<AlgebraicReal>, b: &Option<AlgebraicReal>) -> bool {
    match (a, b) {
        (None, _) => true,
        (Some(_), None) => false,
        (Some(x), Some(y)) => x.cmp_value(y) != Ordering::Greater,
    }
}

/// μ(m, N) for every m ≤ `m_max` meeting ‖2αm‖ < δ/10N and ‖αm²‖ < δ/10.
/// The premise count is reported; zero premises make the check vacuous.
pub fn lemma41_converse(chk: &BohrChecker, big_n: i64, m_max: i64) -> Result<Record, BohrError> {
    let (e1, e2) = chk.mu_premise(big_n)?;
    let delta = chk.delta_threshold(big_n)?;
    let premises: Vec<i64> = (1..=m_max)
        .filter(|&m| chk.alpha().norm_lt(2 * m as i128, &e1) && chk.alpha().norm_lt((m as i128) * (m as i128), &e2))
        .collect();
    let violations: Vec<i64> = premises.iter().copied().filter(|&m| !chk.mu_unchecked(m, big_n)).collect();
    let ok = violations.is_empty();
    let v = if ok && premises.is_empty() { Verdict::CapExhausted } else { verdict(ok) };
    Ok(Record::new(
        "4.1",
        json!({ "direction": "converse", "N": big_n }),
        v,
        status(ok),
        json!({ "m_max": m_max, "thresholds": "surrogate delta/10N, delta/10" }),
    )
    .with_witness(json!({
        "delta": approx(&delta),
        "premise_count": premises.len(),
        "premises": premises.iter().take(10).collect::<Vec<_>>(),
        "violations": violations,
    })))
}

/// Exact maxima of ‖2αm‖ and ‖αm²‖ over {m ≤ `m_max` : μ(m, N)} for each N,
/// and whether both are non-increasing along `ns`.
pub fn lemma41_forward(chk: &BohrChecker, ns: &[i64], m_max: i64) -> Vec<Record> {
    let caps = json!({ "m_max": m_max, "thresholds": "empirical" });
    let mut out = Vec::new();
    let mut prev: Option<(Option<AlgebraicReal>, Option<AlgebraicReal>)> = None;
    let mut trend = true;
    let mut rows = Vec::new();
    for &n in ns {
        let set = chk.mu_set(n, m_max);
        let a = max_exact(set.iter().map(|&m| chk.norm_2am(m)));
        let b = max_exact(set.iter().map(|&m| chk.norm_am2(m)));
        let step = prev.as_ref().is_none_or(|(pa, pb)| le_opt(&a, pa) && le_opt(&b, pb));
        trend &= step;
        rows.push(json!({
            "N": n,
            "count": set.len(),
            "first": set.iter().take(5).collect::<Vec<_>>(),
            "max_norm_2am": a.as_ref().map(approx),
            "max_norm_am2": b.as_ref().map(approx),
            "non_increasing": step,
        }));
        prev = Some((a, b));
    }
    out.push(
        Record::new("4.1", json!({ "direction": "forward", "N": ns }), verdict(trend), status(trend), caps)
            .with_witness(json!({ "rows": rows })),
    );
    out
}

/// Max ‖2αm‖ over {m ≤ `m_max` : λ(m, N)} for each N, required non-increasing.
pub fn lemma42_forward(chk: &BohrChecker, ns: &[i64], m_max: i64) -> Vec<Record> {
    let caps = json!({ "m_max": m_max, "n_cap": chk.bounds().n_cap, "thresholds": "empirical" });
    let mut prev: Option<Option<AlgebraicReal>> = None;
    let mut trend = true;
    let mut rows = Vec::new();
    for &n in ns {
        let set: Vec<i64> = (1..=m_max).filter(|&m| chk.lambda_unchecked(m, n).is_some()).collect();
        let a = max_exact(set.iter().map(|&m| chk.norm_2am(m)));
        let step = prev.as_ref().is_none_or(|p| le_opt(&a, p));
        trend &= step;
        rows.push(json!({
            "N": n,
            "count": set.len(),
            "max_norm_2am": a.as_ref().map(approx),
            "non_increasing": step,
        }));
        prev = Some(a);
    }
    vec![Record::new("4.2", json!({ "direction": "forward", "N": ns }), verdict(trend), status(trend), caps)
        .with_witness(json!({ "rows": rows }))]
}

/// For the `count` values m ≤ `m_max` with smallest ‖2αm‖, a λ(m, N) witness
/// from the equidistribution search, verified exactly. Not found is excluded.
pub fn lemma42_converse(
    chk: &BohrChecker,
    ns: &[i64],
    m_max: i64,
    count: usize,
    tries: usize,
    finest: u32,
) -> Result<Vec<Record>, BohrError> {
    let mut pool: Vec<(f64, i64)> = (1..=m_max).map(|m| (chk.alpha().frac_signed_f64(2 * m as i128).abs(), m)).collect();
    pool.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let caps = json!({ "m_max": m_max, "tries": tries, "finest_scale": finest, "budget": chk.bounds().search_budget });
    let mut out = Vec::new();
    for &(_, m) in pool.iter().take(count) {
        for &n in ns {
            let inst = json!({ "direction": "converse", "m": m, "N": n, "norm_2am": approx(&chk.norm_2am(m)) });
            out.push(match chk.lambda_witness(m, n, tries, finest)? {
                Some(w) => {
                    let ok = chk.mu_unchecked(w, n) && chk.mu_unchecked(w + m, n);
                    Record::new("4.2", inst, verdict(ok), status(ok), caps.clone()).with_witness(json!({ "n": w }))
                }
                None => Record::new("4.2", inst, Verdict::CapExhausted, Status::Excluded, caps.clone()),
            });
        }
    }
    Ok(out)
}

fn informational(lemma: &str, instance: Value, o: &NestedOutcome, caps: &Value, measure_name: &str) -> Record {
    let mut w = json!({ "informational": true, "value": o.value, "witness": o.witness });
    w[measure_name] = json!(o.measure);
    Record::new(lemma, instance, o.verdict, Status::Excluded, caps.clone()).with_witness(w)
}

/// Bounded κ(m, N) alongside the exact ‖αm²‖.
pub fn lemma43(chk: &BohrChecker, ms: &[i64], ns: &[i64]) -> Result<Vec<Record>, BohrError> {
    let caps = bounds_json(chk);
    let mut out = Vec::new();
    for &m in ms {
        for &n in ns {
            let o = chk.kappa(m, n)?;
            out.push(informational("4.3", json!({ "m": m, "N": n }), &o, &caps, "norm_am2"));
        }
    }
    Ok(out)
}

/// Bounded ν(m, m̃, N) alongside the exact ‖α(m² − m̃²)‖.
pub fn lemma44(chk: &BohrChecker, pairs: &[(i64, i64)], ns: &[i64]) -> Result<Vec<Record>, BohrError> {
    let caps = bounds_json(chk);
    let mut out = Vec::new();
    for &(m, mt) in pairs {
        for &n in ns {
            let o = chk.nu(m, mt, n)?;
            out.push(informational("4.4", json!({ "m": m, "m_tilde": mt, "N": n }), &o, &caps, "norm_diff_squares"));
        }
    }
    Ok(out)
}

/// Divisibility-sequence verdict against m | m̃ for all 1 ≤ m, m̃ ≤ `max`;
/// non-divisible tails must lie within `tolerance` of ‖1/b‖.
pub fn lemma45(chk: &BohrChecker, max: i64, tolerance: f64) -> Result<Vec<Record>, BohrError> {
    let caps = json!({ "max": max, "seq_len": chk.bounds().seq_len, "tolerance": tolerance });
    let mut out = Vec::new();
    for m in 1..=max {
        for mt in 1..=max {
            let r = chk.divisibility_sequence_check(m, mt)?;
            let ok = r.agrees() && (r.divides || r.tail_error <= tolerance);
            out.push(
                Record::new("4.5", json!({ "m": m, "m_tilde": mt, "divides": r.divides }), verdict(ok), status(ok), caps.clone())
                    .with_witness(json!({
                        "b": r.b,
                        "tail_max": r.tail_max,
                        "target": r.target,
                        "tail_error": r.tail_error,
                        "tail_to_zero": r.tail_to_zero,
                        "schedule_holds": r.schedule_holds,
                        "n": r.terms.iter().map(|t| t.n).collect::<Vec<_>>(),
                    })),
            );
        }
    }
    Ok(out)
}

/// Bounded δ(m, m̃) for the given pairs, for information.
pub fn lemma45_bounded(chk: &BohrChecker, pairs: &[(i64, i64)]) -> Result<Vec<Record>, BohrError> {
    let caps = bounds_json(chk);
    pairs
        .iter()
        .map(|&(m, mt)| {
            let o = chk.delta(m, mt)?;
            Ok(informational("4.5", json!({ "m": m, "m_tilde": mt, "bounded": true }), &o, &caps, "measure"))
        })
        .collect()
}
