//! Bounded checks run over sample ranges, emitting report records.
//!
//! Every function is deterministic for a given seed; records carry the caps
//! they were evaluated under.

use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use super::report::{Record, Status, Verdict};
use super::theorem_a::{lemma36_characterisation, TheoremAChecker};
use super::FoError;
use crate::genpoly::{GammaMode, TheoremA};
use crate::numeric::AlgebraicReal;
use crate::search::{
    calibrate_c, equidist_check, find_progression_base, pair_condition_holds, scan_lemma32, Calibration, ModeResult,
    SearchBudget, SearchError,
};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

pub(crate) fn status(ok: bool) -> Status {
    if ok {
        Status::Pass
    } else {
        Status::Violation
    }
}

pub(crate) fn verdict(ok: bool) -> Verdict {
    if ok {
        Verdict::VerifiedInRange
    } else {
        Verdict::RefutedInRange
    }
}

pub(crate) fn rng(seed: u64, salt: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15))
}

/// Attaches wall-clock time to records produced by `f` when `timing` is set.
pub fn timed(timing: bool, f: impl FnOnce() -> Vec<Record>) -> Vec<Record> {
    let start = Instant::now();
    let mut out = f();
    if timing {
        let ms = start.elapsed().as_millis() as u64;
        for r in &mut out {
            r.runtime_ms = Some(ms);
        }
    }
    out
}

fn mode_json(r: &ModeResult) -> Value {
    json!({
        "mode": r.mode.name(),
        "c": r.c,
        "samples": r.samples,
        "failures": r.failures,
        "first_failure": r.first_failure,
    })
}

/// Calibrates C and reports the chosen mode plus both negative controls.
pub fn lemma31(g: &TheoremA, samples: usize, seed: u64) -> Result<(Calibration, Vec<Record>), SearchError> {
    let cal = calibrate_c(g, samples, seed)?;
    let (all, off) = cal.history.last().expect("calibration ran at least once");
    let chosen = if cal.mode == GammaMode::AllPairs { all } else { off };
    let caps = json!({ "samples": samples, "c_max": 1024 });
    let ok = chosen.failures == 0 && cal.c <= 1024;
    let mut out = vec![Record::new("3.1", json!({ "check": "calibration", "c": cal.c }), verdict(ok), status(ok), caps.clone())
        .with_witness(mode_json(chosen))];
    let quarter_fails = cal.quarter.as_ref().is_some_and(|q| q.failures > 0);
    let control = cal.opposite.failures > 0 || quarter_fails || cal.indistinguishable;
    out.push(
        Record::new("3.1", json!({ "check": "negative-control", "c": cal.c }), verdict(control), status(control), caps)
            .with_witness(json!({
                "opposite": mode_json(&cal.opposite),
                "quarter": cal.quarter.as_ref().map(mode_json),
                "indistinguishable": cal.indistinguishable,
            })),
    );
    Ok((cal, out))
}

/// Random pairs n₀ ∈ [C, 8C], n₁ ∈ [Cn₀, 8Cn₀] split by the pair condition:
/// good pairs need a witness n₂ ≤ `good_cap`, bad pairs must have none in [Cn₁, `bad_cap`].
pub fn lemma32(chk: &TheoremAChecker, per_class: usize, good_cap: i64, bad_cap: i64, seed: u64) -> Vec<Record> {
    let g = chk.sequence();
    let c = chk.c();
    let mut rng = rng(seed, 32);
    let caps = json!({ "good_cap": good_cap, "bad_cap": bad_cap, "n2_span": chk.bounds().n2_span });
    let (mut good, mut bad) = (0, 0);
    let mut out = Vec::new();
    while good < per_class || bad < per_class {
        let n0 = rng.gen_range(c..=8 * c);
        let n1 = rng.gen_range(c * n0..=8 * c * n0);
        let cond = pair_condition_holds(g, n0, n1);
        let inst = json!({ "n0": n0, "n1": n1, "condition": cond });
        if cond && good < per_class {
            good += 1;
            let w = scan_lemma32(g, n0, n1, c * n1, good_cap);
            let mu = chk.def_mu(n0, n1);
            let ok = w.is_some() && mu.holds;
            let rec = Record::new("3.2", inst, verdict(ok), status(ok), caps.clone());
            out.push(match w {
                Some(n2) => rec.with_witness(json!({ "n2": n2, "offset": n2 - c * n1, "bounded_mu": mu.holds })),
                None => rec,
            });
        } else if !cond && bad < per_class {
            bad += 1;
            let w = scan_lemma32(g, n0, n1, c * n1, bad_cap);
            let mu = chk.def_mu(n0, n1);
            let ok = w.is_none() && !mu.holds;
            let rec = Record::new("3.2", inst, verdict(ok), status(ok), caps.clone());
            out.push(match w {
                Some(n2) => rec.with_witness(json!({ "n2": n2 })),
                None => rec,
            });
        }
    }
    out
}

/// Bounded ψ(m, N) against the exact window for all m ≤ `m_max`, N ≤ `n_max`,
/// plus exact monotonicity of the window endpoints.
pub fn lemma33(chk: &TheoremAChecker, m_max: i64, n_max: i64) -> Vec<Record> {
    let depth: Vec<i64> = (1..=m_max).map(|m| chk.psi_depth(m, n_max)).collect();
    let caps = json!({ "m_max": m_max, "n_max": n_max, "n2_span": chk.bounds().n2_span });
    let mut out = Vec::new();
    let mut prev = None;
    for n in 1..=n_max {
        let mut mismatches = Vec::new();
        let mut members = 0;
        for m in 1..=m_max {
            let bounded = depth[(m - 1) as usize] >= n;
            let window = chk.psi_window(m, n);
            members += usize::from(window);
            if bounded != window {
                mismatches.push(m);
            }
        }
        let (lo, hi) = chk.window_endpoints(n);
        let monotone = match &prev {
            None => true,
            Some((plo, phi)) => lo.cmp_value(plo).is_ge() && hi.cmp_value(phi).is_le(),
        };
        let ok = mismatches.is_empty() && monotone;
        let w = chk.window(n);
        out.push(
            Record::new("3.3", json!({ "N": n }), verdict(ok), status(ok), caps.clone()).with_witness(json!({
                "argmin": w.argmin,
                "argmax": w.argmax,
                "lo": lo.to_f64(),
                "hi": hi.to_f64(),
                "members": members,
                "mismatches": mismatches.iter().take(20).collect::<Vec<_>>(),
                "monotone": monotone,
            })),
        );
        prev = Some((lo, hi));
    }
    out
}

/// Grid discrepancy of the two-dimensional orbit against its pushforward sample.
#[allow(clippy::too_many_arguments)]
pub fn lemma34(
    alpha: &AlgebraicReal,
    abcd: (i64, i64, i64, i64),
    orbit: u64,
    samples: u64,
    grid: usize,
    tolerance: f64,
    seed: u64,
) -> Result<Vec<Record>, SearchError> {
    let (a, b, c, d) = abcd;
    let r = equidist_check(alpha, a, b, c, d, orbit, samples, grid, seed)?;
    let ok = r.sup_cell_discrepancy <= tolerance && r.near_origin_fraction > 0.0;
    Ok(vec![Record::new(
        "3.4",
        json!({ "a": a, "b": b, "c": c, "d": d }),
        verdict(ok),
        status(ok),
        json!({ "orbit": orbit, "samples": samples, "grid": grid, "tolerance": tolerance }),
    )
    .with_witness(json!({
        "sup_cell_discrepancy": r.sup_cell_discrepancy,
        "anchored_box_discrepancy": r.anchored_box_discrepancy,
        "near_origin_fraction": r.near_origin_fraction,
    }))])
}

/// Bounded δ(n, n′) against the divisibility characterisation, one record per n.
pub fn lemma36(chk: &TheoremAChecker, n_max: i64, n_prime_max: i64) -> Vec<Record> {
    let caps = chk.bounds().to_json();
    (1..=n_max)
        .map(|n| {
            let (mut mismatches, mut exhausted, mut holds) = (Vec::new(), Vec::new(), Vec::new());
            for np in 1..=n_prime_max {
                let d = chk.def_delta(n, np);
                if d.verdict == Verdict::CapExhausted {
                    exhausted.push(np);
                    continue;
                }
                if d.holds {
                    holds.push(np);
                }
                if d.holds != lemma36_characterisation(chk.sequence(), n, np) {
                    mismatches.push(np);
                }
            }
            let ok = mismatches.is_empty();
            Record::new("3.6", json!({ "n": n, "n_prime_max": n_prime_max }), verdict(ok), status(ok), caps.clone())
                .with_witness(json!({ "delta_true": holds, "mismatches": mismatches, "cap_exhausted": exhausted }))
        })
        .collect()
}

/// Constructed divisible instances n′ = tn, m′ = tm with ‖αm‖ < ε and the
/// smallness conditions on t, ε and ‖αn‖, checking |Δ°g(n,m′) − Δ°g(n′,m)| ≤ 2.
pub fn lemma35_converse(chk: &TheoremAChecker, count: usize, n_max: i64, m_pool: i64, seed: u64) -> Vec<Record> {
    let g = chk.sequence();
    let al = g.alpha();
    let mut pool: Vec<(f64, i64)> = (1..=m_pool).map(|m| (al.frac_signed_f64(m as i128).abs(), m)).collect();
    pool.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let half = rat(1, 2);
    let caps = json!({ "n_max": n_max, "m_pool": m_pool, "bound": 2 });
    let mut rng = rng(seed, 35);
    let mut out = Vec::new();
    while out.len() < count {
        let n = rng.gen_range(1..=n_max);
        let na = al.frac_signed_exact(n as i128).abs();
        let naf = na.to_f64();
        let t_max = ((0.5 / naf).ceil() as i64).min(12);
        let t = rng.gen_range(1..=t_max.max(1));
        if na.mul_int(t).cmp_rational(&half).is_ge() {
            continue;
        }
        let tf = t as f64;
        let eps0 = (0.5 / tf).min(0.5 - tf * naf).min((0.5 - naf) / tf) * 0.9;
        let eps = BigRational::new(BigInt::from((eps0 * 1e9).floor() as i64), BigInt::from(1_000_000_000));
        let c1 = eps < rat(1, 2 * t);
        let c2 = na.mul_int(t).add_rational(&eps).cmp_rational(&half).is_lt();
        let c3 = na.add_rational(&(&eps * BigInt::from(t))).cmp_rational(&half).is_lt();
        if !(c1 && c2 && c3) {
            continue;
        }
        let avail = pool.partition_point(|p| p.0 < eps0 * 0.999);
        if avail == 0 {
            continue;
        }
        let m = pool[rng.gen_range(0..avail)].1;
        if al.frac_signed_exact(m as i128).abs().cmp_rational(&eps).is_ge() {
            continue;
        }
        let diff = chk.dsym(n, t * m) - chk.dsym(t * n, m);
        let ok = diff.abs() <= 2;
        out.push(
            Record::new("3.5", json!({ "n": n, "t": t, "m": m, "eps": eps.to_string() }), verdict(ok), status(ok), caps.clone())
                .with_witness(json!({ "difference": diff })),
        );
    }
    out
}

/// ℓ(k) from its closed form against the bounded-δ characterisation, and
/// P_{k,ℓ(k)} against {n ∈ [k, ℓ(k)] : δ(k, n)}.
pub fn ell_crosscheck(chk: &TheoremAChecker, k_max: i64, factor_cap: i64) -> Result<Vec<Record>, FoError> {
    let caps = json!({ "factor_cap": factor_cap, "bounds": chk.bounds().to_json() });
    let mut out = Vec::new();
    for k in 1..=k_max {
        let ell = chk.ell(k)?;
        if ell / k > factor_cap {
            out.push(Record::new("ell", json!({ "k": k, "ell": ell }), Verdict::CapExhausted, Status::Excluded, caps.clone()));
            continue;
        }
        let via = chk.ell_via_delta(k, factor_cap);
        let p = chk.progression(k, ell)?;
        let by_delta: Vec<i64> = (k..=ell).filter(|&n| chk.def_delta(k, n).holds).collect();
        let ok = via == Some(ell) && by_delta == p.elements;
        out.push(
            Record::new("ell", json!({ "k": k, "ell": ell }), verdict(ok), status(ok), caps.clone())
                .with_witness(json!({ "via_delta": via, "progression_len": p.elements.len() })),
        );
    }
    Ok(out)
}

/// Both sides of the quadratic-progression equivalence for every m ≤ `m_max`
/// and 3m ≤ h ≤ min(`t_max`·m, ℓ(m)); one record per m.
pub fn lemma37(chk: &TheoremAChecker, m_max: i64, t_max: i64) -> Result<Vec<Record>, FoError> {
    let caps = json!({ "m_max": m_max, "t_max": t_max });
    let mut out = Vec::new();
    for m in 1..=m_max {
        let top = (t_max * m).min(chk.ell(m)?);
        if top < 3 * m {
            continue;
        }
        let (mut checked, mut both_true, mut bad) = (0usize, 0usize, Vec::new());
        for h in 3 * m..=top {
            let r = chk.verify_lemma37(m, h)?;
            checked += 1;
            both_true += usize::from(r.side1 && r.side2);
            if !r.equivalent() {
                bad.push(h);
            }
        }
        let ok = bad.is_empty();
        out.push(
            Record::new("3.7", json!({ "m": m, "h_max": top }), verdict(ok), status(ok), caps.clone())
                .with_witness(json!({ "checked": checked, "both_true": both_true, "counterexamples": bad })),
        );
    }
    Ok(out)
}

/// For each r, a progression base m from the approximation search, then
/// π(m, rm) and g(tm) = t²g(m) for t ≤ r, exactly.
pub fn lemma38(chk: &TheoremAChecker, rs: impl IntoIterator<Item = i64>, budget: u64) -> Result<Vec<Record>, FoError> {
    let caps = json!({ "budget": budget });
    let mut out = Vec::new();
    for r in rs {
        let found = find_progression_base(r, chk.sequence(), &SearchBudget::hybrid(budget));
        let Ok(w) = found else {
            out.push(Record::new("3.8", json!({ "r": r }), Verdict::CapExhausted, Status::Violation, caps.clone()));
            continue;
        };
        let m = w.m;
        let pi = chk.def_pi(m, r * m)?;
        let gm = chk.g(m);
        let squares = (1..=r).all(|t| chk.g(t * m) == (t * t) as i128 * gm);
        let ok = pi.holds && squares;
        out.push(
            Record::new("3.8", json!({ "r": r }), verdict(ok), status(ok), caps.clone()).with_witness(json!({
                "m": m,
                "pi": pi.holds,
                "pi_failure": pi.failure.map(|f| format!("{f:?}")),
                "a": pi.a,
                "squares": squares,
            })),
        );
    }
    Ok(out)
}
