//! κ, ν and δ under bounded quantifiers, with three-valued verdicts.
//!
//! A bounded formula that is true only because some universal range was
//! empty within the caps is reported as cap-exhausted rather than verified.

use std::collections::HashMap;

use serde::Serialize;

use super::{approx, BohrChecker, BohrError};
use crate::fo::Verdict;

#[derive(Default)]
pub(crate) struct Memo {
    h_sets: HashMap<i64, Vec<i64>>,
    w_sets: HashMap<(i64, i64), Vec<i64>>,
    lambda: HashMap<(i64, i64), bool>,
    kappa: HashMap<(i64, i64), (bool, bool)>,
    nu: HashMap<(i64, i64, i64), (bool, bool)>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NestedOutcome {
    pub verdict: Verdict,
    /// Truth value of the bounded formula, vacuous cases included.
    pub value: bool,
    /// For the outermost quantifier: an existential witness, or a refuting
    /// value of a universal.
    pub witness: Option<i64>,
    /// The characterising quantity computed exactly: ‖αm²‖ for κ, ‖α(m² − m̃²)‖ for ν.
    pub measure: Option<f64>,
}

fn verdict(value: bool, vacuous: bool) -> Verdict {
    match (value, vacuous) {
        (false, _) => Verdict::RefutedInRange,
        (true, true) => Verdict::CapExhausted,
        (true, false) => Verdict::VerifiedInRange,
    }
}

impl BohrChecker {
    fn memo<T>(&self, f: impl FnOnce(&mut Memo) -> T) -> T {
        f(&mut self.memo.lock().expect("memo lock"))
    }

    fn lambda_cached(&self, x: i64, level: i64) -> bool {
        if let Some(v) = self.memo(|m| m.lambda.get(&(x, level)).copied()) {
            return v;
        }
        let v = self.lambda_unchecked(x, level).is_some();
        self.memo(|m| m.lambda.insert((x, level), v));
        v
    }

    /// {h ≤ h_cap : g(h) = 1 ∧ λ(h, M)}.
    fn h_set(&self, big_m: i64) -> Vec<i64> {
        if let Some(v) = self.memo(|m| m.h_sets.get(&big_m).cloned()) {
            return v;
        }
        let v: Vec<i64> = (1..=self.bounds.h_cap).filter(|&h| self.g_unchecked(h) && self.lambda_cached(h, big_m)).collect();
        self.memo(|m| m.h_sets.insert(big_m, v.clone()));
        v
    }

    /// {n ≤ n_cap : λ(n, L) ∧ μ(n, N)}.
    fn w_set(&self, level: i64, big_n: i64) -> Vec<i64> {
        if let Some(v) = self.memo(|m| m.w_sets.get(&(level, big_n)).cloned()) {
            return v;
        }
        let v: Vec<i64> = self
            .mu_set(big_n, self.bounds.n_cap)
            .into_iter()
            .filter(|&n| self.lambda_cached(n, level))
            .collect();
        self.memo(|m| m.w_sets.insert((level, big_n), v.clone()));
        v
    }

    // (value, vacuous, witness M)
    fn kappa_raw(&self, m: i64, big_n: i64) -> (bool, bool, Option<i64>) {
        let mut vacuous_witness = None;
        for big_m in 1..=self.bounds.big_m_cap {
            let hs = self.h_set(big_m);
            if hs.is_empty() {
                vacuous_witness.get_or_insert(big_m);
                continue;
            }
            let all = hs.iter().all(|&h| {
                (1..=self.bounds.l_cap).all(|l| self.w_set(l, big_n).iter().any(|&n| self.g_unchecked(h + m + n)))
            });
            if all {
                return (true, false, Some(big_m));
            }
        }
        (vacuous_witness.is_some(), true, vacuous_witness)
    }

    fn kappa_value(&self, m: i64, big_n: i64) -> (bool, bool) {
        if let Some(v) = self.memo(|memo| memo.kappa.get(&(m, big_n)).copied()) {
            return v;
        }
        let (value, vacuous, _) = self.kappa_raw(m, big_n);
        self.memo(|memo| memo.kappa.insert((m, big_n), (value, vacuous)));
        (value, vacuous)
    }

    /// κ(m, N): (∃M)(∀h)(g(h) = 1 ∧ λ(h, M) ⇒ (∀L)(∃n) λ(n, L) ∧ μ(n, N) ∧ g(h+m+n) = 1).
    pub fn kappa(&self, m: i64, big_n: i64) -> Result<NestedOutcome, BohrError> {
        if m < 1 || big_n < 1 {
            return Err(BohrError::PreconditionViolated("need m, N >= 1".into()));
        }
        let (value, vacuous, witness) = self.kappa_raw(m, big_n);
        Ok(NestedOutcome { verdict: verdict(value, vacuous), value, witness, measure: Some(approx(&self.norm_am2(m))) })
    }

    // (value, vacuous, witness L)
    fn nu_raw(&self, m: i64, m_tilde: i64, big_n: i64) -> (bool, bool, Option<i64>) {
        let mut vacuous_witness = None;
        for level in 1..=self.bounds.l_cap {
            let mut any_antecedent = false;
            let holds = (1..=self.bounds.outer_n_cap).all(|n| {
                if !(self.lambda_cached(n, level) && self.kappa_value(m + n, level).0) {
                    return true;
                }
                any_antecedent = true;
                self.kappa_value(m_tilde + n, big_n).0
            });
            if holds && any_antecedent {
                return (true, false, Some(level));
            }
            if holds {
                vacuous_witness.get_or_insert(level);
            }
        }
        (vacuous_witness.is_some(), true, vacuous_witness)
    }

    fn nu_value(&self, m: i64, m_tilde: i64, big_n: i64) -> bool {
        if let Some(v) = self.memo(|memo| memo.nu.get(&(m, m_tilde, big_n)).copied()) {
            return v.0;
        }
        let (value, vacuous, _) = self.nu_raw(m, m_tilde, big_n);
        self.memo(|memo| memo.nu.insert((m, m_tilde, big_n), (value, vacuous)));
        value
    }

    /// ν(m, m̃, N): (∃L)(∀n)(λ(n, L) ∧ κ(m+n, L) ⇒ κ(m̃+n, N)).
    pub fn nu(&self, m: i64, m_tilde: i64, big_n: i64) -> Result<NestedOutcome, BohrError> {
        if m < 1 || m_tilde < 1 || big_n < 1 {
            return Err(BohrError::PreconditionViolated("need m, m~, N >= 1".into()));
        }
        let (value, vacuous, witness) = self.nu_raw(m, m_tilde, big_n);
        let diff = (m as i128) * (m as i128) - (m_tilde as i128) * (m_tilde as i128);
        Ok(NestedOutcome { verdict: verdict(value, vacuous), value, witness, measure: Some(approx(&self.norm(diff))) })
    }

    /// δ(m, m̃): (∀N)(∃L)(∀n)(ν(m+n, m, L) ∧ κ(n, L) ⇒ ν(m̃+n, m̃, N)).
    pub fn delta(&self, m: i64, m_tilde: i64) -> Result<NestedOutcome, BohrError> {
        if m < 1 || m_tilde < 1 {
            return Err(BohrError::PreconditionViolated("need m, m~ >= 1".into()));
        }
        let mut vacuous = false;
        for big_n in 1..=self.bounds.big_n_cap {
            let mut found = None;
            for level in 1..=self.bounds.l_cap {
                let mut any_antecedent = false;
                let holds = (1..=self.bounds.outer_n_cap).all(|n| {
                    if !(self.kappa_value(n, level).0 && self.nu_value(m + n, m, level)) {
                        return true;
                    }
                    any_antecedent = true;
                    self.nu_value(m_tilde + n, m_tilde, big_n)
                });
                if holds {
                    found = Some(any_antecedent);
                    if any_antecedent {
                        break;
                    }
                }
            }
            match found {
                None => {
                    return Ok(NestedOutcome { verdict: Verdict::RefutedInRange, value: false, witness: Some(big_n), measure: None })
                }
                Some(false) => vacuous = true,
                Some(true) => {}
            }
        }
        Ok(NestedOutcome { verdict: verdict(true, vacuous), value: true, witness: None, measure: None })
    }
}
