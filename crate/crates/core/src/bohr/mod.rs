//! The indicator g(n) = 1[‖αn²‖ < ρ] and its definable properties μ, λ, κ,
//! ν, δ under bounded quantifiers, with the arithmetic characterisations
//! used to check them.

pub mod harness;
mod nested;
mod sequence;

use std::cmp::Ordering;
use std::collections::HashMap;
use std::sync::Mutex;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::genpoly::{BohrSeq, GenPolyError};
use crate::numeric::{AlgebraicReal, FracMul, NumericError, Threshold};
use crate::search::SearchError;

pub use nested::NestedOutcome;
pub use sequence::{DivisibilityReport, SequenceTerm};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BohrError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("range of `{var}` has {size} values, above the configured maximum")]
    RangeOverflow { var: String, size: u128 },
    #[error("no witness within the search budget")]
    NotFoundWithinBudget,
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    GenPoly(#[from] GenPolyError),
}

impl From<SearchError> for BohrError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::NotFoundWithinBudget => BohrError::NotFoundWithinBudget,
            SearchError::Numeric(e) => BohrError::Numeric(e),
            SearchError::GenPoly(e) => BohrError::GenPoly(e),
            other => BohrError::PreconditionViolated(other.to_string()),
        }
    }
}

/// α irrational and 0 < ρ < 1/4 rational, so α is never a rational
/// combination of 1 and ρ.
#[derive(Clone, Debug)]
pub struct BohrParams {
    alpha: AlgebraicReal,
    rho: BigRational,
}

impl BohrParams {
    pub fn new(alpha: AlgebraicReal, rho: BigRational) -> Result<Self, BohrError> {
        if alpha.is_rational() {
            return Err(BohrError::InvalidParams("alpha must be irrational".into()));
        }
        if rho <= BigRational::zero() || rho >= BigRational::new(1.into(), 4.into()) {
            return Err(BohrError::InvalidParams("rho must lie in (0, 1/4)".into()));
        }
        Ok(BohrParams { alpha, rho })
    }

    pub fn alpha(&self) -> &AlgebraicReal {
        &self.alpha
    }

    pub fn rho(&self) -> &BigRational {
        &self.rho
    }
}

/// Ranges of the bounded quantifiers. Every variable ranges over [1, cap].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BohrBounds {
    /// ∃n in λ and in κ's inner block.
    pub n_cap: i64,
    /// κ's ∃M.
    pub big_m_cap: i64,
    /// κ's ∀h.
    pub h_cap: i64,
    /// ∀L in κ, ∃L in ν and δ.
    pub l_cap: i64,
    /// ∀n in ν and δ.
    pub outer_n_cap: i64,
    /// δ's ∀N.
    pub big_n_cap: i64,
    /// Length of witness sequences.
    pub seq_len: u32,
    /// Largest candidate tried by witness searches.
    pub search_budget: u64,
    /// Largest quantifier range scanned.
    pub max_range: u128,
}

impl Default for BohrBounds {
    fn default() -> Self {
        BohrBounds {
            n_cap: 400,
            big_m_cap: 3,
            h_cap: 60,
            l_cap: 3,
            outer_n_cap: 12,
            big_n_cap: 2,
            seq_len: 8,
            search_budget: 50_000_000,
            max_range: 1 << 20,
        }
    }
}

impl BohrBounds {
    /// All caps equal to 1.
    pub fn degenerate() -> Self {
        BohrBounds {
            n_cap: 1,
            big_m_cap: 1,
            h_cap: 1,
            l_cap: 1,
            outer_n_cap: 1,
            big_n_cap: 1,
            seq_len: 1,
            search_budget: 1,
            max_range: 1 << 20,
        }
    }

    pub fn validate(&self) -> Result<(), BohrError> {
        let caps = [
            ("n_cap", self.n_cap),
            ("big_m_cap", self.big_m_cap),
            ("h_cap", self.h_cap),
            ("l_cap", self.l_cap),
            ("outer_n_cap", self.outer_n_cap),
            ("big_n_cap", self.big_n_cap),
            ("seq_len", self.seq_len as i64),
            ("search_budget", self.search_budget.min(i64::MAX as u64) as i64),
        ];
        for (name, v) in caps {
            if v < 1 {
                return Err(BohrError::InvalidParams(format!("{name} must be at least 1")));
            }
        }
        for (var, cap) in [("n", self.n_cap), ("M", self.big_m_cap), ("h", self.h_cap), ("L", self.l_cap), ("n", self.outer_n_cap), ("N", self.big_n_cap)] {
            if cap as u128 > self.max_range {
                return Err(BohrError::RangeOverflow { var: var.into(), size: cap as u128 });
            }
        }
        Ok(())
    }
}

/// Evaluator for g and the bounded properties, with memo tables.
pub struct BohrChecker {
    params: BohrParams,
    bounds: BohrBounds,
    seq: BohrSeq,
    alpha: FracMul,
    memo: Mutex<nested::Memo>,
    mu_sets: Mutex<HashMap<(i64, i64), Vec<i64>>>,
}

impl BohrChecker {
    pub fn new(params: BohrParams, bounds: BohrBounds) -> Result<Self, BohrError> {
        bounds.validate()?;
        let seq = BohrSeq::new(&params.alpha, &params.rho)?;
        let alpha = FracMul::new(&params.alpha)?;
        Ok(BohrChecker { params, bounds, seq, alpha, memo: Mutex::new(Default::default()), mu_sets: Mutex::new(HashMap::new()) })
    }

    pub fn params(&self) -> &BohrParams {
        &self.params
    }

    pub fn bounds(&self) -> &BohrBounds {
        &self.bounds
    }

    pub fn alpha(&self) -> &FracMul {
        &self.alpha
    }

    fn field_rational(&self, q: BigRational) -> AlgebraicReal {
        AlgebraicReal::from_rational(self.params.alpha.field(), q)
    }

    pub fn threshold(&self, q: BigRational) -> Threshold {
        Threshold::new(self.field_rational(q))
    }

    /// g(n) = 1[‖αn²‖ < ρ].
    pub fn g(&self, n: i64) -> Result<u8, BohrError> {
        Ok(self.seq.try_at(n)? as u8)
    }

    fn g_unchecked(&self, n: i64) -> bool {
        self.seq.try_at(n).expect("argument squared fits in i128") == 1
    }

    /// ‖αk‖ exactly.
    pub fn norm(&self, k: i128) -> AlgebraicReal {
        self.alpha.frac_signed_exact(k).abs()
    }

    /// ‖2αm‖ exactly.
    pub fn norm_2am(&self, m: i64) -> AlgebraicReal {
        self.norm(2 * m as i128)
    }

    /// ‖αm²‖ exactly.
    pub fn norm_am2(&self, m: i64) -> AlgebraicReal {
        self.norm((m as i128) * (m as i128))
    }

    /// μ(m, N): g(n + m) = g(n) for 1 ≤ n ≤ N.
    pub fn mu(&self, m: i64, big_n: i64) -> Result<bool, BohrError> {
        if m < 0 || big_n < 1 {
            return Err(BohrError::PreconditionViolated("need m >= 0 and N >= 1".into()));
        }
        Ok(self.mu_unchecked(m, big_n))
    }

    fn mu_unchecked(&self, m: i64, big_n: i64) -> bool {
        m == 0 || (1..=big_n).all(|n| self.g_unchecked(n + m) == self.g_unchecked(n))
    }

    /// {n ∈ [1, upto] : μ(n, N)}, ascending.
    pub fn mu_set(&self, big_n: i64, upto: i64) -> Vec<i64> {
        if let Some(v) = self.mu_sets.lock().expect("memo lock").get(&(big_n, upto)) {
            return v.clone();
        }
        let v: Vec<i64> = (1..=upto).filter(|&n| self.mu_unchecked(n, big_n)).collect();
        self.mu_sets.lock().expect("memo lock").insert((big_n, upto), v.clone());
        v
    }

    /// δ(N) = min over 1 ≤ n ≤ N of |‖αn²‖ − ρ|, exactly.
    pub fn delta_threshold(&self, big_n: i64) -> Result<AlgebraicReal, BohrError> {
        if big_n < 1 {
            return Err(BohrError::PreconditionViolated("N must be at least 1".into()));
        }
        let rho = self.field_rational(self.params.rho.clone());
        let mut best: Option<AlgebraicReal> = None;
        for n in 1..=big_n {
            let d = (&self.norm_am2(n) - &rho).abs();
            if best.as_ref().is_none_or(|b| d.cmp_value(b) == Ordering::Less) {
                best = Some(d);
            }
        }
        Ok(best.expect("N >= 1"))
    }

    /// The surrogate thresholds (δ/10N, δ/10) under which μ(m, N) is guaranteed.
    pub fn mu_premise(&self, big_n: i64) -> Result<(Threshold, Threshold), BohrError> {
        let d = self.delta_threshold(big_n)?;
        let ten = BigRational::from_integer(BigInt::from(10));
        let e1 = d.mul_rational(&(BigRational::one() / (&ten * BigRational::from_integer(big_n.into()))));
        let e2 = d.mul_rational(&(BigRational::one() / ten));
        Ok((Threshold::new(e1), Threshold::new(e2)))
    }

    /// λ(m, N) with ∃n over [1, n_cap]; returns the least witness.
    pub fn lambda(&self, m: i64, big_n: i64) -> Result<Option<i64>, BohrError> {
        if m < 0 || big_n < 1 {
            return Err(BohrError::PreconditionViolated("need m >= 0 and N >= 1".into()));
        }
        Ok(self.lambda_unchecked(m, big_n))
    }

    fn lambda_unchecked(&self, m: i64, big_n: i64) -> Option<i64> {
        self.mu_set(big_n, self.bounds.n_cap).into_iter().find(|&n| self.mu_unchecked(n + m, big_n))
    }
}

/// f64 view of an exact value, for reports.
pub(crate) fn approx(x: &AlgebraicReal) -> f64 {
    x.to_f64()
}
