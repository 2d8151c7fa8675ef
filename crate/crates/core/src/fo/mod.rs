//! Bounded first-order checks: a formula language over (Z; <, +, 1) with
//! named sequences and relations, its evaluator, and the defining formulas
//! built on g(n) = ⌊βn⌊αn⌉⌉ together with their verification harnesses.

mod eval;
mod formula;
pub mod harness;
mod parse;
mod report;
mod theorem_a;

pub use eval::{eval_formula, find_witness, Relation, Structure, Valuation};
pub use formula::{Cmp, Formula, Quant, Term};
pub use parse::{parse_formula, parse_term};
pub use report::{Record, Status, Summary, Verdict};
pub use theorem_a::{
    lemma36_characterisation, DeltaOutcome, Lemma37Report, MuOutcome, PiFailure, PiOutcome, Progression,
    PsiBackend, TheoremAChecker, Window,
};

use thiserror::Error;

use crate::genpoly::GenPolyError;
use crate::numeric::NumericError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FoError {
    #[error("syntax error at byte {pos}: expected {expected}")]
    Syntax { pos: usize, expected: String },
    #[error("unbound variable `{0}`")]
    UnboundVariable(String),
    #[error("unknown symbol `{0}`")]
    UnknownSymbol(String),
    #[error("range of `{var}` has {size} values, above the configured maximum")]
    RangeOverflow { var: String, size: u128 },
    #[error("integer overflow during evaluation")]
    Overflow,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    GenPoly(#[from] GenPolyError),
}

/// Caps that relativise the unbounded quantifiers of the defining formulas.
#[derive(Clone, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct BoundProfile {
    /// Absolute upper end of μ's n₂ range.
    pub n2_cap: i64,
    /// μ searches n₂ ∈ [C·n₁, C·n₁ + n2_span] (intersected with n2_cap).
    pub n2_span: i64,
    /// δ's ∃M ranges over [1, big_m_cap].
    pub big_m_cap: i64,
    /// δ's ∀M′ ranges over [1, big_m_prime_cap].
    pub big_m_prime_cap: i64,
    /// δ's ∃H ranges over [1, big_h_cap].
    pub big_h_cap: i64,
    /// Largest progression factor h/m considered by π-based scans.
    pub h_cap: i64,
    /// δ's ∀m ranges over [1, range_multiplier·M].
    pub range_multiplier: i64,
    /// Largest quantifier range the generic evaluator will scan.
    pub max_range: u128,
}

impl Default for BoundProfile {
    fn default() -> Self {
        BoundProfile {
            n2_cap: i64::MAX / 4,
            n2_span: 4000,
            big_m_cap: 5000,
            big_m_prime_cap: 30,
            big_h_cap: 2,
            h_cap: 1000,
            range_multiplier: 64,
            max_range: 1 << 24,
        }
    }
}

impl BoundProfile {
    pub fn validate(&self) -> Result<(), FoError> {
        let caps = [
            ("n2_cap", self.n2_cap),
            ("n2_span", self.n2_span),
            ("big_m_cap", self.big_m_cap),
            ("big_m_prime_cap", self.big_m_prime_cap),
            ("big_h_cap", self.big_h_cap),
            ("h_cap", self.h_cap),
            ("range_multiplier", self.range_multiplier),
        ];
        for (name, v) in caps {
            if v < 1 {
                return Err(FoError::PreconditionViolated(format!("{name} must be at least 1")));
            }
        }
        if self.max_range < 1 {
            return Err(FoError::PreconditionViolated("max_range must be at least 1".into()));
        }
        Ok(())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("bound profile serialises")
    }
}
