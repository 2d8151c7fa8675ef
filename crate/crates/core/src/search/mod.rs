//! Diophantine-approximation searches: small fractional parts, witnesses for
//! the vanishing of Δ°²g, progression bases, simultaneous targets, the
//! equidistribution check and the calibration of the scale constant C.

mod approx;
mod calibrate;
mod cf;
mod equidist;

pub use approx::{
    find_lemma32_witness, find_progression_base, find_small_norm, find_weyl_witness, pair_condition_holds, scan_lemma32,
    WeylTarget,
};
pub use calibrate::{calibrate_c, sample_triple, Calibration, ModeResult};
pub use cf::{continued_fraction, convergent_denominators, CfExpansion};
pub use equidist::{equidist_check, EquidistReport};

use thiserror::Error;

use crate::genpoly::GenPolyError;
use crate::numeric::{AlgebraicReal, NumericError};

/// Default seed for every randomised procedure.
pub const DEFAULT_SEED: u64 = 0xC0FFEE;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    ConvergentMultiples,
    Exhaustive,
    Hybrid,
}

/// Limits on a search. Only the candidate bound is used, so results never
/// depend on machine speed.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SearchBudget {
    pub max_candidate: u64,
    pub strategy: Strategy,
}

impl SearchBudget {
    pub fn new(max_candidate: u64, strategy: Strategy) -> Self {
        SearchBudget { max_candidate: max_candidate.max(1), strategy }
    }

    pub fn exhaustive(max_candidate: u64) -> Self {
        Self::new(max_candidate, Strategy::Exhaustive)
    }

    pub fn hybrid(max_candidate: u64) -> Self {
        Self::new(max_candidate, Strategy::Hybrid)
    }
}

/// A candidate together with the exact values of the conditions it meets.
#[derive(Clone, Debug)]
pub struct ApproxWitness {
    pub m: i64,
    pub achieved: Vec<(String, AlgebraicReal)>,
}

impl ApproxWitness {
    pub fn get(&self, name: &str) -> Option<&AlgebraicReal> {
        self.achieved.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("no witness within the search budget")]
    NotFoundWithinBudget,
    #[error("precondition violated: {0}")]
    PreconditionViolated(String),
    #[error("calibration failed: no C up to 1024 gives zero failures")]
    CalibrationFailed,
    #[error("theta is rational")]
    ThetaRational,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
    #[error(transparent)]
    GenPoly(#[from] GenPolyError),
}
