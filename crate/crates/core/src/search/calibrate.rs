use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SearchError;
use crate::genpoly::{lemma31_classify, GammaMode, TheoremA};

/// Scale schedule for the calibration.
pub const C_SCHEDULE: [i64; 10] = [2, 4, 8, 16, 32, 64, 128, 256, 512, 1024];

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModeResult {
    pub mode: GammaMode,
    pub c: i64,
    pub samples: usize,
    pub failures: usize,
    pub lhs_zero: usize,
    pub first_failure: Option<[i64; 3]>,
}

#[derive(Clone, Debug)]
pub struct Calibration {
    pub c: i64,
    pub mode: GammaMode,
    /// Both modes gave zero failures at `c`.
    pub indistinguishable: bool,
    /// Results for every scale tried, both modes.
    pub history: Vec<(ModeResult, ModeResult)>,
    /// The opposite mode at the chosen scale.
    pub opposite: ModeResult,
    /// The chosen mode at max(1, C/4), when that is below C.
    pub quarter: Option<ModeResult>,
}

/// A random triple with n₀ ∈ [C, 8C], n₁ ∈ [C n₀, 8C n₀], n₂ ∈ [C n₁, 8C n₁].
pub fn sample_triple(rng: &mut impl Rng, c: i64) -> [i64; 3] {
    let n0 = rng.gen_range(c..=8 * c);
    let n1 = rng.gen_range(c * n0..=8 * c * n0);
    let n2 = rng.gen_range(c * n1..=8 * c * n1);
    [n0, n1, n2]
}

fn run(g: &TheoremA, c: i64, mode: GammaMode, samples: usize, seed: u64) -> ModeResult {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (c as u64).rotate_left(32));
    let mut out = ModeResult { mode, c, samples, failures: 0, lhs_zero: 0, first_failure: None };
    for _ in 0..samples {
        let t = sample_triple(&mut rng, c);
        let r = lemma31_classify(g, t, mode);
        out.lhs_zero += usize::from(r.lhs_zero);
        if !r.consistent() {
            out.failures += 1;
            out.first_failure.get_or_insert(t);
        }
    }
    out
}

/// Smallest C in the doubling schedule with zero failures over
/// `sample_count` random admissible triples, plus the negative controls.
pub fn calibrate_c(g: &TheoremA, sample_count: usize, seed: u64) -> Result<Calibration, SearchError> {
    if sample_count == 0 {
        return Err(SearchError::InvalidArgument("sample_count must be at least 1".into()));
    }
    let mut history = Vec::new();
    for c in C_SCHEDULE {
        let all = run(g, c, GammaMode::AllPairs, sample_count, seed);
        let off = run(g, c, GammaMode::OffDiagonal, sample_count, seed);
        history.push((all.clone(), off.clone()));
        let (chosen, opposite) = match (all.failures, off.failures) {
            (0, _) => (all, off),
            (_, 0) => (off, all),
            _ => continue,
        };
        let qc = (c / 4).max(1);
        let quarter = (qc < c).then(|| run(g, qc, chosen.mode, sample_count, seed));
        return Ok(Calibration {
            c,
            mode: chosen.mode,
            indistinguishable: opposite.failures == 0,
            history,
            opposite,
            quarter,
        });
    }
    Err(SearchError::CalibrationFailed)
}
