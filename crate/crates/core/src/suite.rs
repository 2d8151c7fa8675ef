//! The full set of lemma checks at configurable scale, run section by section
//! or all at once, with shared state built once per run.

use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bohr::{harness as bohr_h, BohrBounds, BohrChecker, BohrError};
use crate::fo::harness::{self as fo_h, timed};
use crate::fo::{BoundProfile, FoError, Record, TheoremAChecker};
use crate::genpoly::TheoremA;
use crate::presets::{bohr_params, cube_root_two, theorem_a_default};
use crate::numeric::AlgebraicReal;
use crate::search::{Calibration, SearchError, DEFAULT_SEED};
use crate::weakmult::{build_q, harness as wm_h, CompileBounds, QSet, WeakMultError};

#[derive(Debug, Error)]
pub enum SuiteError {
    #[error("unknown lemma id `{0}`")]
    UnknownSection(String),
    #[error(transparent)]
    Fo(#[from] FoError),
    #[error(transparent)]
    Search(#[from] SearchError),
    #[error(transparent)]
    WeakMult(#[from] WeakMultError),
    #[error(transparent)]
    Bohr(#[from] BohrError),
}

/// Section ids in run order. Each id is the lemma field of its records,
/// except "3.5/3.6", "Q1" and "4.5", which also carry companion checks.
pub const SECTIONS: [&str; 17] = [
    "2.1", "2.2", "3.1", "3.2", "3.3", "3.4", "3.5/3.6", "3.7", "3.8", "Q1", "Q2", "Q", "4.1", "4.2", "4.3", "4.4",
    "4.5",
];

/// Normalises user-facing ids: "3.5" and "3.6" both select "3.5/3.6".
pub fn section_id(id: &str) -> Option<&'static str> {
    let id = match id {
        "3.5" | "3.6" | "ell" => "3.5/3.6",
        other => other,
    };
    SECTIONS.iter().copied().find(|s| *s == id)
}

/// Scale of every check. Defaults are the acceptance scale.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteConfig {
    pub seed: u64,
    pub bounds: BoundProfile,
    pub bohr_bounds: BohrBounds,
    pub lemma31_samples: usize,
    pub lemma32_per_class: usize,
    pub lemma32_good_cap: i64,
    pub lemma32_bad_cap: i64,
    pub lemma33_m_max: i64,
    pub lemma33_n_max: i64,
    pub lemma34_orbit: u64,
    pub lemma34_samples: u64,
    pub lemma34_grid: usize,
    pub lemma34_tolerance: f64,
    pub lemma35_count: usize,
    pub lemma35_n_max: i64,
    pub lemma35_m_pool: i64,
    pub lemma36_n_max: i64,
    pub lemma36_n_prime_max: i64,
    pub ell_k_max: i64,
    pub ell_factor_cap: i64,
    /// δ's M cap for the ℓ cross-check, whose n′ run past the calibrated range.
    pub ell_big_m_cap: i64,
    pub lemma37_m_max: i64,
    pub lemma37_h_factor: i64,
    pub lemma38_r_min: i64,
    pub lemma38_r_max: i64,
    pub lemma38_budget: u64,
    pub q_m_max: i64,
    pub q_h_factor: i64,
    pub q2_k_max: i128,
    pub q_closed_m_max: i64,
    pub lemma22_samples: usize,
    pub lemma22_points: usize,
    pub lemma22_m_max: i64,
    pub lemma22_k_max: i64,
    pub compile_polys: Vec<String>,
    pub compile_bounds: CompileBounds,
    pub compile_q_m_max: i64,
    pub compile_q_h_factor: i64,
    pub bohr41_n: i64,
    pub bohr41_extra_n: Vec<i64>,
    pub bohr41_m_max: i64,
    pub bohr41_forward_n: Vec<i64>,
    pub bohr42_forward_n: Vec<i64>,
    pub bohr42_m_max: i64,
    pub bohr42_converse_n: Vec<i64>,
    pub bohr42_converse_m_max: i64,
    pub bohr42_converse_count: usize,
    pub bohr42_tries: usize,
    pub bohr42_finest: u32,
    pub bohr43_m_max: i64,
    pub bohr_nested_n: Vec<i64>,
    pub bohr44_pairs: Vec<(i64, i64)>,
    pub bohr45_max: i64,
    pub bohr45_tolerance: f64,
    pub bohr45_bounded_pairs: Vec<(i64, i64)>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig {
            seed: DEFAULT_SEED,
            bounds: BoundProfile::default(),
            bohr_bounds: BohrBounds::default(),
            lemma31_samples: 10_000,
            lemma32_per_class: 100,
            lemma32_good_cap: 1_000_000,
            lemma32_bad_cap: 100_000,
            lemma33_m_max: 10_000,
            lemma33_n_max: 30,
            lemma34_orbit: 200_000,
            lemma34_samples: 1_000_000,
            lemma34_grid: 20,
            lemma34_tolerance: 0.02,
            lemma35_count: 1000,
            lemma35_n_max: 50,
            lemma35_m_pool: 100_000,
            lemma36_n_max: 50,
            lemma36_n_prime_max: 600,
            ell_k_max: 30,
            ell_factor_cap: 60,
            ell_big_m_cap: 20_000,
            lemma37_m_max: 100,
            lemma37_h_factor: 30,
            lemma38_r_min: 2,
            lemma38_r_max: 8,
            lemma38_budget: 10_000_000,
            q_m_max: 10_000,
            q_h_factor: 1000,
            q2_k_max: 4,
            q_closed_m_max: 10_000,
            lemma22_samples: 500,
            lemma22_points: 40,
            lemma22_m_max: 60,
            lemma22_k_max: 1_000_000,
            compile_polys: ["x1*x2 - 6", "x1*x1 + x2*x2 - x3*x3", "x1 - 2", "x1*x1 - 2"].map(String::from).to_vec(),
            compile_bounds: CompileBounds::default(),
            compile_q_m_max: 30,
            compile_q_h_factor: 40,
            bohr41_n: 50,
            bohr41_extra_n: vec![1, 2, 3, 5, 10],
            bohr41_m_max: 100_000,
            bohr41_forward_n: vec![25, 50, 100, 200],
            bohr42_forward_n: vec![1, 2, 3, 5, 10, 25],
            bohr42_m_max: 10_000,
            bohr42_converse_n: vec![5, 10],
            bohr42_converse_m_max: 100_000,
            bohr42_converse_count: 3,
            bohr42_tries: 2,
            bohr42_finest: 16,
            bohr43_m_max: 20,
            bohr_nested_n: vec![1, 2],
            bohr44_pairs: vec![(1, 1), (3, 3), (1, 2), (1, 4), (2, 5), (3, 7)],
            bohr45_max: 12,
            bohr45_tolerance: 0.05,
            bohr45_bounded_pairs: vec![(2, 6), (2, 3), (5, 5), (1, 2), (3, 4)],
        }
    }
}

impl SuiteConfig {
    /// A scale small enough for unit tests and smoke runs.
    pub fn quick() -> Self {
        SuiteConfig {
            lemma31_samples: 500,
            lemma32_per_class: 10,
            lemma32_good_cap: 200_000,
            lemma32_bad_cap: 20_000,
            lemma33_m_max: 500,
            lemma33_n_max: 10,
            lemma34_orbit: 20_000,
            lemma34_samples: 50_000,
            lemma34_grid: 10,
            lemma34_tolerance: 0.05,
            lemma35_count: 50,
            lemma35_n_max: 30,
            lemma35_m_pool: 20_000,
            lemma36_n_max: 6,
            lemma36_n_prime_max: 80,
            ell_k_max: 8,
            ell_factor_cap: 40,
            ell_big_m_cap: 20_000,
            lemma37_m_max: 20,
            lemma37_h_factor: 20,
            lemma38_r_min: 3,
            lemma38_r_max: 4,
            lemma38_budget: 1_000_000,
            q_m_max: 200,
            q_h_factor: 100,
            q2_k_max: 2,
            q_closed_m_max: 200,
            lemma22_samples: 40,
            lemma22_points: 10,
            compile_polys: ["x1*x2 - 6", "x1 - 2", "x1*x1 - 2"].map(String::from).to_vec(),
            compile_bounds: CompileBounds { m_bound: 10, y_bound: 40, z_bound: 2000 },
            compile_q_m_max: 10,
            compile_q_h_factor: 20,
            bohr41_m_max: 20_000,
            bohr41_extra_n: vec![2],
            bohr41_forward_n: vec![5, 10],
            bohr42_forward_n: vec![1, 5],
            bohr42_m_max: 500,
            bohr42_converse_n: vec![5],
            bohr42_converse_count: 1,
            bohr43_m_max: 4,
            bohr_nested_n: vec![1],
            bohr44_pairs: vec![(1, 1), (1, 2)],
            bohr45_max: 4,
            bohr45_bounded_pairs: vec![(2, 6)],
            ..SuiteConfig::default()
        }
    }
}

/// Shared state, built on first use: the sequence, its calibration and
/// checker, the generated Q, and the Bohr-set checker.
pub struct Suite {
    cfg: SuiteConfig,
    g: Arc<TheoremA>,
    calibration: OnceLock<Calibration>,
    checker: OnceLock<Arc<TheoremAChecker>>,
    q: OnceLock<Arc<QSet>>,
    compile_q: OnceLock<Arc<QSet>>,
    bohr: OnceLock<BohrChecker>,
}

impl Suite {
    pub fn new(cfg: SuiteConfig) -> Result<Self, SuiteError> {
        cfg.bounds.validate()?;
        cfg.bohr_bounds.validate()?;
        Ok(Suite {
            cfg,
            g: Arc::new(theorem_a_default()),
            calibration: OnceLock::new(),
            checker: OnceLock::new(),
            q: OnceLock::new(),
            compile_q: OnceLock::new(),
            bohr: OnceLock::new(),
        })
    }

    pub fn config(&self) -> &SuiteConfig {
        &self.cfg
    }

    fn get_or_try<T: Clone>(cell: &OnceLock<T>, f: impl FnOnce() -> Result<T, SuiteError>) -> Result<T, SuiteError> {
        if let Some(v) = cell.get() {
            return Ok(v.clone());
        }
        let v = f()?;
        Ok(cell.get_or_init(|| v).clone())
    }

    /// Calibration records are produced once; later calls reuse C.
    fn calibrate(&self) -> Result<(Calibration, Vec<Record>), SuiteError> {
        if let Some(c) = self.calibration.get() {
            return Ok((c.clone(), Vec::new()));
        }
        let (cal, recs) = fo_h::lemma31(&self.g, self.cfg.lemma31_samples, self.cfg.seed)?;
        Ok((self.calibration.get_or_init(|| cal).clone(), recs))
    }

    pub fn checker(&self) -> Result<Arc<TheoremAChecker>, SuiteError> {
        Self::get_or_try(&self.checker, || {
            let (cal, _) = self.calibrate()?;
            Ok(Arc::new(TheoremAChecker::new(self.g.clone(), cal.c, self.cfg.bounds.clone())?))
        })
    }

    pub fn q(&self) -> Result<Arc<QSet>, SuiteError> {
        Self::get_or_try(&self.q, || Ok(Arc::new(build_q(&*self.checker()?, self.cfg.q_m_max, self.cfg.q_h_factor)?)))
    }

    pub fn compile_q(&self) -> Result<Arc<QSet>, SuiteError> {
        Self::get_or_try(&self.compile_q, || {
            let q = build_q(&*self.checker()?, self.cfg.compile_q_m_max, self.cfg.compile_q_h_factor)?;
            Ok(Arc::new(q.close_pm()))
        })
    }

    pub fn bohr(&self) -> Result<&BohrChecker, SuiteError> {
        if let Some(b) = self.bohr.get() {
            return Ok(b);
        }
        let b = BohrChecker::new(bohr_params(), self.cfg.bohr_bounds.clone())?;
        Ok(self.bohr.get_or_init(|| b))
    }

    /// Records of one section; `id` as accepted by [`section_id`].
    pub fn section(&self, id: &str) -> Result<Vec<Record>, SuiteError> {
        let id = section_id(id).ok_or_else(|| SuiteError::UnknownSection(id.to_string()))?;
        let c = &self.cfg;
        Ok(match id {
            "2.1" => {
                let polys: Vec<&str> = c.compile_polys.iter().map(String::as_str).collect();
                wm_h::compile_checks(self.compile_q()?, &polys, &c.compile_bounds)?
            }
            "2.2" => wm_h::lemma22(c.lemma22_samples, c.lemma22_points, c.lemma22_m_max, c.lemma22_k_max, c.seed)?,
            "3.1" => {
                let (cal, recs) = fo_h::lemma31(&self.g, c.lemma31_samples, c.seed)?;
                let _ = self.calibration.set(cal);
                recs
            }
            "3.2" => fo_h::lemma32(&*self.checker()?, c.lemma32_per_class, c.lemma32_good_cap, c.lemma32_bad_cap, c.seed),
            "3.3" => fo_h::lemma33(&*self.checker()?, c.lemma33_m_max, c.lemma33_n_max),
            "3.4" => {
                let alpha = AlgebraicReal::theta(&cube_root_two());
                fo_h::lemma34(
                    &alpha,
                    (1, 2, 3, 1),
                    c.lemma34_orbit,
                    c.lemma34_samples,
                    c.lemma34_grid,
                    c.lemma34_tolerance,
                    c.seed,
                )?
            }
            "3.5/3.6" => {
                let chk = self.checker()?;
                let mut out = fo_h::lemma35_converse(&chk, c.lemma35_count, c.lemma35_n_max, c.lemma35_m_pool, c.seed);
                out.extend(fo_h::lemma36(&chk, c.lemma36_n_max, c.lemma36_n_prime_max));
                let bounds = BoundProfile { big_m_cap: c.ell_big_m_cap, ..c.bounds.clone() };
                let wide = TheoremAChecker::new(self.g.clone(), chk.c(), bounds)?;
                out.extend(fo_h::ell_crosscheck(&wide, c.ell_k_max, c.ell_factor_cap)?);
                out
            }
            "3.7" => fo_h::lemma37(&*self.checker()?, c.lemma37_m_max, c.lemma37_h_factor)?,
            "3.8" => fo_h::lemma38(&*self.checker()?, c.lemma38_r_min..=c.lemma38_r_max, c.lemma38_budget)?,
            "Q1" => {
                let q = self.q()?;
                vec![wm_h::q1(&q), wm_h::q1_closure(&q)]
            }
            "Q2" => vec![wm_h::q2(&*self.q()?, c.q2_k_max)],
            "Q" => wm_h::q_closed_form(&*self.checker()?, &*self.q()?, c.q_closed_m_max.min(c.q_m_max), c.q_h_factor)?,
            "4.1" => {
                let b = self.bohr()?;
                let mut out = vec![bohr_h::lemma41_converse(b, c.bohr41_n, c.bohr41_m_max)?];
                for &n in &c.bohr41_extra_n {
                    out.push(bohr_h::lemma41_converse(b, n, c.bohr41_m_max)?);
                }
                out.extend(bohr_h::lemma41_forward(b, &c.bohr41_forward_n, c.bohr41_m_max));
                out
            }
            "4.2" => {
                let b = self.bohr()?;
                let mut out = bohr_h::lemma42_forward(b, &c.bohr42_forward_n, c.bohr42_m_max);
                out.extend(bohr_h::lemma42_converse(
                    b,
                    &c.bohr42_converse_n,
                    c.bohr42_converse_m_max,
                    c.bohr42_converse_count,
                    c.bohr42_tries,
                    c.bohr42_finest,
                )?);
                out
            }
            "4.3" => {
                let ms: Vec<i64> = (1..=c.bohr43_m_max).collect();
                bohr_h::lemma43(self.bohr()?, &ms, &c.bohr_nested_n)?
            }
            "4.4" => bohr_h::lemma44(self.bohr()?, &c.bohr44_pairs, &c.bohr_nested_n)?,
            "4.5" => {
                let b = self.bohr()?;
                let mut out = bohr_h::lemma45(b, c.bohr45_max, c.bohr45_tolerance)?;
                out.extend(bohr_h::lemma45_bounded(b, &c.bohr45_bounded_pairs)?);
                out
            }
            _ => unreachable!("section ids are validated"),
        })
    }

    /// Records of one section, with wall-clock time attached when `timing` is set.
    pub fn section_timed(&self, id: &str, timing: bool) -> Result<Vec<Record>, SuiteError> {
        let mut err = None;
        let out = timed(timing, || self.section(id).unwrap_or_else(|e| {
            err = Some(e);
            Vec::new()
        }));
        match err {
            Some(e) => Err(e),
            None => Ok(out),
        }
    }

    /// Every section in [`SECTIONS`] order.
    pub fn run_all(&self, timing: bool, threads: usize) -> Result<Vec<Record>, SuiteError> {
        self.run_sections(&SECTIONS, timing, threads)
    }

    /// The given sections on up to `threads` workers. Records come back in
    /// the order of `ids` whatever the thread count.
    pub fn run_sections(&self, ids: &[&str], timing: bool, threads: usize) -> Result<Vec<Record>, SuiteError> {
        let threads = threads.clamp(1, ids.len().max(1));
        let slots: Vec<Mutex<Option<Result<Vec<Record>, SuiteError>>>> = ids.iter().map(|_| Mutex::new(None)).collect();
        let next = AtomicUsize::new(0);
        let work = || loop {
            let i = next.fetch_add(1, Ordering::Relaxed);
            let Some(id) = ids.get(i) else { break };
            let r = self.section_timed(id, timing);
            *slots[i].lock().expect("slot lock") = Some(r);
        };
        if threads == 1 {
            work();
        } else {
            std::thread::scope(|s| {
                for _ in 0..threads {
                    s.spawn(work);
                }
            });
        }
        let mut out = Vec::new();
        for slot in slots {
            out.extend(slot.into_inner().expect("slot lock").expect("every section ran")?);
        }
        Ok(out)
    }
}
