//! The defining formulas μ, ψ, δ and π for g(n) = ⌊βn⌊αn⌉⌉, evaluated with
//! bounded quantifiers, together with ℓ, P_{m,h} and the quadratic-fit check.

use std::collections::{BTreeSet, HashMap};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};

use super::eval::{eval_formula, Relation, Structure};
use super::formula::{Cmp, Formula, Term};
use super::report::Verdict;
use super::{BoundProfile, FoError};
use crate::genpoly::{delta_sym, IntSequence, SecondDerivativeScan, TheoremA};
use crate::numeric::{AlgebraicReal, FIXED_BITS};

/// How ψ(m, N) is decided inside δ.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PsiBackend {
    /// Membership of ⦃αm⦄ in the exact window cut out by n ≤ N.
    Window,
    /// Literal conjunction of bounded μ(n, m) over n ≤ N.
    BoundedMu,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MuOutcome {
    pub holds: bool,
    pub witness: Option<i64>,
    /// The searched n₂ range (empty when lo > hi).
    pub lo: i64,
    pub hi: i64,
}

/// The open interval (−1/2 − min ⦃αn⦄, 1/2 − max ⦃αn⦄) over 1 ≤ n ≤ N,
/// stored through the indices attaining the extremes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Window {
    pub n: i64,
    pub argmin: i64,
    pub argmax: i64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaOutcome {
    pub holds: bool,
    pub verdict: Verdict,
    /// The H that made the formula true.
    pub h: Option<i64>,
    /// For a refutation: the M′ whose window defeats every M.
    pub refuting_m_prime: Option<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Progression {
    pub m: i64,
    pub h: i64,
    pub elements: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PiFailure {
    /// 3m ≤ h ≤ ℓ(m) fails.
    Range,
    ZeroSecondDifference,
    /// Δ_m²g(n) differs from Δ_m²g(m) at this n.
    NonConstant(i64),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PiOutcome {
    pub holds: bool,
    pub a: Option<i128>,
    pub failure: Option<PiFailure>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Lemma37Report {
    pub m: i64,
    pub h: i64,
    /// g agrees on P_{m,h} with the quadratic through (tm, g(tm)), t = 1, 2, 3,
    /// and that quadratic has degree exactly 2.
    pub side1: bool,
    /// Δ_m²g is a nonzero constant on P_{m,h−2m}.
    pub side2: bool,
    pub a: Option<i128>,
    /// Coefficients (c₀, c₁, c₂) of the fitted quadratic.
    pub fit: [BigRational; 3],
    /// c₂ = a/(2m²), checked when both sides hold.
    pub leading_matches: Option<bool>,
}

impl Lemma37Report {
    pub fn equivalent(&self) -> bool {
        self.side1 == self.side2 && self.leading_matches != Some(false)
    }
}

struct MClass {
    start: i64,
    members: Vec<i64>,
}

/// ⌊αn′⌉/⌊αn⌉ = n′/n ∈ N.
pub fn lemma36_characterisation(g: &TheoremA, n: i64, n_prime: i64) -> bool {
    if n == 0 || n_prime % n != 0 {
        return false;
    }
    let an = g.a(n);
    an != 0 && g.a(n_prime) * n as i128 == an * n_prime as i128
}

/// Bounded evaluation of the defining formulas for one sequence and one C.
pub struct TheoremAChecker {
    g: Arc<TheoremA>,
    c: i64,
    bounds: BoundProfile,
    windows: Mutex<Vec<Window>>,
    m_classes: OnceLock<Vec<MClass>>,
}

const HALF_FIXED: i128 = 1i128 << (FIXED_BITS - 1);

impl TheoremAChecker {
    pub fn new(g: Arc<TheoremA>, c: i64, bounds: BoundProfile) -> Result<Self, FoError> {
        bounds.validate()?;
        if c < 1 {
            return Err(FoError::PreconditionViolated("C must be at least 1".into()));
        }
        if g.alpha().is_rational() {
            return Err(FoError::PreconditionViolated("alpha must be irrational".into()));
        }
        Ok(TheoremAChecker { g, c, bounds, windows: Mutex::new(Vec::new()), m_classes: OnceLock::new() })
    }

    pub fn sequence(&self) -> &TheoremA {
        &self.g
    }

    pub fn c(&self) -> i64 {
        self.c
    }

    pub fn bounds(&self) -> &BoundProfile {
        &self.bounds
    }

    pub fn g(&self, n: i64) -> i128 {
        self.g.at(n)
    }

    /// Δ°g(n, m).
    pub fn dsym(&self, n: i64, m: i64) -> i128 {
        delta_sym(self.g.as_ref(), m, n)
    }

    /// Δ_m²g(n) = g(n+2m) − 2g(n+m) + g(n).
    pub fn second_difference(&self, m: i64, n: i64) -> i128 {
        self.g(n + 2 * m) - 2 * self.g(n + m) + self.g(n)
    }

    // ⦃αa⦄ + ⦃αb⦄ compared with ∓1/2: (sum > −1/2, sum < 1/2).
    fn frac_sum_inside(&self, a: i64, b: i64) -> (bool, bool) {
        let al = self.g.alpha();
        if let (Some(x), Some(y)) = (al.frac_signed_fixed(a as i128), al.frac_signed_fixed(b as i128)) {
            let (lo, hi) = (x.lo + y.lo, x.hi + y.hi);
            let above = if lo > -HALF_FIXED {
                Some(true)
            } else if hi <= -HALF_FIXED {
                Some(false)
            } else {
                None
            };
            let below = if hi < HALF_FIXED {
                Some(true)
            } else if lo >= HALF_FIXED {
                Some(false)
            } else {
                None
            };
            if let (Some(p), Some(q)) = (above, below) {
                return (p, q);
            }
        }
        let s = &al.frac_signed_exact(a as i128) + &al.frac_signed_exact(b as i128);
        let half = BigRational::new(1.into(), 2.into());
        (s.cmp_rational(&-half.clone()).is_gt(), s.cmp_rational(&half).is_lt())
    }

    /// |⦃αa⦄ + ⦃αb⦄| < 1/2.
    pub fn pair_condition(&self, a: i64, b: i64) -> bool {
        let (p, q) = self.frac_sum_inside(a, b);
        p && q
    }

    fn frac_cmp(&self, a: i64, b: i64) -> std::cmp::Ordering {
        let al = self.g.alpha();
        if let (Some(x), Some(y)) = (al.frac_signed_fixed(a as i128), al.frac_signed_fixed(b as i128)) {
            if x.hi < y.lo {
                return std::cmp::Ordering::Less;
            }
            if y.hi < x.lo {
                return std::cmp::Ordering::Greater;
            }
        }
        al.frac_signed_exact(a as i128).cmp_value(&al.frac_signed_exact(b as i128))
    }

    /// The window for 1 ≤ n ≤ N (N ≥ 1).
    pub fn window(&self, n: i64) -> Window {
        assert!(n >= 1, "window needs N >= 1");
        let mut w = self.windows.lock().expect("window table poisoned");
        while (w.len() as i64) < n {
            let k = w.len() as i64 + 1;
            let next = match w.last() {
                None => Window { n: 1, argmin: 1, argmax: 1 },
                Some(prev) => {
                    let mut nw = Window { n: k, ..*prev };
                    if self.frac_cmp(k, prev.argmin).is_lt() {
                        nw.argmin = k;
                    }
                    if self.frac_cmp(k, prev.argmax).is_gt() {
                        nw.argmax = k;
                    }
                    nw
                }
            };
            w.push(next);
        }
        w[(n - 1) as usize]
    }

    /// Exact endpoints (−1/2 − min⦃αn⦄, 1/2 − max⦃αn⦄).
    pub fn window_endpoints(&self, n: i64) -> (AlgebraicReal, AlgebraicReal) {
        let w = self.window(n);
        let half = BigRational::new(1.into(), 2.into());
        let al = self.g.alpha();
        let lo = (-&al.frac_signed_exact(w.argmin as i128)).add_rational(&-half.clone());
        let hi = (-&al.frac_signed_exact(w.argmax as i128)).add_rational(&half);
        (lo, hi)
    }

    fn in_window(&self, m: i64, w: &Window) -> bool {
        self.frac_sum_inside(m, w.argmin).0 && self.frac_sum_inside(m, w.argmax).1
    }

    /// ψ(m, N) through the window characterisation.
    pub fn psi_window(&self, m: i64, n: i64) -> bool {
        n < 1 || self.in_window(m, &self.window(n))
    }

    /// μ(n₀, n₁): some n₂ ∈ [C·n₁, min(n2_cap, C·n₁ + n2_span)] has Δ°²g(n₀,n₁,n₂) = 0.
    pub fn def_mu(&self, n0: i64, n1: i64) -> MuOutcome {
        let lo = self.c * n1;
        let hi = self.bounds.n2_cap.min(lo.saturating_add(self.bounds.n2_span));
        let scan = SecondDerivativeScan::new(self.g.as_ref(), n0, n1);
        let witness = (lo..=hi).find(|&n2| scan.at(n2) == 0);
        MuOutcome { holds: witness.is_some(), witness, lo, hi }
    }

    /// Largest D ≤ cap with μ(n, m) for all 1 ≤ n ≤ D.
    pub fn psi_depth(&self, m: i64, cap: i64) -> i64 {
        for n in 1..=cap {
            if !self.def_mu(n, m).holds {
                return n - 1;
            }
        }
        cap
    }

    /// ψ(m, N) as the literal conjunction of bounded μ.
    pub fn def_psi(&self, m: i64, n: i64) -> bool {
        self.psi_depth(m, n) == n.max(0)
    }

    pub fn psi(&self, backend: PsiBackend, m: i64, n: i64) -> bool {
        match backend {
            PsiBackend::Window => self.psi_window(m, n),
            PsiBackend::BoundedMu => self.def_psi(m, n),
        }
    }

    /// Distinct windows for N ∈ [1, cap] as (first N, window), ascending.
    fn window_classes(&self, cap: i64) -> Vec<Window> {
        let mut out: Vec<Window> = Vec::new();
        for n in 1..=cap {
            let w = self.window(n);
            if out.last().map_or(true, |p| (p.argmin, p.argmax) != (w.argmin, w.argmax)) {
                out.push(w);
            }
        }
        out
    }

    fn m_classes(&self) -> &[MClass] {
        self.m_classes.get_or_init(|| {
            let k = self.bounds.range_multiplier;
            self.window_classes(self.bounds.big_m_cap)
                .into_iter()
                .map(|w| MClass { start: w.n, members: (1..=k * w.n).filter(|&m| self.in_window(m, &w)).collect() })
                .collect()
        })
    }

    /// Number of m ∈ [1, K·M] with ψ(m, M), for each window class of M.
    pub fn class_sizes(&self) -> Vec<(i64, usize)> {
        self.m_classes().iter().map(|c| (c.start, c.members.len())).collect()
    }

    // Candidates m′ ∈ [1, top] that can satisfy |Δ°g(n, m′) − x| ≤ h, from
    // Δ°g(n,m′) = m′·β(αn + ⌊αn⌉ + e) + βn(e − ⦃αm′⦄) + η with
    // e ∈ {−1, 0, 1} and |η| ≤ 3/2.
    fn envelope_candidates(&self, n: i64, x: i128, h: i64, top: i64) -> Vec<i64> {
        let alpha = self.g.alpha().value().to_f64();
        let beta = self.g.beta().value().to_f64();
        let an = self.g.a(n) as f64;
        let radius = h as f64 + 1.5 * beta.abs() * n as f64 + 1.5;
        let xf = x as f64;
        let mut out = BTreeSet::new();
        for e in [-1.0, 0.0, 1.0] {
            let s = beta * (alpha * n as f64 + an + e);
            if s.abs() < 1e-3 {
                return (1..=top).collect();
            }
            let (a, b) = ((xf - radius) / s, (xf + radius) / s);
            let (a, b) = (a.min(b), a.max(b));
            let slack = 2.0 + 1e-9 * (a.abs() + b.abs());
            let lo = ((a - slack).floor() as i64).max(1);
            let hi = ((b + slack).ceil() as i64).min(top);
            out.extend(lo..=hi);
        }
        out.into_iter().collect()
    }

    // ∃m′ ∈ [1, (n′+1)m + H + n′]: ψ(m′, M′) ∧ |Δ°g(n, m′) − Δ°g(n′, m)| ≤ H.
    fn delta_inner(&self, n: i64, np: i64, h: i64, wp: &Window, m: i64) -> Option<i64> {
        let x = self.dsym(np, m);
        let top = (np + 1) * m + h + np;
        self.envelope_candidates(n, x, h, top)
            .into_iter()
            .find(|&mp| (self.dsym(n, mp) - x).abs() <= h as i128 && self.in_window(mp, wp))
    }

    /// Bounded δ(n, n′) with the ψ atoms decided by their windows:
    ///
    /// ∃H ∈ [1, H_cap] ∀M′ ∈ [1, M′_cap] ∃M ∈ [1, M_cap] ∀m ∈ [1, K·M]
    ///   ψ(m, M) ⇒ ∃m′ ∈ [1, (n′+1)m + H + n′] ψ(m′, M′) ∧ |Δ°g(n,m′) − Δ°g(n′,m)| ≤ H.
    ///
    /// ψ(·, M) only changes with the window, and within one window class the
    /// ∀m range grows with M, so each class is decided at its first M.
    pub fn def_delta(&self, n: i64, n_prime: i64) -> DeltaOutcome {
        let classes = self.m_classes();
        let mut primes = self.window_classes(self.bounds.big_m_prime_cap);
        primes.reverse();
        let mut refuting = None;
        for h in 1..=self.bounds.big_h_cap {
            let mut vacuous = false;
            let mut all = true;
            for wp in &primes {
                let mut found = false;
                // A failing m usually fails for the neighbouring classes too.
                let mut hint: Option<i64> = None;
                for cl in classes.iter().rev() {
                    if let Some(m) = hint {
                        if cl.members.binary_search(&m).is_ok() && self.delta_inner(n, n_prime, h, wp, m).is_none() {
                            continue;
                        }
                    }
                    let failing = cl.members.iter().copied().find(|&m| self.delta_inner(n, n_prime, h, wp, m).is_none());
                    if let Some(m) = failing {
                        hint = Some(m);
                    } else {
                        vacuous |= cl.members.is_empty();
                        found = true;
                        break;
                    }
                }
                if !found {
                    all = false;
                    refuting = Some(wp.n);
                    break;
                }
            }
            if all {
                let verdict = if vacuous { Verdict::CapExhausted } else { Verdict::VerifiedInRange };
                return DeltaOutcome { holds: true, verdict, h: Some(h), refuting_m_prime: None };
            }
        }
        DeltaOutcome { holds: false, verdict: Verdict::RefutedInRange, h: None, refuting_m_prime: refuting }
    }

    /// δ(n, n′) by running every quantifier over its full range, with no
    /// pruning; only usable with small caps.
    pub fn def_delta_literal(&self, n: i64, n_prime: i64, backend: PsiBackend) -> bool {
        let b = &self.bounds;
        let mut depth: HashMap<i64, i64> = HashMap::new();
        let mut psi = |m: i64, big: i64| -> bool {
            match backend {
                PsiBackend::Window => self.psi_window(m, big),
                PsiBackend::BoundedMu => {
                    let cap = b.big_m_cap.max(b.big_m_prime_cap);
                    *depth.entry(m).or_insert_with(|| self.psi_depth(m, cap)) >= big
                }
            }
        };
        'h: for h in 1..=b.big_h_cap {
            for mp_cap in 1..=b.big_m_prime_cap {
                let mut found = false;
                'big_m: for big_m in 1..=b.big_m_cap {
                    for m in 1..=b.range_multiplier * big_m {
                        if !psi(m, big_m) {
                            continue;
                        }
                        let x = self.dsym(n_prime, m);
                        let top = (n_prime + 1) * m + h + n_prime;
                        let ok = (1..=top).any(|mp| (self.dsym(n, mp) - x).abs() <= h as i128 && psi(mp, mp_cap));
                        if !ok {
                            continue 'big_m;
                        }
                    }
                    found = true;
                    break;
                }
                if !found {
                    continue 'h;
                }
            }
            return true;
        }
        false
    }

    /// μ(n₀, n₁) as a formula over the sequence symbol `g`.
    pub fn mu_formula(&self, n0: Term, n1: Term) -> Formula {
        let lo = Term::scale(self.c as i128, n1.clone());
        let span = lo.clone() + Term::int(self.bounds.n2_span as i128);
        let n2 = Term::var("n2");
        let g = |t: Term| Term::seq("g", t);
        let d2 = g(n0.clone() + n1.clone() + n2.clone()) - g(n0.clone() + n1.clone()) - g(n0.clone() + n2.clone())
            - g(n1.clone() + n2.clone())
            + g(n0)
            + g(n1)
            + g(n2)
            - g(Term::int(0));
        let cap = Term::int(self.bounds.n2_cap as i128);
        Formula::exists(
            "n2",
            lo,
            span,
            Formula::And(vec![Formula::cmp(Cmp::Le, Term::var("n2"), cap), Formula::eq(d2, Term::int(0))]),
        )
    }

    /// ψ(m, N) as a formula over the sequence symbol `g`.
    pub fn psi_formula(&self, m: Term, n: Term) -> Formula {
        Formula::forall("n", Term::int(1), n, self.mu_formula(Term::var("n"), m))
    }

    /// δ(n, n′) as a formula over `g` and a binary relation `psi`.
    pub fn delta_formula(&self, n: i64, n_prime: i64) -> Formula {
        let b = &self.bounds;
        let (n_t, np_t) = (Term::int(n as i128), Term::int(n_prime as i128));
        let g = |t: Term| Term::seq("g", t);
        let dsym = |a: Term, b: Term| g(a.clone() + b.clone()) - g(a) - g(b) + g(Term::int(0));
        let diff = dsym(n_t, Term::var("mp")) - dsym(np_t, Term::var("m"));
        let close = Formula::And(vec![
            Formula::rel("psi", vec![Term::var("mp"), Term::var("Mp")]),
            Formula::cmp(Cmp::Le, Term::Neg(Box::new(Term::var("H"))), diff.clone()),
            Formula::cmp(Cmp::Le, diff, Term::var("H")),
        ]);
        let mp_top = Term::scale(n_prime as i128 + 1, Term::var("m")) + Term::var("H") + Term::int(n_prime as i128);
        let inner = Formula::implies(
            Formula::rel("psi", vec![Term::var("m"), Term::var("M")]),
            Formula::exists("mp", Term::int(1), mp_top, close),
        );
        let all_m = Formula::forall("m", Term::int(1), Term::scale(b.range_multiplier as i128, Term::var("M")), inner);
        let ex_big_m = Formula::exists("M", Term::int(1), Term::int(b.big_m_cap as i128), all_m);
        let all_mp = Formula::forall("Mp", Term::int(1), Term::int(b.big_m_prime_cap as i128), ex_big_m);
        Formula::exists("H", Term::int(1), Term::int(b.big_h_cap as i128), all_mp)
    }

    /// A structure interpreting `g` and `psi` (with the chosen backend).
    pub fn structure(self: &Arc<Self>, backend: PsiBackend) -> Structure {
        struct Psi(Arc<TheoremAChecker>, PsiBackend);
        impl Relation for Psi {
            fn holds(&self, args: &[i128]) -> bool {
                args.len() == 2 && self.0.psi(self.1, args[0] as i64, args[1] as i64)
            }
        }
        Structure::new()
            .with_sequence("g", self.g.clone())
            .with_relation("psi", Arc::new(Psi(self.clone(), backend)))
    }

    /// δ(n, n′) through the generic evaluator.
    pub fn def_delta_formula(self: &Arc<Self>, n: i64, n_prime: i64, backend: PsiBackend) -> Result<bool, FoError> {
        eval_formula(&self.delta_formula(n, n_prime), &Vec::new(), &self.structure(backend), &self.bounds)
    }

    /// ℓ(k) = k⌊1/(2‖αk‖)⌋, exactly.
    pub fn ell(&self, k: i64) -> Result<i64, FoError> {
        if k < 1 {
            return Err(FoError::PreconditionViolated("k must be at least 1".into()));
        }
        let norm = self.g.alpha().frac_signed_exact(k as i128).abs();
        let q = norm.mul_int(2).recip()?.floor();
        let q = q.to_i64().ok_or(FoError::Overflow)?;
        k.checked_mul(q).ok_or(FoError::Overflow)
    }

    /// ℓ(k) as the n ∈ kN with δ(k, n) and ¬δ(k, n + k), using bounded δ.
    pub fn ell_via_delta(&self, k: i64, max_factor: i64) -> Option<i64> {
        (1..=max_factor).find(|&t| self.def_delta(k, t * k).holds && !self.def_delta(k, (t + 1) * k).holds).map(|t| t * k)
    }

    /// P_{m,h} = {tm : 1 ≤ t ≤ h/m}, for 1 ≤ m ≤ h ≤ ℓ(m).
    pub fn progression(&self, m: i64, h: i64) -> Result<Progression, FoError> {
        if m < 1 || h < m {
            return Err(FoError::PreconditionViolated("need 1 <= m <= h".into()));
        }
        if h > self.ell(m)? {
            return Err(FoError::PreconditionViolated("h exceeds ell(m)".into()));
        }
        Ok(Progression { m, h, elements: (1..=h / m).map(|t| t * m).collect() })
    }

    /// π(m, h): 3m ≤ h ≤ ℓ(m) and Δ_m²g is a nonzero constant on P_{m,h−2m}.
    pub fn def_pi(&self, m: i64, h: i64) -> Result<PiOutcome, FoError> {
        if m < 1 {
            return Err(FoError::PreconditionViolated("m must be at least 1".into()));
        }
        if h < 3 * m || h > self.ell(m)? {
            return Ok(PiOutcome { holds: false, a: None, failure: Some(PiFailure::Range) });
        }
        let (holds, a, failure) = self.constant_second_difference(m, h);
        Ok(PiOutcome { holds, a, failure })
    }

    fn constant_second_difference(&self, m: i64, h: i64) -> (bool, Option<i128>, Option<PiFailure>) {
        let a = self.second_difference(m, m);
        if a == 0 {
            return (false, Some(0), Some(PiFailure::ZeroSecondDifference));
        }
        for t in 2..=(h - 2 * m) / m {
            if self.second_difference(m, t * m) != a {
                return (false, Some(a), Some(PiFailure::NonConstant(t * m)));
            }
        }
        (true, Some(a), None)
    }

    /// Largest t ≤ t_cap with π(m, tm), if any.
    pub fn max_admissible_factor(&self, m: i64, t_cap: i64) -> Result<Option<i64>, FoError> {
        let top = t_cap.min(self.ell(m)? / m);
        if top < 3 {
            return Ok(None);
        }
        let a = self.second_difference(m, m);
        if a == 0 {
            return Ok(None);
        }
        let mut t = 3;
        while t < top && self.second_difference(m, (t - 1) * m) == a {
            t += 1;
        }
        Ok(Some(t))
    }

    /// Both sides of the quadratic-progression equivalence, evaluated independently.
    pub fn verify_lemma37(&self, m: i64, h: i64) -> Result<Lemma37Report, FoError> {
        if m < 1 || h < 3 * m || h > self.ell(m)? {
            return Err(FoError::PreconditionViolated("need 3m <= h <= ell(m)".into()));
        }
        let r = |v: i128| BigRational::from_integer(BigInt::from(v));
        let (y1, y2, y3) = (r(self.g(m)), r(self.g(2 * m)), r(self.g(3 * m)));
        let mm = r(m as i128);
        let c2 = (&y3 - &y2 * r(2) + &y1) / (r(2) * &mm * &mm);
        let c1 = (&y2 - &y1 - r(3) * &c2 * &mm * &mm) / &mm;
        let c0 = &y1 - &c2 * &mm * &mm - &c1 * &mm;
        let side1 = !c2.is_zero()
            && (1..=h / m).all(|t| {
                let x = r((t * m) as i128);
                &c2 * &x * &x + &c1 * &x + &c0 == r(self.g(t * m))
            });
        let (side2, a, _) = self.constant_second_difference(m, h);
        let leading_matches = match (side1, side2, a) {
            (true, true, Some(a)) => Some(c2 == r(a) / (r(2) * &mm * &mm)),
            _ => None,
        };
        Ok(Lemma37Report { m, h, side1, side2, a: if side2 { a } else { None }, fit: [c0, c1, c2], leading_matches })
    }
}
