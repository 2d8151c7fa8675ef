//! Classification of triples by the vanishing of Δ°²g for g(n) = ⌊βn⌊αn⌉⌉.

use std::collections::BTreeMap;

use num_traits::Zero;
use serde::Serialize;

use super::calculus::delta_sym_iter;
use super::seq::{IntSequence, TheoremA};
use crate::numeric::AlgebraicReal;

/// Which index pairs enter γ_I = Σ ⦃βn_i⌊αn_j⌉⦄.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum GammaMode {
    /// All ordered pairs i, j ∈ I, diagonal included.
    AllPairs,
    /// Ordered pairs with i ≠ j only.
    OffDiagonal,
}

impl GammaMode {
    pub fn opposite(self) -> Self {
        match self {
            GammaMode::AllPairs => GammaMode::OffDiagonal,
            GammaMode::OffDiagonal => GammaMode::AllPairs,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            GammaMode::AllPairs => "all-pairs",
            GammaMode::OffDiagonal => "off-diagonal",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Lemma31Report {
    pub triple: [i64; 3],
    pub lhs: i128,
    pub lhs_zero: bool,
    pub cond1: bool,
    /// The γ identity under `mode`.
    pub cond2: bool,
    pub mode: GammaMode,
    /// γ_I for every nonempty I, keyed by the sorted index string ("01", "012", …).
    pub gammas: BTreeMap<String, AlgebraicReal>,
    /// e(n_i, n_j) for the pairs 01, 12, 20 and e(n₀, n₁, n₂).
    pub e_pairs: [i128; 3],
    pub e_triple: i128,
    /// f(n_i, n_j) for the pairs 01, 12, 20.
    pub f_pairs: [i128; 3],
}

impl Lemma31Report {
    /// True when the classification agrees with Δ°²g = 0.
    pub fn consistent(&self) -> bool {
        self.lhs_zero == (self.cond1 && self.cond2)
    }

    /// Recomputes both conditions from the stored exact values.
    pub fn recheck(&self, alpha_fracs: &[AlgebraicReal; 3]) -> (bool, bool) {
        let c1 = subsets().iter().all(|s| sum_of(alpha_fracs, s).nint().is_zero());
        let n = |k: &str| self.gammas[k].nint();
        let c2 = n("012") == n("01") + n("12") + n("02");
        (c1, c2)
    }
}

fn subsets() -> Vec<Vec<usize>> {
    (1u8..8).map(|mask| (0..3).filter(|i| mask >> i & 1 == 1).collect()).collect()
}

fn key(s: &[usize]) -> String {
    s.iter().map(|i| char::from(b'0' + *i as u8)).collect()
}

fn sum_of(v: &[AlgebraicReal; 3], s: &[usize]) -> AlgebraicReal {
    let mut acc = AlgebraicReal::zero(v[0].field());
    for &i in s {
        acc = &acc + &v[i];
    }
    acc
}

/// ⦃αn_i⦄ for the three entries.
pub fn alpha_fracs(g: &TheoremA, t: [i64; 3]) -> [AlgebraicReal; 3] {
    t.map(|n| g.alpha().frac_signed_exact(n as i128))
}

/// γ_I for all nonempty I under the given mode.
pub fn gammas(g: &TheoremA, t: [i64; 3], mode: GammaMode) -> BTreeMap<String, AlgebraicReal> {
    let a = t.map(|n| g.a(n));
    let field = g.alpha().value().field().clone();
    let mut x = Vec::with_capacity(9);
    for i in 0..3 {
        for j in 0..3 {
            x.push(g.beta().frac_signed_exact(t[i] as i128 * a[j]));
        }
    }
    let mut out = BTreeMap::new();
    for s in subsets() {
        let mut acc = AlgebraicReal::zero(&field);
        for &i in &s {
            for &j in &s {
                if i != j || mode == GammaMode::AllPairs {
                    acc = &acc + &x[3 * i + j];
                }
            }
        }
        out.insert(key(&s), acc);
    }
    out
}

fn e_of(g: &TheoremA, ns: &[i64]) -> i128 {
    let total: i64 = ns.iter().sum();
    g.a(total) - ns.iter().map(|&n| g.a(n)).sum::<i128>()
}

fn f_of(g: &TheoremA, n: i64, m: i64) -> i128 {
    let e = e_of(g, &[n, m]);
    let b = g.beta();
    let nb = |k: i128| b.nint_mul(k).expect("value out of range");
    let dg = g.at(n + m) - g.at(n) - g.at(m);
    dg - nb(n as i128 * g.a(m)) - nb(m as i128 * g.a(n)) - nb((n + m) as i128) * e
}

pub fn lemma31_classify(g: &TheoremA, t: [i64; 3], mode: GammaMode) -> Lemma31Report {
    let lhs = delta_sym_iter(g, &t).expect("three arguments");
    let fr = alpha_fracs(g, t);
    let cond1 = subsets().iter().all(|s| sum_of(&fr, s).nint().is_zero());
    let gm = gammas(g, t, mode);
    let n = |k: &str| gm[k].nint();
    let cond2 = n("012") == n("01") + n("12") + n("02");
    let [a, b, c] = t;
    Lemma31Report {
        triple: t,
        lhs,
        lhs_zero: lhs == 0,
        cond1,
        cond2,
        mode,
        gammas: gm,
        e_pairs: [e_of(g, &[a, b]), e_of(g, &[b, c]), e_of(g, &[c, a])],
        e_triple: e_of(g, &t),
        f_pairs: [f_of(g, a, b), f_of(g, b, c), f_of(g, c, a)],
    }
}

