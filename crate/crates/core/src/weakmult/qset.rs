//! Sets of multiplicative quadruples (m, a, b, c) and the partial products ×_m.

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;

use super::WeakMultError;
use crate::fo::{FoError, Relation, TheoremAChecker};

pub type Quad = (i128, i128, i128, i128);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Provenance {
    GeneratedFromG,
    SyntheticExact,
    Imported,
}

#[derive(Clone, Debug, PartialEq, Eq)]
enum Store {
    Explicit(BTreeSet<Quad>),
    /// Every (m, km, lm, klm) with 1 ≤ m ≤ m_max and |k|, |l| ≤ k_max.
    Rule { m_max: i128, k_max: i128 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QSet {
    store: Store,
    pub provenance: Provenance,
    /// Generation bounds (m_max, largest h/m considered), when known.
    pub bounds: Option<(i64, i64)>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Q1Report {
    pub checked: usize,
    pub violations: Vec<Quad>,
}

impl Q1Report {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }
}

/// (m, a, b, c) = (m, km, lm, klm) for integers k, l.
pub fn has_q1_shape(&(m, a, b, c): &Quad) -> bool {
    m != 0 && a % m == 0 && b % m == 0 && c % m == 0 && (a / m).checked_mul(b / m) == Some(c / m)
}

impl QSet {
    pub fn explicit(quads: BTreeSet<Quad>, provenance: Provenance, bounds: Option<(i64, i64)>) -> Self {
        QSet { store: Store::Explicit(quads), provenance, bounds }
    }

    pub fn empty() -> Self {
        Self::explicit(BTreeSet::new(), Provenance::GeneratedFromG, Some((0, 0)))
    }

    /// All (m, km, lm, klm) with 1 ≤ m ≤ m_max and |k|, |l| ≤ k_max, ignoring g.
    pub fn synthetic(m_max: i64, k_max: i64) -> Self {
        QSet {
            store: Store::Rule { m_max: m_max as i128, k_max: k_max as i128 },
            provenance: Provenance::SyntheticExact,
            bounds: Some((m_max, k_max)),
        }
    }

    pub fn contains(&self, q: &Quad) -> bool {
        match &self.store {
            Store::Explicit(s) => s.contains(q),
            Store::Rule { m_max, k_max } => {
                let (m, a, b, _) = *q;
                (1..=*m_max).contains(&m)
                    && has_q1_shape(q)
                    && (a / m).abs() <= *k_max
                    && (b / m).abs() <= *k_max
            }
        }
    }

    /// Number of quadruples (computed for rule-based sets).
    pub fn len(&self) -> usize {
        match &self.store {
            Store::Explicit(s) => s.len(),
            Store::Rule { m_max, k_max } => (*m_max * (2 * k_max + 1) * (2 * k_max + 1)) as usize,
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// All quadruples in ascending order.
    pub fn iter(&self) -> Box<dyn Iterator<Item = Quad> + '_> {
        match &self.store {
            Store::Explicit(s) => Box::new(s.iter().copied()),
            Store::Rule { m_max, k_max } => {
                let k = *k_max;
                Box::new((1..=*m_max).flat_map(move |m| {
                    (-k..=k).flat_map(move |i| (-k..=k).map(move |j| (m, i * m, j * m, i * j * m)))
                }))
            }
        }
    }

    /// Distinct moduli, ascending.
    pub fn moduli(&self) -> Vec<i128> {
        match &self.store {
            Store::Explicit(s) => {
                let mut out: Vec<i128> = Vec::new();
                for q in s {
                    if out.last() != Some(&q.0) {
                        out.push(q.0);
                    }
                }
                out
            }
            Store::Rule { m_max, .. } => (1..=*m_max).collect(),
        }
    }

    /// a ×_m b: Some(ab/m) iff m | ab and (m, a, b, ab/m) ∈ Q.
    pub fn times_m(&self, m: i128, a: i128, b: i128) -> Result<Option<i128>, WeakMultError> {
        if m == 0 {
            return Err(WeakMultError::ZeroModulus);
        }
        let Some(ab) = a.checked_mul(b) else { return Ok(None) };
        if ab % m != 0 {
            return Ok(None);
        }
        let c = ab / m;
        Ok(self.contains(&(m, a, b, c)).then_some(c))
    }

    /// Exhaustive structural check of every stored quadruple.
    pub fn check_q1(&self) -> Q1Report {
        let mut r = Q1Report::default();
        for q in self.iter() {
            r.checked += 1;
            if !has_q1_shape(&q) {
                r.violations.push(q);
            }
        }
        r
    }

    /// Smallest modulus m with (m, km, lm, klm) ∈ Q for every (k, l) ∈ F.
    pub fn check_q2(&self, f: &[(i128, i128)]) -> Option<i128> {
        self.moduli().into_iter().find(|&m| {
            f.iter().all(|&(k, l)| match (k.checked_mul(m), l.checked_mul(m), (k * l).checked_mul(m)) {
                (Some(a), Some(b), Some(c)) => self.contains(&(m, a, b, c)),
                _ => false,
            })
        })
    }

    /// {(m, σa, τb, στc) : σ, τ = ±1}.
    pub fn close_pm(&self) -> QSet {
        match &self.store {
            Store::Rule { .. } => self.clone(),
            Store::Explicit(s) => {
                let mut out = s.clone();
                for &(m, a, b, c) in s {
                    out.insert((m, -a, b, -c));
                    out.insert((m, a, -b, -c));
                    out.insert((m, -a, -b, c));
                }
                QSet { store: Store::Explicit(out), provenance: self.provenance, bounds: self.bounds }
            }
        }
    }

    /// Sorted `m,a,b,c` lines.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        for (m, a, b, c) in self.iter() {
            s.push_str(&format!("{m},{a},{b},{c}\n"));
        }
        s
    }

    pub fn from_csv(text: &str) -> Result<QSet, WeakMultError> {
        let mut quads = BTreeSet::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() {
                continue;
            }
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            if fields.len() != 4 {
                return Err(WeakMultError::Csv { line: i + 1, message: format!("expected 4 fields, found {}", fields.len()) });
            }
            let mut v = [0i128; 4];
            for (slot, f) in v.iter_mut().zip(&fields) {
                *slot = f.parse().map_err(|_| WeakMultError::Csv { line: i + 1, message: format!("not an integer: `{f}`") })?;
            }
            quads.insert((v[0], v[1], v[2], v[3]));
        }
        Ok(QSet::explicit(quads, Provenance::Imported, None))
    }
}

/// Q from its definition: for each m ≤ m_max take the largest admissible
/// h ≤ h_factor_max·m (π is monotone in h), then every a, b, c
/// with a, b, a+b, m+c ∈ P_{m,h} and Δ°g(m, c) = Δ°g(a, b).
pub fn build_q(chk: &TheoremAChecker, m_max: i64, h_factor_max: i64) -> Result<QSet, FoError> {
    let mut quads = BTreeSet::new();
    for m in 1..=m_max {
        let Some(t) = chk.max_admissible_factor(m, h_factor_max)? else { continue };
        let p = chk.progression(m, t * m)?;
        let mut by_value: HashMap<i128, Vec<i64>> = HashMap::new();
        for &c in p.elements.iter().filter(|&&c| c + m <= t * m) {
            by_value.entry(chk.dsym(m, c)).or_default().push(c);
        }
        for (i, &a) in p.elements.iter().enumerate() {
            for &b in &p.elements[..p.elements.len() - i - 1] {
                for &c in by_value.get(&chk.dsym(a, b)).map_or(&[][..], |v| v.as_slice()) {
                    quads.insert((m as i128, a as i128, b as i128, c as i128));
                }
            }
        }
    }
    Ok(QSet::explicit(quads, Provenance::GeneratedFromG, Some((m_max, h_factor_max))))
}

/// Q as a relation symbol for the formula evaluator; the last argument is
/// determined by the first three.
impl Relation for QSet {
    fn holds(&self, args: &[i128]) -> bool {
        args.len() == 4 && self.contains(&(args[0], args[1], args[2], args[3]))
    }

    fn last_candidates(&self, args: &[i128]) -> Option<Vec<i128>> {
        if args.len() != 3 || args[0] == 0 {
            return None;
        }
        Some(self.times_m(args[0], args[1], args[2]).ok().flatten().into_iter().collect())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_product() {
        let q = QSet::explicit([(2, 4, 6, 12)].into_iter().collect(), Provenance::Imported, None);
        assert_eq!(q.times_m(2, 4, 6).unwrap(), Some(12));
        assert_eq!(q.times_m(2, 6, 4).unwrap(), None);
        assert_eq!(q.times_m(4, 1, 3).unwrap(), None);
        assert!(matches!(q.times_m(0, 1, 1), Err(WeakMultError::ZeroModulus)));
    }

    #[test]
    fn rule_set_matches_its_enumeration() {
        let q = QSet::synthetic(3, 2);
        let listed: Vec<Quad> = q.iter().collect();
        assert_eq!(listed.len(), q.len());
        assert!(listed.iter().all(|x| q.contains(x)));
        assert!(!q.contains(&(2, 6, 2, 6)));
        assert!(!q.contains(&(4, 4, 4, 4)));
    }
}
