//! Witness sequences: λ witnesses from equidistribution targets, and the
//! sequences behind the divisibility characterisation.

use num_integer::Integer;
use num_rational::BigRational;
use num_traits::FromPrimitive;
use serde::Serialize;

use super::{approx, BohrChecker, BohrError};
use crate::numeric::AlgebraicReal;
use crate::search::{find_weyl_witness, SearchBudget, WeylTarget};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn pow2_inv(i: u32) -> BigRational {
    BigRational::new(1.into(), num_bigint::BigInt::from(1u8) << i as usize)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SequenceTerm {
    pub n: i64,
    /// Schedule bound εᵢ = 2^−i.
    pub eps: f64,
    pub norm_2am_n: f64,
    pub norm_an2: f64,
    pub norm_2am_tilde_n: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DivisibilityReport {
    pub m: i64,
    pub m_tilde: i64,
    /// m̃/m = a/b in lowest terms.
    pub a: i64,
    pub b: i64,
    pub divides: bool,
    pub terms: Vec<SequenceTerm>,
    /// Largest ‖2αm̃nᵢ‖ over the last two terms.
    pub tail_max: f64,
    /// ‖1/b‖, the limit the construction aims at.
    pub target: f64,
    /// Distance of the tail from the target.
    pub tail_error: f64,
    /// Tail below 1/(2m), half the smallest possible nonzero limit.
    pub tail_to_zero: bool,
    /// Both schedule conditions hold exactly on every term.
    pub schedule_holds: bool,
}

impl DivisibilityReport {
    /// The tail verdict matches m | m̃.
    pub fn agrees(&self) -> bool {
        self.schedule_holds && self.tail_to_zero == self.divides
    }
}

impl BohrChecker {
    /// A sequence n₁ < … < n_k with ‖2αmnᵢ‖ < εᵢ and ‖αnᵢ²‖ < εᵢ, built so that
    /// ⦃2αm̃nᵢ⦄ → 1/b when m̃/m = a/b with b > 1; tail behaviour reported.
    pub fn divisibility_sequence_check(&self, m: i64, m_tilde: i64) -> Result<DivisibilityReport, BohrError> {
        if m < 1 || m_tilde < 1 {
            return Err(BohrError::PreconditionViolated("need m, m~ >= 1".into()));
        }
        let g0 = m.gcd(&m_tilde);
        let (a, b) = (m_tilde / g0, m / g0);
        // 2αm n = b·(2αg₀n) and 2αm̃ n = a·(2αg₀n); aiming ⦃2αg₀n⦄ at c/b with
        // ac ≡ 1 (mod b) puts 2αmn near an integer and ⦃2αm̃n⦄ near 1/b.
        let c = if b == 1 { 0 } else { (1..b).find(|c| (a * c) % b == 1).expect("a, b coprime") };
        let w = a.max(b);
        let field = self.params.alpha.field().clone();
        let two_alpha_g = self.params.alpha.mul_int(2 * g0);
        let budget = SearchBudget::exhaustive(self.bounds.search_budget);
        let mut terms = Vec::new();
        let mut schedule_holds = true;
        let mut start = 1;
        for i in 1..=self.bounds.seq_len {
            let eps = pow2_inv(i);
            let centre = rat(c, b);
            let spread = &eps / BigRational::from_integer(w.into());
            let mut targets = Vec::new();
            if spread < rat(1, 2) {
                targets.push(WeylTarget::monomial(&two_alpha_g, 1, &centre - &spread, &centre + &spread)?);
            }
            if eps < rat(1, 2) {
                targets.push(WeylTarget::monomial(&self.params.alpha, 2, -eps.clone(), eps.clone())?);
            }
            let n = find_weyl_witness(&targets, start, &budget)?;
            start = n + 1;
            let eps_t = AlgebraicReal::from_rational(&field, eps.clone());
            let (n2am, nan2) = (self.norm((2 * m as i128) * n as i128), self.norm_am2(n));
            schedule_holds &= n2am.lt(&eps_t) && nan2.lt(&eps_t);
            terms.push(SequenceTerm {
                n,
                eps: approx(&eps_t),
                norm_2am_n: approx(&n2am),
                norm_an2: approx(&nan2),
                norm_2am_tilde_n: approx(&self.norm((2 * m_tilde as i128) * n as i128)),
            });
        }
        let tail = &terms[terms.len().saturating_sub(2)..];
        let tail_max = tail.iter().map(|t| t.norm_2am_tilde_n).fold(0.0, f64::max);
        let target = if b == 1 { 0.0 } else { (1.0 / b as f64).min(1.0 - 1.0 / b as f64) };
        let tail_error = tail.iter().map(|t| (t.norm_2am_tilde_n - target).abs()).fold(0.0, f64::max);
        Ok(DivisibilityReport {
            m,
            m_tilde,
            a,
            b,
            divides: m_tilde % m == 0,
            terms,
            tail_max,
            target,
            tail_error,
            tail_to_zero: tail_max < 1.0 / (2.0 * m as f64),
            schedule_holds,
        })
    }

    /// A witness n for λ(m, N) found from the targets
    /// ‖αn²‖ < d/2 and |⦃2αn⦄ + ⦃αm²⦄/m| < d/2m for d = 2^−3 … 2^−`finest`,
    /// each candidate verified exactly.
    pub fn lambda_witness(&self, m: i64, big_n: i64, tries_per_scale: usize, finest: u32) -> Result<Option<i64>, BohrError> {
        if m < 1 || big_n < 1 {
            return Err(BohrError::PreconditionViolated("need m, N >= 1".into()));
        }
        let two_alpha = self.params.alpha.mul_int(2);
        let shift = approx(&self.alpha.frac_signed_exact((m as i128) * (m as i128))) / m as f64;
        let centre = BigRational::from_f64(-shift).expect("finite");
        let budget = SearchBudget::exhaustive(self.bounds.search_budget);
        for k in 3..=finest.max(3) {
            let d = pow2_inv(k);
            let half = &d / BigRational::from_integer(2.into());
            let arc = &half / BigRational::from_integer(m.into());
            let targets = [
                WeylTarget::monomial(&self.params.alpha, 2, -half.clone(), half.clone())?,
                WeylTarget::monomial(&two_alpha, 1, &centre - &arc, &centre + &arc)?,
            ];
            let mut start = 1;
            for _ in 0..tries_per_scale {
                let n = match find_weyl_witness(&targets, start, &budget) {
                    Ok(n) => n,
                    Err(_) => break,
                };
                if self.mu_unchecked(n, big_n) && self.mu_unchecked(n + m, big_n) {
                    return Ok(Some(n));
                }
                start = n + 1;
            }
        }
        Ok(None)
    }
}
