use num_bigint::BigInt;
use num_traits::{One, ToPrimitive, Zero};

use super::SearchError;
use crate::numeric::AlgebraicReal;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CfExpansion {
    pub quotients: Vec<BigInt>,
    /// The expansion ended early because the input is rational.
    pub terminated: bool,
}

/// First `k` partial quotients by exact floor and reciprocal.
pub fn continued_fraction(x: &AlgebraicReal, k: usize) -> Result<CfExpansion, SearchError> {
    if k == 0 {
        return Err(SearchError::InvalidArgument("k must be at least 1".into()));
    }
    let mut out = Vec::with_capacity(k);
    let mut y = x.clone();
    while out.len() < k {
        let a = y.floor();
        let rest = y.add_int(-a.clone());
        out.push(a);
        if rest.is_zero() {
            return Ok(CfExpansion { quotients: out, terminated: true });
        }
        y = rest.recip()?;
    }
    Ok(CfExpansion { quotients: out, terminated: false })
}

/// Denominators q of the convergents of `x`, in increasing order, up to `max`.
pub fn convergent_denominators(x: &AlgebraicReal, max: u64) -> Vec<u64> {
    // q₋₁ = 0, q₀ = 1, q_k = a_k q_{k−1} + q_{k−2}.
    let mut out = vec![1u64];
    let (mut prev, mut cur) = (BigInt::zero(), BigInt::one());
    let mut y = x.add_int(-x.floor());
    while !y.is_zero() {
        y = match y.recip() {
            Ok(r) => r,
            Err(_) => break,
        };
        let a = y.floor();
        y = y.add_int(-a.clone());
        let next = &a * &cur + &prev;
        prev = std::mem::replace(&mut cur, next);
        match cur.to_u64() {
            Some(q) if q <= max => {
                if out.last() != Some(&q) {
                    out.push(q);
                }
            }
            _ => break,
        }
    }
    out
}
