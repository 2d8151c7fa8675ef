//! Certified fast paths for ⌊kx⌋, ⌊kx⌉ and ⦃kx⦄ with integer k.
//!
//! The fractional part of x is stored as a 128-bit fixed-point lower bound.
//! Each result carries the propagated error; when the error interval touches
//! a rounding boundary the computation falls back to exact field arithmetic,
//! so every answer is exact.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::algebraic::AlgebraicReal;
use super::poly::floor_rat;
use super::NumericError;

/// Fractional bits of [`Fixed`] values.
pub const FIXED_BITS: u32 = 124;

/// Closed interval [lo, hi]·2^−124 (so values in [−8, 8) are representable).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fixed {
    pub lo: i128,
    pub hi: i128,
}

impl Fixed {
    pub fn point(v: i128) -> Self {
        Fixed { lo: v, hi: v }
    }

    /// `Some(true)` if every point of `self` is below every point of `o`.
    pub fn lt(&self, o: &Fixed) -> Option<bool> {
        if self.hi < o.lo {
            Some(true)
        } else if self.lo >= o.hi {
            Some(false)
        } else {
            None
        }
    }

    pub fn neg(&self) -> Fixed {
        Fixed { lo: -self.hi, hi: -self.lo }
    }

    pub fn to_f64(&self) -> f64 {
        let mid = self.lo / 2 + self.hi / 2;
        mid as f64 / 2f64.powi(FIXED_BITS as i32)
    }

    /// Enclosure of a field element of absolute value below 8.
    pub fn of(x: &AlgebraicReal) -> Option<Fixed> {
        let scaled = x.mul_int(BigInt::one() << FIXED_BITS as usize);
        let fl = scaled.floor();
        let lo = fl.to_i128()?;
        let hi = if x.is_rational() && scaled.as_rational().is_some_and(|q| q.is_integer()) {
            lo
        } else {
            lo.checked_add(1)?
        };
        Some(Fixed { lo, hi })
    }

    pub fn of_rational(q: &BigRational) -> Option<Fixed> {
        let scaled = q * BigRational::from_integer(BigInt::one() << FIXED_BITS as usize);
        let lo = floor_rat(&scaled).to_i128()?;
        let hi = if scaled.is_integer() { lo } else { lo.checked_add(1)? };
        Some(Fixed { lo, hi })
    }
}

/// A comparison threshold with both exact and fixed-point forms.
#[derive(Clone, Debug)]
pub struct Threshold {
    pub exact: AlgebraicReal,
    pub fixed: Option<Fixed>,
}

impl Threshold {
    pub fn new(exact: AlgebraicReal) -> Self {
        let fixed = Fixed::of(&exact);
        Threshold { exact, fixed }
    }
}

fn wide_mul(a: u128, b: u128) -> (u128, u128) {
    let mask = u64::MAX as u128;
    let (a0, a1) = (a & mask, a >> 64);
    let (b0, b1) = (b & mask, b >> 64);
    let p00 = a0 * b0;
    let p01 = a0 * b1;
    let p10 = a1 * b0;
    let p11 = a1 * b1;
    let mid = (p00 >> 64) + (p01 & mask) + (p10 & mask);
    let lo = (p00 & mask) | (mid << 64);
    let hi = p11 + (p01 >> 64) + (p10 >> 64) + (mid >> 64);
    (hi, lo)
}

#[derive(Clone, Debug)]
enum Kind {
    /// The value, plus (numerator, denominator) when both fit in i64.
    Rational(BigRational, Option<(i128, i128)>),
    Irrational { int_part: i128, frac: u128 },
}

/// Multiplier for a fixed field element x.
#[derive(Clone, Debug)]
pub struct FracMul {
    exact: AlgebraicReal,
    kind: Kind,
}

const HALF: u128 = 1u128 << 127;

impl FracMul {
    pub fn new(x: &AlgebraicReal) -> Result<Self, NumericError> {
        if let Some(q) = x.as_rational() {
            let small = match (q.numer().to_i64(), q.denom().to_i64()) {
                (Some(n), Some(d)) => Some((n as i128, d as i128)),
                _ => None,
            };
            return Ok(FracMul { exact: x.clone(), kind: Kind::Rational(q, small) });
        }
        let ip = x.floor();
        let int_part = ip.to_i128().ok_or(NumericError::Overflow)?;
        let f = x.add_int(-ip);
        let scaled = f.mul_int(BigInt::one() << 128usize).floor();
        let frac = scaled.to_u128().ok_or(NumericError::Overflow)?;
        Ok(FracMul { exact: x.clone(), kind: Kind::Irrational { int_part, frac } })
    }

    pub fn value(&self) -> &AlgebraicReal {
        &self.exact
    }

    pub fn is_rational(&self) -> bool {
        matches!(self.kind, Kind::Rational(..))
    }

    fn exact_times(&self, k: i128) -> AlgebraicReal {
        self.exact.mul_int(k)
    }

    /// ⌊k·f⌋ for k ≥ 0 where f is the fractional part, if certified.
    fn floor_frac_pos(frac: u128, k: u128, offset: u128) -> Option<u128> {
        let (h, l) = wide_mul(k, frac);
        let (l2, carry) = l.overflowing_add(offset);
        let h2 = h + carry as u128;
        l2.checked_add(k).map(|_| h2)
    }

    /// ⌊kx⌋.
    pub fn floor_mul(&self, k: i128) -> Result<i128, NumericError> {
        match &self.kind {
            Kind::Rational(q, small) => {
                if let Some(v) = small.and_then(|(n, d)| Some(n.checked_mul(k)?.div_euclid(d))) {
                    return Ok(v);
                }
                rat_floor_i128(&(q * BigRational::from_integer(k.into())))
            }
            Kind::Irrational { int_part, frac } => {
                let base = k.checked_mul(*int_part).ok_or(NumericError::Overflow)?;
                let j = k.unsigned_abs();
                match Self::floor_frac_pos(*frac, j, 0) {
                    Some(h) => {
                        let h = i128::try_from(h).map_err(|_| NumericError::Overflow)?;
                        let part = if k >= 0 { h } else { -h - 1 };
                        base.checked_add(part).ok_or(NumericError::Overflow)
                    }
                    None => self.exact_times(k).floor().to_i128().ok_or(NumericError::Overflow),
                }
            }
        }
    }

    /// ⌊kx⌉ = ⌊kx + 1/2⌋.
    pub fn nint_mul(&self, k: i128) -> Result<i128, NumericError> {
        match &self.kind {
            Kind::Rational(q, small) => {
                // ⌊nk/d + 1/2⌋ = ⌊(2nk + d)/2d⌋
                let fast = small.and_then(|(n, d)| Some(n.checked_mul(k)?.checked_mul(2)?.checked_add(d)?.div_euclid(2 * d)));
                if let Some(v) = fast {
                    return Ok(v);
                }
                let v = q * BigRational::from_integer(k.into()) + BigRational::new(1.into(), 2.into());
                rat_floor_i128(&v)
            }
            Kind::Irrational { int_part, frac } => {
                let j = k.unsigned_abs();
                let base = (j as i128).checked_mul(*int_part).ok_or(NumericError::Overflow)?;
                let pos = match Self::floor_frac_pos(*frac, j, HALF) {
                    Some(h) => {
                        let h = i128::try_from(h).map_err(|_| NumericError::Overflow)?;
                        base.checked_add(h).ok_or(NumericError::Overflow)?
                    }
                    None => {
                        return self.exact_times(k).nint().to_i128().ok_or(NumericError::Overflow);
                    }
                };
                // x irrational: ⌊−z⌉ = −⌊z⌉.
                Ok(if k >= 0 { pos } else { -pos })
            }
        }
    }

    /// Enclosure of ⦃kx⦄ in fixed point, `None` if not certified.
    pub fn frac_signed_fixed(&self, k: i128) -> Option<Fixed> {
        match &self.kind {
            Kind::Rational(q, _) => {
                let v = q * BigRational::from_integer(k.into());
                let n = floor_rat(&(&v + BigRational::new(1.into(), 2.into())));
                Fixed::of_rational(&(v - BigRational::from_integer(n)))
            }
            Kind::Irrational { frac, .. } => {
                let j = k.unsigned_abs();
                let (_, l) = wide_mul(j, *frac);
                let (l2, _) = l.overflowing_add(HALF);
                l2.checked_add(j)?;
                // value ∈ (l2, l2 + j)/2^128 − 1/2
                let shift = 128 - FIXED_BITS;
                let base = 1i128 << (FIXED_BITS - 1);
                let lo = (l2 >> shift) as i128 - base;
                let hi = ((l2 + j) >> shift) as i128 + 1 - base;
                let f = Fixed { lo, hi };
                Some(if k >= 0 { f } else { f.neg() })
            }
        }
    }

    /// Exact ⦃kx⦄.
    pub fn frac_signed_exact(&self, k: i128) -> AlgebraicReal {
        self.exact_times(k).frac_signed()
    }

    /// Approximate ⦃kx⦄ for statistics (error below 2^−50 for |k| < 2^70).
    pub fn frac_signed_f64(&self, k: i128) -> f64 {
        match self.frac_signed_fixed(k) {
            Some(f) => f.to_f64(),
            None => self.frac_signed_exact(k).to_f64(),
        }
    }

    /// Compares ⦃kx⦄ with a threshold exactly.
    pub fn cmp_frac(&self, k: i128, t: &Threshold) -> Ordering {
        if let (Some(f), Some(tf)) = (self.frac_signed_fixed(k), t.fixed) {
            match f.lt(&tf) {
                Some(true) => return Ordering::Less,
                Some(false) if tf.lt(&f) == Some(true) => return Ordering::Greater,
                _ => {}
            }
        }
        self.frac_signed_exact(k).cmp_value(&t.exact)
    }

    /// lo < ⦃kx⦄ < hi, exactly.
    pub fn frac_in_open(&self, k: i128, lo: &Threshold, hi: &Threshold) -> bool {
        self.cmp_frac(k, lo) == Ordering::Greater && self.cmp_frac(k, hi) == Ordering::Less
    }

    /// ‖kx‖ < ε, exactly.
    pub fn norm_lt(&self, k: i128, eps: &Threshold) -> bool {
        if let (Some(f), Some(e)) = (self.frac_signed_fixed(k), eps.fixed) {
            let a = if f.lo >= 0 { f } else if f.hi <= 0 { f.neg() } else { Fixed { lo: 0, hi: f.hi.max(-f.lo) } };
            if let Some(b) = a.lt(&e) {
                if b || e.lt(&a) == Some(true) || a.lo >= e.hi {
                    return b;
                }
            }
        }
        self.frac_signed_exact(k).abs().lt(&eps.exact)
    }
}

fn rat_floor_i128(q: &BigRational) -> Result<i128, NumericError> {
    floor_rat(q).to_i128().ok_or(NumericError::Overflow)
}

/// ⦃q⦄ for a rational.
pub fn rat_frac_signed(q: &BigRational) -> BigRational {
    let n = floor_rat(&(q + BigRational::new(1.into(), 2.into())));
    q - BigRational::from_integer(n)
}

/// ‖q‖ for a rational.
pub fn rat_norm(q: &BigRational) -> BigRational {
    let f = rat_frac_signed(q);
    if f < BigRational::zero() {
        -f
    } else {
        f
    }
}
