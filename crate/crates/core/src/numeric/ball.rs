//! Dyadic midpoint-radius enclosures, used as an independent check on the
//! exact backend.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::algebraic::{ceil_div, floor_div, AlgebraicReal};
use super::field::shr_floor;
use super::NumericError;

/// Default precision cap for adaptive ball evaluation.
pub const DEFAULT_PRECISION_CAP: u32 = 4096;

/// The interval [(mid − rad)/2^scale, (mid + rad)/2^scale].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Ball {
    pub mid: BigInt,
    pub rad: BigInt,
    pub scale: u32,
    pub precision: u32,
}

impl Ball {
    pub fn exact_int(n: BigInt, precision: u32) -> Self {
        Ball { mid: n, rad: BigInt::zero(), scale: 0, precision }
    }

    fn rescale(&self, scale: u32) -> (BigInt, BigInt) {
        debug_assert!(scale >= self.scale);
        let s = (scale - self.scale) as usize;
        (&self.mid << s, &self.rad << s)
    }

    pub fn lower(&self) -> BigRational {
        BigRational::new(&self.mid - &self.rad, BigInt::one() << self.scale as usize)
    }

    pub fn upper(&self) -> BigRational {
        BigRational::new(&self.mid + &self.rad, BigInt::one() << self.scale as usize)
    }

    pub fn radius(&self) -> BigRational {
        BigRational::new(self.rad.clone(), BigInt::one() << self.scale as usize)
    }

    pub fn contains(&self, q: &BigRational) -> bool {
        &self.lower() <= q && q <= &self.upper()
    }

    /// Sign if the ball excludes 0.
    pub fn sign(&self) -> Option<i8> {
        if self.rad.is_zero() && self.mid.is_zero() {
            Some(0)
        } else if &self.mid - &self.rad > BigInt::zero() {
            Some(1)
        } else if &self.mid + &self.rad < BigInt::zero() {
            Some(-1)
        } else {
            None
        }
    }

    /// ⌊x⌋ if it is the same across the whole ball.
    pub fn floor(&self) -> Result<BigInt, NumericError> {
        let a = shr_floor(&(&self.mid - &self.rad), self.scale);
        let b = shr_floor(&(&self.mid + &self.rad), self.scale);
        if a == b {
            Ok(a)
        } else {
            Err(NumericError::AmbiguousAtPrecision(self.precision))
        }
    }

    /// ⌊x + 1/2⌋ if it is the same across the whole ball.
    pub fn nint(&self) -> Result<BigInt, NumericError> {
        let half = Ball { mid: BigInt::one(), rad: BigInt::zero(), scale: 1, precision: self.precision };
        (self + &half).floor()
    }

    fn binary(&self, o: &Ball, f: impl Fn(BigInt, BigInt, BigInt, BigInt) -> (BigInt, BigInt)) -> Ball {
        let scale = self.scale.max(o.scale);
        let (m1, r1) = self.rescale(scale);
        let (m2, r2) = o.rescale(scale);
        let (mid, rad) = f(m1, r1, m2, r2);
        Ball { mid, rad, scale, precision: self.precision.min(o.precision) }
    }
}

impl Add for &Ball {
    type Output = Ball;
    fn add(self, o: &Ball) -> Ball {
        self.binary(o, |m1, r1, m2, r2| (m1 + m2, r1 + r2))
    }
}

impl Sub for &Ball {
    type Output = Ball;
    fn sub(self, o: &Ball) -> Ball {
        self.binary(o, |m1, r1, m2, r2| (m1 - m2, r1 + r2))
    }
}

impl Neg for &Ball {
    type Output = Ball;
    fn neg(self) -> Ball {
        Ball { mid: -&self.mid, rad: self.rad.clone(), scale: self.scale, precision: self.precision }
    }
}

impl Mul for &Ball {
    type Output = Ball;
    fn mul(self, o: &Ball) -> Ball {
        // (m1 ± r1)(m2 ± r2) ⊆ m1 m2 ± (|m1| r2 + |m2| r1 + r1 r2), at scale s1 + s2.
        let mid = &self.mid * &o.mid;
        let rad = self.mid.abs() * &o.rad + o.mid.abs() * &self.rad + &self.rad * &o.rad;
        let out = Ball { mid, rad, scale: self.scale + o.scale, precision: self.precision.min(o.precision) };
        out.round_to(out.precision + 8)
    }
}

impl Ball {
    /// Coarsens to at most `scale` fractional bits, widening the radius.
    pub fn round_to(&self, scale: u32) -> Ball {
        if self.scale <= scale {
            return self.clone();
        }
        let s = self.scale - scale;
        let mid = shr_floor(&self.mid, s);
        // Floor loses < 1 unit; add 1 unit of slack plus the shifted radius, rounded up.
        let rad = -shr_floor(&-&self.rad, s) + 1;
        Ball { mid, rad, scale, precision: self.precision }
    }
}

/// Enclosure of `x` with radius at most 2^(−precision+2).
pub fn ball_eval(x: &AlgebraicReal, precision: u32) -> Ball {
    assert!(precision >= 8, "ball precision must be at least 8 bits");
    if let Some(q) = x.as_rational() {
        if q.is_zero() {
            return Ball { mid: BigInt::zero(), rad: BigInt::zero(), scale: 0, precision };
        }
        let lo = floor_div(&(q.numer() << precision as usize), q.denom());
        let hi = ceil_div(&(q.numer() << precision as usize), q.denom());
        return from_bounds(lo, hi, precision, precision);
    }
    let target = BigInt::one() << 2usize;
    for lv in x.field().levels() {
        if lv.bits < precision {
            continue;
        }
        let (lo, hi) = x.enclose_at(lv);
        // Work at `precision` bits: widen outward.
        let shift = lv.bits - precision;
        let lo_p = shr_floor(&lo, shift);
        let hi_p = -shr_floor(&-hi, shift);
        if &hi_p - &lo_p <= target {
            return from_bounds(lo_p, hi_p, precision, precision);
        }
    }
    let mut bits = x.field().levels().last().map_or(64, |l| l.bits).max(precision) * 2;
    loop {
        let lv = x.field().level_beyond(bits);
        let (lo, hi) = x.enclose_at(&lv);
        let shift = lv.bits - precision;
        let lo_p = shr_floor(&lo, shift);
        let hi_p = -shr_floor(&-hi, shift);
        if &hi_p - &lo_p <= target {
            return from_bounds(lo_p, hi_p, precision, precision);
        }
        bits *= 2;
    }
}

fn from_bounds(lo: BigInt, hi: BigInt, scale: u32, precision: u32) -> Ball {
    // mid = (lo+hi)/2 at one extra bit keeps everything exact.
    Ball { mid: &lo + &hi, rad: hi - lo, scale: scale + 1, precision }
}

/// Sign through balls of doubling precision, starting at 64 bits.
pub fn ball_sign_adaptive(x: &AlgebraicReal, cap: u32) -> Result<i8, NumericError> {
    if x.coeffs().iter().all(|c| c.is_zero()) {
        return Ok(0);
    }
    let mut p = 64;
    while p <= cap {
        if let Some(s) = ball_eval(x, p).sign() {
            return Ok(s);
        }
        p *= 2;
    }
    Err(NumericError::AmbiguousAtPrecision(cap))
}

/// ⌊x + 1/2⌋ through balls of doubling precision.
pub fn ball_nint_adaptive(x: &AlgebraicReal, cap: u32) -> Result<BigInt, NumericError> {
    let mut p = 64;
    while p <= cap {
        if let Ok(v) = ball_eval(x, p).nint() {
            return Ok(v);
        }
        p *= 2;
    }
    Err(NumericError::AmbiguousAtPrecision(cap))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numeric::NumberField;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn zero_and_rational() {
        let f = NumberField::new(&ints(&[-2, 0, 0, 1]), r(5, 4), r(13, 10)).unwrap();
        let z = ball_eval(&AlgebraicReal::zero(&f), 64);
        assert!(z.mid.is_zero() && z.rad.is_zero());
        let third = ball_eval(&AlgebraicReal::from_rational(&f, r(1, 3)), 16);
        assert!(third.contains(&r(1, 3)));
        assert!(third.radius() <= r(1, 1 << 14));
    }

    #[test]
    fn cube_root_enclosed() {
        let f = NumberField::new(&ints(&[-2, 0, 0, 1]), r(5, 4), r(13, 10)).unwrap();
        let b = ball_eval(&AlgebraicReal::theta(&f), 64);
        let lo = b.lower();
        let hi = b.upper();
        assert!(&lo * &lo * &lo < r(2, 1) && &hi * &hi * &hi > r(2, 1));
        assert!(lo < BigRational::new(125992104990u64.into(), 100000000000u64.into()));
        assert!(hi > BigRational::new(125992104989u64.into(), 100000000000u64.into()));
        assert!(b.radius() <= BigRational::new(BigInt::one(), BigInt::one() << 62usize));
    }

    #[test]
    fn half_integer_is_ambiguous_for_balls() {
        let f = NumberField::new(&ints(&[-2, 0, 0, 1]), r(5, 4), r(13, 10)).unwrap();
        let x = AlgebraicReal::from_rational(&f, r(1, 2));
        let b = ball_eval(&x, 64);
        // The ball of an exact half may or may not straddle; widen to force it.
        let wide = Ball { rad: &b.rad + 2, ..b };
        assert!(matches!(wide.nint(), Err(NumericError::AmbiguousAtPrecision(_))));
    }

    #[test]
    fn ball_arithmetic_encloses() {
        let f = NumberField::new(&ints(&[-2, 0, 0, 1]), r(5, 4), r(13, 10)).unwrap();
        let t = AlgebraicReal::theta(&f);
        let bt = ball_eval(&t, 80);
        let cube = &(&bt * &bt) * &bt;
        assert!(cube.contains(&r(2, 1)));
        let diff = &cube - &ball_eval(&AlgebraicReal::from_int(&f, 2), 80);
        assert!(diff.contains(&r(0, 1)));
    }
}
