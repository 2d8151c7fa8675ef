//! Exact elements of a real number field.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{shr_floor, Irreducibility, Level, NumberField};
use super::poly::{self, QPoly};
use super::NumericError;

/// c₀ + c₁θ + … + c_{d−1}θ^{d−1}, reduced modulo the minimal polynomial.
#[derive(Clone)]
pub struct AlgebraicReal {
    field: Arc<NumberField>,
    coeffs: Vec<BigRational>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl fmt::Debug for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for AlgebraicReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})·θ")?,
                _ => write!(f, "({c})·θ^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl PartialEq for AlgebraicReal {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for AlgebraicReal {}

fn same_field(a: &Arc<NumberField>, b: &Arc<NumberField>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl AlgebraicReal {
    fn from_poly(field: &Arc<NumberField>, mut p: QPoly) -> Self {
        let d = field.degree();
        if p.len() > d {
            p = poly::rem(&p, field.monic());
        }
        p.resize(d, BigRational::zero());
        AlgebraicReal { field: field.clone(), coeffs: p }
    }

    /// Builds an element from coefficients of 1, θ, θ², … (any length).
    pub fn from_coeffs(field: &Arc<NumberField>, coeffs: Vec<BigRational>) -> Self {
        let mut p = coeffs;
        poly::trim(&mut p);
        Self::from_poly(field, p)
    }

    pub fn from_rational(field: &Arc<NumberField>, q: BigRational) -> Self {
        Self::from_poly(field, vec![q])
    }

    pub fn from_int(field: &Arc<NumberField>, n: impl Into<BigInt>) -> Self {
        Self::from_rational(field, BigRational::from_integer(n.into()))
    }

    pub fn zero(field: &Arc<NumberField>) -> Self {
        Self::from_poly(field, Vec::new())
    }

    /// The generator θ itself.
    pub fn theta(field: &Arc<NumberField>) -> Self {
        match field.rational_root() {
            Some(r) => Self::from_rational(field, r.clone()),
            None => Self::from_poly(field, vec![BigRational::zero(), BigRational::one()]),
        }
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    fn as_poly(&self) -> QPoly {
        let mut p = self.coeffs.clone();
        poly::trim(&mut p);
        p
    }

    /// The rational value when every non-constant coefficient vanishes.
    pub fn as_rational(&self) -> Option<BigRational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs[0].clone())
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn is_zero(&self) -> bool {
        if self.coeffs.iter().all(|c| c.is_zero()) {
            return true;
        }
        if self.field.irreducibility() == Irreducibility::Verified || self.is_rational() {
            return false;
        }
        let g = poly::gcd(&self.as_poly(), &poly::from_ints(self.field.minpoly()));
        self.field.vanishes_at_theta(&g)
    }

    pub fn arith(&self, other: &Self, op: ArithOp) -> Result<Self, NumericError> {
        if !same_field(&self.field, &other.field) {
            return Err(NumericError::FieldMismatch);
        }
        let p = match op {
            ArithOp::Add => poly::add(&self.as_poly(), &other.as_poly()),
            ArithOp::Sub => poly::sub(&self.as_poly(), &other.as_poly()),
            ArithOp::Mul => poly::mul(&self.as_poly(), &other.as_poly()),
            ArithOp::Div => {
                let inv = other.recip()?;
                poly::mul(&self.as_poly(), &inv.as_poly())
            }
        };
        Ok(Self::from_poly(&self.field, p))
    }

    pub fn recip(&self) -> Result<Self, NumericError> {
        if self.is_zero() {
            return Err(NumericError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(Self::from_rational(&self.field, q.recip()));
        }
        let m = poly::from_ints(self.field.minpoly());
        let (g, u) = poly::ext_gcd_inverse_part(&self.as_poly(), &m);
        if g.len() > 1 {
            return Err(NumericError::Reducible);
        }
        Ok(Self::from_poly(&self.field, u))
    }

    pub fn add_rational(&self, q: &BigRational) -> Self {
        let mut c = self.coeffs.clone();
        c[0] += q;
        AlgebraicReal { field: self.field.clone(), coeffs: c }
    }

    pub fn add_int(&self, n: impl Into<BigInt>) -> Self {
        self.add_rational(&BigRational::from_integer(n.into()))
    }

    pub fn mul_rational(&self, q: &BigRational) -> Self {
        AlgebraicReal { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| c * q).collect() }
    }

    pub fn mul_int(&self, n: impl Into<BigInt>) -> Self {
        self.mul_rational(&BigRational::from_integer(n.into()))
    }

    pub fn abs(&self) -> Self {
        if self.sign() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    /// Enclosure [lo, hi] / 2^bits of the value at the given level.
    pub(crate) fn enclose_at(&self, lv: &Level) -> (BigInt, BigInt) {
        let mut lo = BigInt::zero();
        let mut hi = BigInt::zero();
        for (c, (plo, phi)) in self.coeffs.iter().zip(&lv.powers) {
            if c.is_zero() {
                continue;
            }
            let n = c.numer();
            let d = c.denom();
            let (a, b) = if n.is_negative() { (n * phi, n * plo) } else { (n * plo, n * phi) };
            lo += floor_div(&a, d);
            hi += ceil_div(&b, d);
        }
        (lo, hi)
    }

    /// Runs `f` over successively tighter enclosures until it returns a
    /// value. Beyond the cached levels the bracket is refined afresh.
    fn refine<T>(&self, mut f: impl FnMut(&BigInt, &BigInt, u32) -> Option<T>) -> T {
        for lv in self.field.levels() {
            let (lo, hi) = self.enclose_at(lv);
            if let Some(v) = f(&lo, &hi, lv.bits) {
                return v;
            }
        }
        let mut bits = self.field.levels().last().map_or(4096, |l| l.bits) * 2;
        loop {
            let lv = self.field.level_beyond(bits);
            let (lo, hi) = self.enclose_at(&lv);
            if let Some(v) = f(&lo, &hi, lv.bits) {
                return v;
            }
            bits *= 2;
        }
    }

    /// Exact sign: −1, 0 or +1.
    pub fn sign(&self) -> i8 {
        if let Some(q) = self.as_rational() {
            return sign_of_rat(&q);
        }
        if self.is_zero() {
            return 0;
        }
        self.refine(|lo, hi, _| {
            if lo.is_positive() {
                Some(1)
            } else if hi.is_negative() {
                Some(-1)
            } else {
                None
            }
        })
    }

    pub fn cmp_value(&self, other: &Self) -> Ordering {
        match (self - other).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    pub fn lt(&self, other: &Self) -> bool {
        self.cmp_value(other) == Ordering::Less
    }

    pub fn cmp_rational(&self, q: &BigRational) -> Ordering {
        match self.add_rational(&-q).sign() {
            -1 => Ordering::Less,
            0 => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }

    /// ⌊x⌋.
    pub fn floor(&self) -> BigInt {
        if let Some(q) = self.as_rational() {
            return poly::floor_rat(&q);
        }
        let mut tries = 0usize;
        self.refine(|lo, hi, bits| {
            let a = shr_floor(lo, bits);
            let b = shr_floor(hi, bits);
            if a == b {
                return Some(a);
            }
            tries += 1;
            // Only an integer value can keep straddling; settle it exactly.
            if tries >= 3 && b == &a + 1 && self.add_int(-b.clone()).is_zero() {
                return Some(b);
            }
            None
        })
    }

    pub fn ceil(&self) -> BigInt {
        -(-self).floor()
    }

    /// ⌊x⌉ = ⌊x + 1/2⌋.
    pub fn nint(&self) -> BigInt {
        self.add_rational(&half()).floor()
    }

    /// ⦃x⦄ = x − ⌊x⌉ ∈ [−1/2, 1/2).
    pub fn frac_signed(&self) -> Self {
        self.add_int(-self.nint())
    }

    /// ‖x‖ = |⦃x⦄| ∈ [0, 1/2].
    pub fn circle_norm(&self) -> Self {
        self.frac_signed().abs()
    }

    /// Floating-point approximation (for statistics and display only).
    pub fn to_f64(&self) -> f64 {
        if let Some(q) = self.as_rational() {
            return rat_to_f64(&q);
        }
        let lv = &self.field.levels()[0];
        let (lo, hi) = self.enclose_at(lv);
        let mid: BigInt = (lo + hi) >> 1usize;
        bigint_to_f64(&mid) / 2f64.powi(lv.bits as i32)
    }
}

pub(crate) fn half() -> BigRational {
    BigRational::new(BigInt::one(), BigInt::from(2))
}

pub(crate) fn sign_of_rat(q: &BigRational) -> i8 {
    if q.is_zero() {
        0
    } else if q.is_positive() {
        1
    } else {
        -1
    }
}

pub(crate) fn floor_div(a: &BigInt, d: &BigInt) -> BigInt {
    num_integer::Integer::div_floor(a, d)
}

pub(crate) fn ceil_div(a: &BigInt, d: &BigInt) -> BigInt {
    -num_integer::Integer::div_floor(&-a, d)
}

pub fn bigint_to_f64(x: &BigInt) -> f64 {
    num_traits::ToPrimitive::to_f64(x).unwrap_or(f64::NAN)
}

pub fn rat_to_f64(q: &BigRational) -> f64 {
    // Scale so that both parts fit comfortably in f64 range.
    let n = q.numer();
    let d = q.denom();
    let shift = (n.bits().max(d.bits()) as i64 - 900).max(0) as usize;
    bigint_to_f64(&(n >> shift)) / bigint_to_f64(&(d >> shift))
}

impl Neg for &AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        AlgebraicReal { field: self.field.clone(), coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl Neg for AlgebraicReal {
    type Output = AlgebraicReal;
    fn neg(self) -> AlgebraicReal {
        -&self
    }
}

macro_rules! forward_op {
    ($tr:ident, $method:ident, $op:expr) => {
        /// Panics if the operands live in different fields; use
        /// [`AlgebraicReal::arith`] for a checked variant.
        impl $tr<&AlgebraicReal> for &AlgebraicReal {
            type Output = AlgebraicReal;
            fn $method(self, rhs: &AlgebraicReal) -> AlgebraicReal {
                self.arith(rhs, $op).expect("operands from different number fields")
            }
        }
        impl $tr<AlgebraicReal> for AlgebraicReal {
            type Output = AlgebraicReal;
            fn $method(self, rhs: AlgebraicReal) -> AlgebraicReal {
                (&self).$method(&rhs)
            }
        }
    };
}

forward_op!(Add, add, ArithOp::Add);
forward_op!(Sub, sub, ArithOp::Sub);
forward_op!(Mul, mul, ArithOp::Mul);

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    fn cbrt2() -> Arc<NumberField> {
        NumberField::new(&ints(&[-2, 0, 0, 1]), r(5, 4), r(13, 10)).unwrap()
    }

    fn sqrt2() -> Arc<NumberField> {
        NumberField::new(&ints(&[-2, 0, 1]), r(0, 1), r(3, 1)).unwrap()
    }

    #[test]
    fn minpoly_relations() {
        let f = cbrt2();
        let t = AlgebraicReal::theta(&f);
        assert_eq!(&(&t * &t) * &t, AlgebraicReal::from_int(&f, 2));
        let t2 = &t * &t;
        assert_eq!(&t2 * &t2, t.mul_int(2));
        let one_t = t.add_int(1);
        assert!((&one_t - &one_t).is_zero());
        assert_eq!(((&(&t * &t) * &t).add_int(-2)).sign(), 0);
    }

    #[test]
    fn signs_and_floors() {
        let f = cbrt2();
        let t = AlgebraicReal::theta(&f);
        assert_eq!(t.add_int(-1).sign(), 1);
        assert_eq!(t.mul_int(5).add_int(-6).sign(), 1);
        assert_eq!(t.mul_int(5).floor(), BigInt::from(6));
        assert_eq!(t.mul_int(4).nint(), BigInt::from(5));
        let s = sqrt2();
        let u = AlgebraicReal::theta(&s);
        assert_eq!(u.floor(), BigInt::from(1));
        assert_eq!((-&u).floor(), BigInt::from(-2));
    }

    #[test]
    fn rational_conventions() {
        let f = cbrt2();
        let x = AlgebraicReal::from_rational(&f, r(3, 2));
        assert_eq!(x.nint(), BigInt::from(2));
        let y = AlgebraicReal::from_rational(&f, r(-1, 2));
        assert_eq!(y.nint(), BigInt::from(0));
        assert_eq!(y.frac_signed(), y);
        assert_eq!(AlgebraicReal::from_int(&f, 7).frac_signed(), AlgebraicReal::zero(&f));
        let h = AlgebraicReal::from_rational(&f, r(1, 2));
        assert_eq!(h.circle_norm(), h);
        assert!(AlgebraicReal::from_int(&f, 3).circle_norm().is_zero());
    }

    #[test]
    fn frac_of_four_theta() {
        let f = cbrt2();
        let x = AlgebraicReal::theta(&f).mul_int(4);
        let fr = x.frac_signed();
        assert_eq!(fr, x.add_int(-5));
        let v = fr.to_f64();
        assert!((v - 0.039684).abs() < 1e-5, "{v}");
    }

    #[test]
    fn division_and_mismatch() {
        let f = cbrt2();
        let t = AlgebraicReal::theta(&f);
        let q = t.arith(&t.add_int(1), ArithOp::Div).unwrap();
        assert_eq!(&q * &t.add_int(1), t);
        let z = AlgebraicReal::zero(&f);
        assert_eq!(t.arith(&z, ArithOp::Div).unwrap_err(), NumericError::DivisionByZero);
        let s = AlgebraicReal::theta(&sqrt2());
        assert_eq!(t.arith(&s, ArithOp::Add).unwrap_err(), NumericError::FieldMismatch);
    }

    #[test]
    fn unverified_field_zero_test() {
        // (x^3 - 2)(x^2 + x + 1): degree 5, root 2^{1/3} isolated in [5/4, 13/10].
        // x^3 - 2 is nonzero as a reduced representation but vanishes at θ.
        let mp = ints(&[-2, -2, -2, 1, 1, 1]);
        let f = NumberField::new(&mp, r(5, 4), r(13, 10)).unwrap();
        assert_eq!(f.irreducibility(), Irreducibility::Assumed);
        let t = AlgebraicReal::theta(&f);
        let x = (&(&t * &t) * &t).add_int(-2);
        assert!(!x.coeffs().iter().all(|c| c.is_zero()));
        assert!(x.is_zero());
        assert_eq!(x.sign(), 0);
        assert!(!t.add_int(-1).is_zero());
    }
}
