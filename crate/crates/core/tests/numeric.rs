use std::cmp::Ordering;
use std::sync::Arc;

use genpres_core::numeric::{ball_eval, ball_sign_adaptive, AlgebraicReal, ArithOp, FracMul, NumberField, NumericError};
use genpres_core::presets::{cube_root_two, sqrt_two};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

fn r(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn elem(f: &Arc<NumberField>, c: &[(i64, i64)]) -> AlgebraicReal {
    AlgebraicReal::from_coeffs(f, c.iter().map(|&(n, d)| r(n, d)).collect())
}

// f64 oracle for c₀ + c₁θ + c₂θ².
fn approx(theta: f64, c: &[(i64, i64)]) -> f64 {
    c.iter().enumerate().map(|(i, &(n, d))| n as f64 / d as f64 * theta.powi(i as i32)).sum()
}

fn coeffs(len: usize) -> impl Strategy<Value = Vec<(i64, i64)>> {
    proptest::collection::vec((-2000i64..2000, 1i64..50), len)
}

#[test]
fn field_examples() {
    let f = NumberField::new(&[BigInt::from(-2), BigInt::from(1)], r(2, 1), r(2, 1)).unwrap();
    assert_eq!(AlgebraicReal::theta(&f).as_rational(), Some(r(2, 1)));
    let wide = NumberField::new(&[BigInt::from(-2), BigInt::zero(), BigInt::one()], r(0, 1), r(3, 1)).unwrap();
    assert_eq!(AlgebraicReal::theta(&wide).floor(), BigInt::from(1));
    let both = NumberField::new(&[BigInt::from(-2), BigInt::zero(), BigInt::one()], r(-3, 1), r(3, 1));
    assert_eq!(both.unwrap_err(), NumericError::MultipleRootsInInterval);
}

#[test]
fn reduction_and_decimal_examples() {
    let f = cube_root_two();
    let t = AlgebraicReal::theta(&f);
    let t2 = t.arith(&t, ArithOp::Mul).unwrap();
    assert_eq!(t2.arith(&t2, ArithOp::Mul).unwrap(), t.mul_int(2));
    assert_eq!(t.mul_int(5).add_int(-6).sign(), 1);
    assert_eq!(t.mul_int(5).floor(), BigInt::from(6));
    assert_eq!(t.mul_int(4).nint(), BigInt::from(5));
    assert!((t.mul_int(4).frac_signed().to_f64() - 0.039684).abs() < 1e-6);
    let s = AlgebraicReal::theta(&sqrt_two());
    assert_eq!((-&s).floor(), BigInt::from(-2));
    let b = ball_eval(&t, 64);
    assert!(b.lower() < r(1259921049895, 1_000_000_000_000) && b.upper() > r(1259921049894, 1_000_000_000_000));
    assert!(b.radius() <= r(1, 1 << 62));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn nint_plus_frac_is_identity(c in coeffs(3)) {
        let x = elem(&cube_root_two(), &c);
        let n = x.nint();
        let fr = x.frac_signed();
        prop_assert_eq!(fr.add_int(n.clone()), x.clone());
        prop_assert!(fr.cmp_rational(&r(-1, 2)) != Ordering::Less);
        prop_assert!(fr.cmp_rational(&r(1, 2)) == Ordering::Less);
        let norm = x.circle_norm();
        prop_assert!(norm.sign() >= 0 && norm.cmp_rational(&r(1, 2)) != Ordering::Greater);
        prop_assert_eq!(n, x.add_rational(&r(1, 2)).floor());
    }

    #[test]
    fn floor_matches_oracle(c in coeffs(3)) {
        let x = elem(&cube_root_two(), &c);
        let a = approx(2f64.cbrt(), &c);
        prop_assume!((a - a.round()).abs() > 1e-6);
        prop_assert_eq!(x.floor(), BigInt::from(a.floor() as i64));
        prop_assert_eq!(x.ceil(), -(-&x).floor());
    }

    #[test]
    fn sign_agrees_with_balls(c in coeffs(3)) {
        let x = elem(&cube_root_two(), &c);
        let b = ball_eval(&x, 256);
        if let Some(s) = b.sign() {
            prop_assert_eq!(s, x.sign());
        }
        if !x.is_zero() {
            prop_assert_eq!(ball_sign_adaptive(&x, 4096).unwrap(), x.sign());
        }
    }

    #[test]
    fn floor_is_monotone(a in coeffs(2), b in coeffs(2)) {
        let f = sqrt_two();
        let (x, y) = (elem(&f, &a), elem(&f, &b));
        if x.cmp_value(&y) != Ordering::Greater {
            prop_assert!(x.floor() <= y.floor());
        }
    }

    #[test]
    fn field_arithmetic_round_trips(a in coeffs(3), b in coeffs(3)) {
        let f = cube_root_two();
        let (x, y) = (elem(&f, &a), elem(&f, &b));
        let s = x.arith(&y, ArithOp::Add).unwrap();
        prop_assert_eq!(s.arith(&y, ArithOp::Sub).unwrap(), x.clone());
        if !y.is_zero() {
            let p = x.arith(&y, ArithOp::Mul).unwrap();
            prop_assert_eq!(p.arith(&y, ArithOp::Div).unwrap(), x.clone());
        }
        let ax = approx(2f64.cbrt(), &a) * approx(2f64.cbrt(), &b);
        let px = x.arith(&y, ArithOp::Mul).unwrap().to_f64();
        prop_assert!((ax - px).abs() <= 1e-9 * ax.abs().max(1.0));
    }

    #[test]
    fn frac_mul_agrees_with_exact(c in coeffs(2), k in -1_000_000i128..1_000_000) {
        let x = elem(&sqrt_two(), &c);
        let m = FracMul::new(&x).unwrap();
        let kx = x.mul_int(BigInt::from(k));
        prop_assert_eq!(m.nint_mul(k).unwrap(), kx.nint().try_into().unwrap());
        prop_assert_eq!(m.frac_signed_exact(k), kx.frac_signed());
    }
}
