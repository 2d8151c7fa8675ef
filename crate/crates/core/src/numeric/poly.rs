//! Dense univariate polynomials over Q, lowest degree first.
//!
//! Only what field validation and field arithmetic need: division with
//! remainder, gcd, Sturm sequences and a small factor search.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type QPoly = Vec<BigRational>;

pub fn trim(p: &mut QPoly) {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
}

pub fn from_ints(c: &[BigInt]) -> QPoly {
    let mut p: QPoly = c.iter().map(|x| BigRational::from_integer(x.clone())).collect();
    trim(&mut p);
    p
}

/// Degree, with `None` for the zero polynomial.
pub fn degree(p: &QPoly) -> Option<usize> {
    if p.is_empty() {
        None
    } else {
        Some(p.len() - 1)
    }
}

pub fn eval(p: &QPoly, x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in p.iter().rev() {
        acc = acc * x + c;
    }
    acc
}

pub fn sign_at(p: &QPoly, x: &BigRational) -> i8 {
    let v = eval(p, x);
    if v.is_zero() {
        0
    } else if v.is_positive() {
        1
    } else {
        -1
    }
}

pub fn add(a: &QPoly, b: &QPoly) -> QPoly {
    let n = a.len().max(b.len());
    let mut r = Vec::with_capacity(n);
    for i in 0..n {
        let x = a.get(i).cloned().unwrap_or_else(BigRational::zero);
        let y = b.get(i).cloned().unwrap_or_else(BigRational::zero);
        r.push(x + y);
    }
    trim(&mut r);
    r
}

pub fn neg(a: &QPoly) -> QPoly {
    a.iter().map(|c| -c).collect()
}

pub fn sub(a: &QPoly, b: &QPoly) -> QPoly {
    add(a, &neg(b))
}

pub fn mul(a: &QPoly, b: &QPoly) -> QPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut r = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            r[i + j] += x * y;
        }
    }
    trim(&mut r);
    r
}

pub fn scale(a: &QPoly, s: &BigRational) -> QPoly {
    let mut r: QPoly = a.iter().map(|c| c * s).collect();
    trim(&mut r);
    r
}

/// Quotient and remainder; panics on a zero divisor.
pub fn divrem(a: &QPoly, b: &QPoly) -> (QPoly, QPoly) {
    let db = degree(b).expect("division by the zero polynomial");
    let mut r = a.clone();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead = b[db].clone();
    let mut q = vec![BigRational::zero(); r.len() - db];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let t = &r[dr] / &lead;
        let shift = dr - db;
        for (j, c) in b.iter().enumerate() {
            r[shift + j] -= &t * c;
        }
        q[shift] = t;
        r.pop();
        trim(&mut r);
    }
    trim(&mut q);
    (q, r)
}

pub fn rem(a: &QPoly, b: &QPoly) -> QPoly {
    divrem(a, b).1
}

pub fn monic(a: &QPoly) -> QPoly {
    match a.last() {
        None => Vec::new(),
        Some(l) => {
            let inv = l.recip();
            scale(a, &inv)
        }
    }
}

/// Monic gcd (zero only if both inputs are zero).
pub fn gcd(a: &QPoly, b: &QPoly) -> QPoly {
    let mut x = a.clone();
    let mut y = b.clone();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y);
        x = y;
        y = r;
    }
    monic(&x)
}

/// Returns `(g, u)` with `u·a ≡ g (mod m)`, `g` the monic gcd.
pub fn ext_gcd_inverse_part(a: &QPoly, m: &QPoly) -> (QPoly, QPoly) {
    let (mut r0, mut r1) = (m.clone(), a.clone());
    let (mut s0, mut s1): (QPoly, QPoly) = (Vec::new(), vec![BigRational::one()]);
    trim(&mut r1);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = sub(&s0, &mul(&q, &s1));
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s;
    }
    let lead = r0.last().cloned().unwrap_or_else(BigRational::one);
    let inv = lead.recip();
    (scale(&r0, &inv), scale(&s0, &inv))
}

pub fn derivative(a: &QPoly) -> QPoly {
    let mut r: QPoly = a
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigRational::from_integer(BigInt::from(i)))
        .collect();
    trim(&mut r);
    r
}

pub fn sturm_sequence(p: &QPoly) -> Vec<QPoly> {
    let mut seq = vec![p.clone(), derivative(p)];
    loop {
        let n = seq.len();
        if seq[n - 1].is_empty() {
            seq.pop();
            break;
        }
        let r = neg(&rem(&seq[n - 2], &seq[n - 1]));
        if r.is_empty() {
            break;
        }
        seq.push(r);
    }
    seq
}

fn sign_variations(seq: &[QPoly], x: &BigRational) -> usize {
    let mut last = 0i8;
    let mut count = 0;
    for p in seq {
        let s = sign_at(p, x);
        if s != 0 {
            if last != 0 && s != last {
                count += 1;
            }
            last = s;
        }
    }
    count
}

/// Number of distinct real roots in the closed interval `[lo, hi]`.
pub fn count_roots_closed(p: &QPoly, lo: &BigRational, hi: &BigRational) -> usize {
    let seq = sturm_sequence(p);
    let open_closed = sign_variations(&seq, lo).saturating_sub(sign_variations(&seq, hi));
    open_closed + usize::from(sign_at(p, lo) == 0)
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            let other = &n / &d;
            if other != d {
                out.push(other);
            }
        }
        d += 1;
    }
    out
}

/// Rational roots of an integer polynomial (candidates ±p/q).
pub fn rational_roots(c: &[BigInt]) -> Vec<BigRational> {
    let p = from_ints(c);
    let mut out = Vec::new();
    if p.is_empty() {
        return out;
    }
    // Strip factors of x first.
    let low = c.iter().position(|x| !x.is_zero()).unwrap_or(0);
    if low > 0 {
        out.push(BigRational::zero());
    }
    let c0 = &c[low];
    let cd = c.iter().rev().find(|x| !x.is_zero()).cloned().unwrap_or_else(BigInt::one);
    for num in divisors(c0) {
        for den in divisors(&cd) {
            for s in [1i32, -1] {
                let r = BigRational::new(&num * BigInt::from(s), den.clone());
                if eval(&p, &r).is_zero() && !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out
}

/// True if the integer quartic splits as a product of two integer quadratics.
pub fn has_quadratic_factor(c: &[BigInt]) -> bool {
    debug_assert_eq!(c.len(), 5);
    let (p0, p1, p2, p3, p4) = (&c[0], &c[1], &c[2], &c[3], &c[4]);
    // Coefficient bound for factors (Mignotte style, generous).
    let norm: BigInt = c.iter().map(|x| x * x).sum::<BigInt>().sqrt() + 1;
    let bound: BigInt = norm * 16;
    for a in divisors(p4) {
        let d = p4 / &a;
        for c_ in divisors(p0).into_iter().flat_map(|x| [x.clone(), -x]) {
            let f = p0 / &c_;
            // a e + b d = p3, b f + c e = p1
            let det = &d * &c_ - &a * &f;
            if !det.is_zero() {
                let bn = p3 * &c_ - &a * p1;
                let en = &d * p1 - &f * p3;
                if (&bn % &det).is_zero() && (&en % &det).is_zero() {
                    let b = &bn / &det;
                    let e = &en / &det;
                    if &a * &f + &b * &e + &c_ * &d == *p2 {
                        return true;
                    }
                }
            } else {
                let mut b = -bound.clone();
                while b <= bound {
                    let num = p3 - &b * &d;
                    if (&num % &a).is_zero() {
                        let e = &num / &a;
                        if &b * &f + &c_ * &e == *p1 && &a * &f + &b * &e + &c_ * &d == *p2 {
                            return true;
                        }
                    }
                    b += 1;
                }
            }
        }
    }
    false
}

pub fn floor_rat(x: &BigRational) -> BigInt {
    x.numer().div_floor(x.denom())
}

pub fn ceil_rat(x: &BigRational) -> BigInt {
    -((-x.numer()).div_floor(x.denom()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    fn r(n: i64, d: i64) -> BigRational {
        BigRational::new(n.into(), d.into())
    }

    #[test]
    fn divrem_reconstructs() {
        let a = from_ints(&ints(&[1, 2, 3, 4, 5]));
        let b = from_ints(&ints(&[-1, 0, 2]));
        let (q, rr) = divrem(&a, &b);
        assert_eq!(add(&mul(&q, &b), &rr), a);
        assert!(rr.len() < b.len());
    }

    #[test]
    fn gcd_of_shared_factor() {
        // (x-1)(x+2) and (x-1)(x-3)
        let a = from_ints(&ints(&[-2, 1, 1]));
        let b = from_ints(&ints(&[3, -4, 1]));
        assert_eq!(gcd(&a, &b), from_ints(&ints(&[-1, 1])));
    }

    #[test]
    fn sturm_counts() {
        // x^2 - 2 on [0, 3] has one root, on [-3, 3] two.
        let p = from_ints(&ints(&[-2, 0, 1]));
        assert_eq!(count_roots_closed(&p, &r(0, 1), &r(3, 1)), 1);
        assert_eq!(count_roots_closed(&p, &r(-3, 1), &r(3, 1)), 2);
        // root exactly at an endpoint is counted
        let q = from_ints(&ints(&[-2, 1]));
        assert_eq!(count_roots_closed(&q, &r(2, 1), &r(2, 1)), 1);
        assert_eq!(count_roots_closed(&q, &r(0, 1), &r(2, 1)), 1);
    }

    #[test]
    fn rational_root_search() {
        let roots = rational_roots(&ints(&[-3, 2]));
        assert_eq!(roots, vec![r(3, 2)]);
        assert!(rational_roots(&ints(&[-2, 0, 0, 1])).is_empty());
    }

    #[test]
    fn quartic_factor_search() {
        // (x^2+1)(x^2-2) = x^4 - x^2 - 2
        assert!(has_quadratic_factor(&ints(&[-2, 0, -1, 0, 1])));
        // x^4 - 2 is irreducible
        assert!(!has_quadratic_factor(&ints(&[-2, 0, 0, 0, 1])));
        // (x^2+x+1)^2
        assert!(has_quadratic_factor(&ints(&[1, 2, 3, 2, 1])));
    }
}
