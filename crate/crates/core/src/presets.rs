//! Fields and sequences used throughout the checks.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::bohr::BohrParams;
use crate::genpoly::{BohrSeq, TheoremA};
use crate::numeric::{AlgebraicReal, NumberField};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Q(2^{1/3}) with θ isolated in [5/4, 13/10].
pub fn cube_root_two() -> Arc<NumberField> {
    let c: Vec<BigInt> = [-2, 0, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
    NumberField::new(&c, q(5, 4), q(13, 10)).expect("x^3 - 2 is a valid field")
}

/// Q(√2) with θ isolated in [1, 2].
pub fn sqrt_two() -> Arc<NumberField> {
    let c: Vec<BigInt> = [-2, 0, 1].iter().map(|&x| BigInt::from(x)).collect();
    NumberField::new(&c, q(1, 1), q(2, 1)).expect("x^2 - 2 is a valid field")
}

/// g(n) = ⌊n⌊αn⌉⌉ with α = 2^{1/3}, β = 1.
pub fn theorem_a_default() -> TheoremA {
    let f = cube_root_two();
    TheoremA::new(&AlgebraicReal::theta(&f), &AlgebraicReal::from_int(&f, 1)).expect("valid constants")
}

/// g(n) = 1[‖√2·n²‖ < 1/5].
pub fn bohr_default() -> BohrSeq {
    let f = sqrt_two();
    BohrSeq::new(&AlgebraicReal::theta(&f), &q(1, 5)).expect("valid constants")
}

/// α = √2, ρ = 1/5.
pub fn bohr_params() -> BohrParams {
    let f = sqrt_two();
    BohrParams::new(AlgebraicReal::theta(&f), q(1, 5)).expect("valid constants")
}
