//! Exact arithmetic in real number fields, with a ball-arithmetic cross-check.

mod algebraic;
mod ball;
mod field;
mod fixed;
pub mod poly;

pub use algebraic::{bigint_to_f64, rat_to_f64, AlgebraicReal, ArithOp};
pub use ball::{ball_eval, ball_nint_adaptive, ball_sign_adaptive, Ball, DEFAULT_PRECISION_CAP};
pub use field::{Irreducibility, NumberField, CACHED_LEVELS};
pub use fixed::{rat_frac_signed, rat_norm, Fixed, FracMul, Threshold, FIXED_BITS};

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum NumericError {
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("minimal polynomial is not squarefree")]
    NotSquarefree,
    #[error("no root of the minimal polynomial in the interval")]
    NoRootInInterval,
    #[error("more than one root of the minimal polynomial in the interval")]
    MultipleRootsInInterval,
    #[error("minimal polynomial is reducible")]
    Reducible,
    #[error("division by zero")]
    DivisionByZero,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("ball ambiguous at precision {0} bits")]
    AmbiguousAtPrecision(u32),
    #[error("value does not fit in a machine integer")]
    Overflow,
}
