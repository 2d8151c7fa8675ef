//! Weak multiplication: terms over (Z; 1, +, −, ×), the partial products ×_m
//! drawn from a quadruple set Q, the family F(p), and the reduction of
//! polynomial equations to sentences over (Z; +, Q).

mod compile;
pub mod harness;
mod poly;
mod qset;
mod term;

use thiserror::Error;

pub use compile::{check_solvability, compile_solvability, sentence_variables, CompileBounds, Compiled, Solvability};
pub use poly::IntPolynomial;
pub use qset::{build_q, has_q1_shape, Provenance, Q1Report, QSet, Quad};
pub use term::{eval_term_m, family_f, family_of_term, poly_to_term, term_to_poly, FPFamily, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WeakMultError {
    #[error("modulus must be nonzero")]
    ZeroModulus,
    #[error("term uses x{found} but the arity is {expected}")]
    ArityMismatch { expected: usize, found: usize },
    #[error("cannot parse polynomial: {0}")]
    Parse(String),
    #[error("CSV line {line}: {message}")]
    Csv { line: usize, message: String },
    #[error("evaluation failed: {0}")]
    Eval(String),
}
