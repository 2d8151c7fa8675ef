//! Generalised polynomials: syntax, exact evaluation, sequences and
//! discrete calculus.

mod ast;
mod calculus;
mod eval;
mod lemma31;
mod parser;
mod seq;

pub use ast::{bohr_expr, theorem_a_expr, Expr, Node, Span};
pub use calculus::{delta_shift, delta_sym, delta_sym_iter, SecondDerivativeScan};
pub use eval::{check, eval, Context, Sort, Value};
pub use lemma31::{alpha_fracs, gammas, lemma31_classify, GammaMode, Lemma31Report};
pub use parser::parse;
pub use seq::{BohrSeq, IntSequence, SequenceHandle, TheoremA, DEFAULT_MEMO};

use thiserror::Error;

use crate::numeric::NumericError;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenPolyError {
    #[error("syntax error at byte {pos}: expected one of {}", expected.join(", "))]
    Syntax { pos: usize, expected: Vec<String> },
    #[error("unknown constant `{name}` at byte {pos}")]
    UnknownConstant { name: String, pos: usize },
    #[error("expression is not integer-valued")]
    NotInteger,
    #[error("iterated derivative needs at least two arguments")]
    ArityTooSmall,
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error(transparent)]
    Numeric(#[from] NumericError),
}
