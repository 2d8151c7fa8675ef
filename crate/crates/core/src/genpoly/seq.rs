//! Integer sequences: memoised expression handles and fast certified forms
//! of the two concrete sequences.

use std::num::NonZeroUsize;
use std::sync::{Arc, Mutex};

use lru::LruCache;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;

use super::ast::{bohr_expr, theorem_a_expr, Expr};
use super::eval::{check, eval, Context, Sort, Value};
use super::GenPolyError;
use crate::numeric::{AlgebraicReal, FracMul, NumericError, Threshold};

/// Default memo capacity.
pub const DEFAULT_MEMO: usize = 1 << 20;

/// An integer-valued sequence on Z.
///
/// `at` panics only if a value leaves the i128 range, which cannot happen for
/// the arguments used anywhere in this crate.
pub trait IntSequence: Send + Sync {
    fn at(&self, n: i64) -> i128;
}

impl<F: Fn(i64) -> i128 + Send + Sync> IntSequence for F {
    fn at(&self, n: i64) -> i128 {
        self(n)
    }
}

/// An integer-sort expression with its constants and an LRU memo.
pub struct SequenceHandle {
    expr: Arc<Expr>,
    ctx: Arc<Context>,
    memo: Mutex<LruCache<i64, i128>>,
}

impl SequenceHandle {
    pub fn new(expr: Expr, ctx: Context) -> Result<Self, GenPolyError> {
        Self::with_capacity(expr, ctx, DEFAULT_MEMO)
    }

    pub fn with_capacity(expr: Expr, ctx: Context, cap: usize) -> Result<Self, GenPolyError> {
        if check(&expr, &ctx)? != Sort::Int {
            return Err(GenPolyError::NotInteger);
        }
        let cap = NonZeroUsize::new(cap.max(1)).unwrap();
        Ok(SequenceHandle { expr: Arc::new(expr), ctx: Arc::new(ctx), memo: Mutex::new(LruCache::new(cap)) })
    }

    pub fn expr(&self) -> &Expr {
        &self.expr
    }

    pub fn context(&self) -> &Context {
        &self.ctx
    }

    /// Evaluation bypassing the memo.
    pub fn fresh(&self, n: i64) -> Result<i128, GenPolyError> {
        match eval(&self.expr, &self.ctx, &BigInt::from(n))? {
            Value::Int(v) => v.to_i128().ok_or(GenPolyError::Numeric(NumericError::Overflow)),
            Value::Real(_) => Err(GenPolyError::NotInteger),
        }
    }

    pub fn try_at(&self, n: i64) -> Result<i128, GenPolyError> {
        if let Some(v) = self.memo.lock().unwrap().get(&n) {
            return Ok(*v);
        }
        let v = self.fresh(n)?;
        self.memo.lock().unwrap().put(n, v);
        Ok(v)
    }

    pub fn memo_len(&self) -> usize {
        self.memo.lock().unwrap().len()
    }
}

impl IntSequence for SequenceHandle {
    fn at(&self, n: i64) -> i128 {
        self.try_at(n).expect("sequence value out of range")
    }
}

/// g(n) = ⌊βn⌊αn⌉⌉ through certified fixed-point multipliers.
#[derive(Clone, Debug)]
pub struct TheoremA {
    alpha: FracMul,
    beta: FracMul,
}

impl TheoremA {
    pub fn new(alpha: &AlgebraicReal, beta: &AlgebraicReal) -> Result<Self, GenPolyError> {
        if alpha.field() != beta.field() {
            return Err(GenPolyError::Numeric(NumericError::FieldMismatch));
        }
        if beta.is_zero() {
            return Err(GenPolyError::Precondition("beta must be nonzero".into()));
        }
        Ok(TheoremA { alpha: FracMul::new(alpha)?, beta: FracMul::new(beta)? })
    }

    pub fn alpha(&self) -> &FracMul {
        &self.alpha
    }

    pub fn beta(&self) -> &FracMul {
        &self.beta
    }

    /// ⌊αn⌉.
    pub fn a(&self, n: i64) -> i128 {
        self.alpha.nint_mul(n as i128).expect("alpha*n out of range")
    }

    pub fn try_at(&self, n: i64) -> Result<i128, NumericError> {
        let a = self.alpha.nint_mul(n as i128)?;
        let k = (n as i128).checked_mul(a).ok_or(NumericError::Overflow)?;
        self.beta.nint_mul(k)
    }

    /// The same sequence as a parsed expression over the given names.
    pub fn expression_handle(&self, alpha_name: &str, beta_name: &str) -> Result<SequenceHandle, GenPolyError> {
        let field = self.alpha.value().field().clone();
        let mut ctx = Context::new(field);
        ctx.bind(alpha_name, self.alpha.value().clone())?;
        ctx.bind(beta_name, self.beta.value().clone())?;
        SequenceHandle::new(theorem_a_expr(alpha_name, beta_name), ctx)
    }
}

impl IntSequence for TheoremA {
    fn at(&self, n: i64) -> i128 {
        self.try_at(n).expect("sequence value out of range")
    }
}

/// g(n) = 1 if ‖αn²‖ < ρ, else 0.
#[derive(Clone, Debug)]
pub struct BohrSeq {
    alpha: FracMul,
    rho: Threshold,
}

impl BohrSeq {
    pub fn new(alpha: &AlgebraicReal, rho: &BigRational) -> Result<Self, GenPolyError> {
        let r = AlgebraicReal::from_rational(alpha.field(), rho.clone());
        Ok(BohrSeq { alpha: FracMul::new(alpha)?, rho: Threshold::new(r) })
    }

    pub fn alpha(&self) -> &FracMul {
        &self.alpha
    }

    pub fn rho(&self) -> &Threshold {
        &self.rho
    }

    pub fn try_at(&self, n: i64) -> Result<i128, NumericError> {
        let sq = (n as i128).checked_mul(n as i128).ok_or(NumericError::Overflow)?;
        Ok(self.alpha.norm_lt(sq, &self.rho) as i128)
    }

    pub fn expression_handle(&self, alpha_name: &str, rho_name: &str) -> Result<SequenceHandle, GenPolyError> {
        let field = self.alpha.value().field().clone();
        let mut ctx = Context::new(field);
        ctx.bind(alpha_name, self.alpha.value().clone())?;
        ctx.bind(rho_name, self.rho.exact.clone())?;
        SequenceHandle::new(bohr_expr(alpha_name, rho_name), ctx)
    }
}

impl IntSequence for BohrSeq {
    fn at(&self, n: i64) -> i128 {
        self.try_at(n).expect("sequence value out of range")
    }
}
