//! Exact evaluation over a single number field.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use super::ast::{Expr, Node};
use super::GenPolyError;
use crate::numeric::{AlgebraicReal, NumberField};

/// Constant bindings, all living in one field.
#[derive(Clone, Debug)]
pub struct Context {
    field: Arc<NumberField>,
    consts: BTreeMap<String, AlgebraicReal>,
}

impl Context {
    pub fn new(field: Arc<NumberField>) -> Self {
        Context { field, consts: BTreeMap::new() }
    }

    /// Context over Q itself (θ = 0), for purely rational constants.
    pub fn rational() -> Self {
        let f = NumberField::new(&[BigInt::zero(), BigInt::from(1)], BigRational::zero(), BigRational::zero())
            .expect("the field Q is valid");
        Context::new(f)
    }

    pub fn field(&self) -> &Arc<NumberField> {
        &self.field
    }

    pub fn bind(&mut self, name: &str, value: AlgebraicReal) -> Result<(), GenPolyError> {
        if !Arc::ptr_eq(value.field(), &self.field) && **value.field() != *self.field {
            return Err(GenPolyError::Numeric(crate::numeric::NumericError::FieldMismatch));
        }
        self.consts.insert(name.to_string(), value);
        Ok(())
    }

    pub fn bind_rational(&mut self, name: &str, q: BigRational) {
        let v = AlgebraicReal::from_rational(&self.field, q);
        self.consts.insert(name.to_string(), v);
    }

    pub fn get(&self, name: &str) -> Option<&AlgebraicReal> {
        self.consts.get(name)
    }

    pub fn names(&self) -> impl Iterator<Item = &String> {
        self.consts.keys()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Sort {
    Int,
    Real,
}

/// One-pass sort check; also resolves every constant.
pub fn check(e: &Expr, ctx: &Context) -> Result<Sort, GenPolyError> {
    Ok(match &e.node {
        Node::Int(_) | Node::Var => Sort::Int,
        Node::Const(c) => {
            if ctx.get(c).is_none() {
                return Err(GenPolyError::UnknownConstant { name: c.clone(), pos: e.span.start });
            }
            Sort::Real
        }
        Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) => {
            let (x, y) = (check(a, ctx)?, check(b, ctx)?);
            if x == Sort::Int && y == Sort::Int {
                Sort::Int
            } else {
                Sort::Real
            }
        }
        Node::Neg(a) => check(a, ctx)?,
        Node::Floor(a) | Node::Nint(a) => {
            check(a, ctx)?;
            Sort::Int
        }
        Node::Frac(a) | Node::Norm(a) => {
            check(a, ctx)?;
            Sort::Real
        }
        Node::IndLess(a, b) => {
            check(a, ctx)?;
            check(b, ctx)?;
            Sort::Int
        }
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Value {
    Int(BigInt),
    Real(AlgebraicReal),
}

impl Value {
    fn real(self, field: &Arc<NumberField>) -> AlgebraicReal {
        match self {
            Value::Int(i) => AlgebraicReal::from_int(field, i),
            Value::Real(r) => r,
        }
    }

    pub fn as_int(&self) -> Option<&BigInt> {
        match self {
            Value::Int(i) => Some(i),
            Value::Real(_) => None,
        }
    }
}

/// Exact value at `n`. Integer-sort expressions return [`Value::Int`].
pub fn eval(e: &Expr, ctx: &Context, n: &BigInt) -> Result<Value, GenPolyError> {
    let f = &ctx.field;
    let bin = |a: &Expr, b: &Expr| -> Result<(Value, Value), GenPolyError> { Ok((eval(a, ctx, n)?, eval(b, ctx, n)?)) };
    Ok(match &e.node {
        Node::Int(v) => Value::Int(v.clone()),
        Node::Var => Value::Int(n.clone()),
        Node::Const(c) => Value::Real(
            ctx.get(c)
                .cloned()
                .ok_or_else(|| GenPolyError::UnknownConstant { name: c.clone(), pos: e.span.start })?,
        ),
        Node::Add(a, b) => match bin(a, b)? {
            (Value::Int(x), Value::Int(y)) => Value::Int(x + y),
            (x, y) => Value::Real(&x.real(f) + &y.real(f)),
        },
        Node::Sub(a, b) => match bin(a, b)? {
            (Value::Int(x), Value::Int(y)) => Value::Int(x - y),
            (x, y) => Value::Real(&x.real(f) - &y.real(f)),
        },
        Node::Mul(a, b) => match bin(a, b)? {
            (Value::Int(x), Value::Int(y)) => Value::Int(x * y),
            (Value::Int(x), Value::Real(y)) | (Value::Real(y), Value::Int(x)) => Value::Real(y.mul_int(x)),
            (Value::Real(x), Value::Real(y)) => Value::Real(&x * &y),
        },
        Node::Neg(a) => match eval(a, ctx, n)? {
            Value::Int(x) => Value::Int(-x),
            Value::Real(x) => Value::Real(-x),
        },
        Node::Floor(a) => match eval(a, ctx, n)? {
            Value::Int(x) => Value::Int(x),
            Value::Real(x) => Value::Int(x.floor()),
        },
        Node::Nint(a) => match eval(a, ctx, n)? {
            Value::Int(x) => Value::Int(x),
            Value::Real(x) => Value::Int(x.nint()),
        },
        Node::Frac(a) => Value::Real(eval(a, ctx, n)?.real(f).frac_signed()),
        Node::Norm(a) => Value::Real(eval(a, ctx, n)?.real(f).circle_norm()),
        Node::IndLess(a, b) => {
            let (x, y) = bin(a, b)?;
            Value::Int(BigInt::from(x.real(f).lt(&y.real(f)) as u8))
        }
    })
}
