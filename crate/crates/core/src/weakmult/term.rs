//! Terms over (Z; 1, +, −, ×), their canonical choice per polynomial, and
//! evaluation with × replaced by the partial operation ×_m.

use std::collections::BTreeSet;
use std::fmt;

use super::poly::IntPolynomial;
use super::qset::QSet;
use super::WeakMultError;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Term {
    One,
    /// x_i, 1-based.
    Var(usize),
    Plus(Box<Term>, Box<Term>),
    Minus(Box<Term>, Box<Term>),
    Times(Box<Term>, Box<Term>),
}

impl Term {
    pub fn plus(a: Term, b: Term) -> Term {
        Term::Plus(Box::new(a), Box::new(b))
    }

    pub fn minus(a: Term, b: Term) -> Term {
        Term::Minus(Box::new(a), Box::new(b))
    }

    pub fn times(a: Term, b: Term) -> Term {
        Term::Times(Box::new(a), Box::new(b))
    }

    /// Largest variable index used (0 if none).
    pub fn max_var(&self) -> usize {
        match self {
            Term::One => 0,
            Term::Var(i) => *i,
            Term::Plus(a, b) | Term::Minus(a, b) | Term::Times(a, b) => a.max_var().max(b.max_var()),
        }
    }

    pub fn count_times(&self) -> usize {
        match self {
            Term::One | Term::Var(_) => 0,
            Term::Plus(a, b) | Term::Minus(a, b) => a.count_times() + b.count_times(),
            Term::Times(a, b) => 1 + a.count_times() + b.count_times(),
        }
    }

    /// Ordinary evaluation; `None` on overflow.
    pub fn eval(&self, args: &[i128]) -> Option<i128> {
        match self {
            Term::One => Some(1),
            Term::Var(i) => Some(args[i - 1]),
            Term::Plus(a, b) => a.eval(args)?.checked_add(b.eval(args)?),
            Term::Minus(a, b) => a.eval(args)?.checked_sub(b.eval(args)?),
            Term::Times(a, b) => a.eval(args)?.checked_mul(b.eval(args)?),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Term::Plus(..) | Term::Minus(..) => 1,
            Term::Times(..) => 2,
            Term::One | Term::Var(_) => 3,
        }
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |t: &Term, min: u8, f: &mut fmt::Formatter<'_>| -> fmt::Result {
            if t.precedence() < min {
                write!(f, "({t})")
            } else {
                write!(f, "{t}")
            }
        };
        match self {
            Term::One => write!(f, "1"),
            Term::Var(i) => write!(f, "x{i}"),
            Term::Plus(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " + ")?;
                wrap(b, 2, f)
            }
            Term::Minus(a, b) => {
                wrap(a, 1, f)?;
                write!(f, " - ")?;
                wrap(b, 2, f)
            }
            Term::Times(a, b) => {
                wrap(a, 2, f)?;
                write!(f, " * ")?;
                wrap(b, 3, f)
            }
        }
    }
}

/// Expansion over Z in `arity` variables.
pub fn term_to_poly(t: &Term, arity: usize) -> Result<IntPolynomial, WeakMultError> {
    if t.max_var() > arity {
        return Err(WeakMultError::ArityMismatch { expected: arity, found: t.max_var() });
    }
    Ok(expand(t, arity))
}

fn expand(t: &Term, arity: usize) -> IntPolynomial {
    match t {
        Term::One => IntPolynomial::constant(arity, 1),
        Term::Var(i) => IntPolynomial::var(arity, *i),
        Term::Plus(a, b) => &expand(a, arity) + &expand(b, arity),
        Term::Minus(a, b) => &expand(a, arity) - &expand(b, arity),
        Term::Times(a, b) => &expand(a, arity) * &expand(b, arity),
    }
}

fn ones(c: u128) -> Term {
    let mut t = Term::One;
    for _ in 1..c {
        t = Term::plus(t, Term::One);
    }
    t
}

fn var_times(i: usize, r: &IntPolynomial) -> Term {
    if r.as_constant() == Some(1) {
        Term::Var(i)
    } else {
        Term::times(Term::Var(i), poly_to_term(r))
    }
}

/// The canonical term for p: Horner in the lowest-index variable, constants
/// as sums of ones, negative parts through subtraction.
pub fn poly_to_term(p: &IntPolynomial) -> Term {
    if let Some(c) = p.as_constant() {
        return match c {
            0 => Term::minus(Term::One, Term::One),
            c if c > 0 => ones(c as u128),
            c => Term::minus(Term::minus(Term::One, Term::One), ones(c.unsigned_abs())),
        };
    }
    if p.all_negative() {
        return Term::minus(Term::minus(Term::One, Term::One), poly_to_term(&-p));
    }
    let i = p.lowest_var().expect("non-constant polynomial has a variable");
    let (p0, r) = p.split_by_var(i);
    if p0.is_zero() {
        return var_times(i, &r);
    }
    if r.all_negative() {
        return Term::minus(poly_to_term(&p0), var_times(i, &-&r));
    }
    Term::plus(poly_to_term(&p0), var_times(i, &r))
}

/// Pairs of polynomials multiplied somewhere in a term.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct FPFamily {
    pub pairs: BTreeSet<(IntPolynomial, IntPolynomial)>,
}

impl FPFamily {
    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    /// (m·q₁(n), m·q₂(n)) ∈ dom(×_m) for every pair; `None` on overflow.
    pub fn domain_holds(&self, q: &QSet, m: i128, n: &[i128]) -> Result<Option<bool>, WeakMultError> {
        for (q1, q2) in &self.pairs {
            let (Some(a), Some(b)) = (q1.eval(n), q2.eval(n)) else { return Ok(None) };
            let (Some(a), Some(b)) = (a.checked_mul(m), b.checked_mul(m)) else { return Ok(None) };
            if q.times_m(m, a, b)?.is_none() {
                return Ok(Some(false));
            }
        }
        Ok(Some(true))
    }
}

/// F(t): the union over subterms, with (poly(a), poly(b)) added at each a × b.
pub fn family_of_term(t: &Term, arity: usize) -> Result<FPFamily, WeakMultError> {
    if t.max_var() > arity {
        return Err(WeakMultError::ArityMismatch { expected: arity, found: t.max_var() });
    }
    let mut fam = FPFamily::default();
    collect(t, arity, &mut fam.pairs);
    Ok(fam)
}

fn collect(t: &Term, arity: usize, out: &mut BTreeSet<(IntPolynomial, IntPolynomial)>) {
    match t {
        Term::One | Term::Var(_) => {}
        Term::Plus(a, b) | Term::Minus(a, b) => {
            collect(a, arity, out);
            collect(b, arity, out);
        }
        Term::Times(a, b) => {
            collect(a, arity, out);
            collect(b, arity, out);
            out.insert((expand(a, arity), expand(b, arity)));
        }
    }
}

/// F(p), computed over the canonical term of p.
pub fn family_f(p: &IntPolynomial) -> FPFamily {
    family_of_term(&poly_to_term(p), p.arity()).expect("canonical term stays within arity")
}

/// t_m(args): × replaced by ×_m, and the constant 1 read as m so that
/// t_m(m·n) = m·t(n) wherever defined. `None` if some ×_m is undefined or
/// an intermediate overflows.
pub fn eval_term_m(t: &Term, m: i128, args: &[i128], q: &QSet) -> Result<Option<i128>, WeakMultError> {
    if m == 0 {
        return Err(WeakMultError::ZeroModulus);
    }
    if t.max_var() > args.len() {
        return Err(WeakMultError::ArityMismatch { expected: args.len(), found: t.max_var() });
    }
    eval_m(t, m, args, q)
}

fn eval_m(t: &Term, m: i128, args: &[i128], q: &QSet) -> Result<Option<i128>, WeakMultError> {
    let pair = |a: &Term, b: &Term| -> Result<Option<(i128, i128)>, WeakMultError> {
        Ok(match (eval_m(a, m, args, q)?, eval_m(b, m, args, q)?) {
            (Some(x), Some(y)) => Some((x, y)),
            _ => None,
        })
    };
    Ok(match t {
        Term::One => Some(m),
        Term::Var(i) => Some(args[i - 1]),
        Term::Plus(a, b) => pair(a, b)?.and_then(|(x, y)| x.checked_add(y)),
        Term::Minus(a, b) => pair(a, b)?.and_then(|(x, y)| x.checked_sub(y)),
        Term::Times(a, b) => match pair(a, b)? {
            Some((x, y)) => q.times_m(m, x, y)?,
            None => None,
        },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_shapes() {
        let x1 = IntPolynomial::var(1, 1);
        assert_eq!(poly_to_term(&x1), Term::Var(1));
        assert_eq!(poly_to_term(&IntPolynomial::constant(1, 2)), Term::plus(Term::One, Term::One));
        let t = poly_to_term(&IntPolynomial::constant(2, -3));
        assert_eq!(t.to_string(), "1 - 1 - (1 + 1 + 1)");
        let p = IntPolynomial::parse("x1*x2 - 6", None).unwrap();
        assert_eq!(poly_to_term(&p).to_string(), "1 - 1 - (1 + 1 + 1 + 1 + 1 + 1) + x1 * x2");
    }
}
