//! Bounded-quantifier evaluation of formulas in a finite-access structure.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::formula::{Cmp, Formula, Quant, Term};
use super::{BoundProfile, FoError};
use crate::genpoly::IntSequence;

/// A relation symbol's interpretation.
pub trait Relation: Send + Sync {
    fn holds(&self, args: &[i128]) -> bool;

    /// All values `z` for which `holds(prefix ++ [z])` can be true, when that
    /// set is finite and cheap to list. Lets the evaluator skip scanning a
    /// quantifier whose variable is pinned by this relation.
    fn last_candidates(&self, _prefix: &[i128]) -> Option<Vec<i128>> {
        None
    }
}

impl<F: Fn(&[i128]) -> bool + Send + Sync> Relation for F {
    fn holds(&self, args: &[i128]) -> bool {
        self(args)
    }
}

/// Interpretations for the sequence and relation symbols of a formula.
#[derive(Clone, Default)]
pub struct Structure {
    seqs: BTreeMap<String, Arc<dyn IntSequence>>,
    rels: BTreeMap<String, Arc<dyn Relation>>,
}

impl Structure {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_sequence(mut self, name: &str, s: Arc<dyn IntSequence>) -> Self {
        self.seqs.insert(name.to_string(), s);
        self
    }

    pub fn with_relation(mut self, name: &str, r: Arc<dyn Relation>) -> Self {
        self.rels.insert(name.to_string(), r);
        self
    }
}

/// Variable assignment, innermost binding last.
pub type Valuation = Vec<(String, i128)>;

struct Ctx<'a> {
    st: &'a Structure,
    max_range: u128,
}

fn lookup(env: &Valuation, v: &str) -> Result<i128, FoError> {
    env.iter()
        .rev()
        .find(|(n, _)| n == v)
        .map(|(_, x)| *x)
        .ok_or_else(|| FoError::UnboundVariable(v.to_string()))
}

fn eval_term(t: &Term, env: &Valuation, cx: &Ctx) -> Result<i128, FoError> {
    Ok(match t {
        Term::Int(v) => *v,
        Term::Var(v) => lookup(env, v)?,
        Term::Add(a, b) => eval_term(a, env, cx)?.checked_add(eval_term(b, env, cx)?).ok_or(FoError::Overflow)?,
        Term::Sub(a, b) => eval_term(a, env, cx)?.checked_sub(eval_term(b, env, cx)?).ok_or(FoError::Overflow)?,
        Term::Mul(a, b) => eval_term(a, env, cx)?.checked_mul(eval_term(b, env, cx)?).ok_or(FoError::Overflow)?,
        Term::Neg(a) => eval_term(a, env, cx)?.checked_neg().ok_or(FoError::Overflow)?,
        Term::Seq(name, a) => {
            let s = cx.st.seqs.get(name).ok_or_else(|| FoError::UnknownSymbol(name.clone()))?;
            let n = eval_term(a, env, cx)?;
            s.at(i64::try_from(n).map_err(|_| FoError::Overflow)?)
        }
    })
}

fn compare(op: Cmp, a: i128, b: i128) -> bool {
    match op {
        Cmp::Eq => a == b,
        Cmp::Ne => a != b,
        Cmp::Lt => a < b,
        Cmp::Le => a <= b,
        Cmp::Gt => a > b,
        Cmp::Ge => a >= b,
    }
}

fn conjuncts(f: &Formula) -> &[Formula] {
    match f {
        Formula::And(v) => v,
        other => std::slice::from_ref(other),
    }
}

/// Values of `v` outside the returned list make some conjunct of `f` false.
fn pinned_values(v: &str, f: &Formula, env: &Valuation, cx: &Ctx) -> Result<Option<Vec<i128>>, FoError> {
    for c in conjuncts(f) {
        match c {
            Formula::Cmp(Cmp::Eq, Term::Var(x), t) | Formula::Cmp(Cmp::Eq, t, Term::Var(x))
                if x == v && !t.mentions(v) =>
            {
                return Ok(Some(vec![eval_term(t, env, cx)?]));
            }
            Formula::Rel(name, args) if !args.is_empty() => {
                let Some(Term::Var(x)) = args.last() else { continue };
                let head = &args[..args.len() - 1];
                if x != v || head.iter().any(|a| a.mentions(v)) {
                    continue;
                }
                let r = cx.st.rels.get(name).ok_or_else(|| FoError::UnknownSymbol(name.clone()))?;
                let prefix = head.iter().map(|a| eval_term(a, env, cx)).collect::<Result<Vec<_>, _>>()?;
                if let Some(c) = r.last_candidates(&prefix) {
                    return Ok(Some(c));
                }
            }
            _ => {}
        }
    }
    Ok(None)
}

/// The values a quantifier has to visit, in ascending order.
fn domain(q: &Quant, exists: bool, env: &Valuation, cx: &Ctx) -> Result<Domain, FoError> {
    let lo = eval_term(&q.lo, env, cx)?;
    let hi = eval_term(&q.hi, env, cx)?;
    if lo > hi {
        return Ok(Domain::List(Vec::new()));
    }
    let guard = if exists {
        Some(q.body.as_ref())
    } else if let Formula::Implies(a, _) = q.body.as_ref() {
        Some(a.as_ref())
    } else {
        None
    };
    if let Some(g) = guard {
        if let Some(mut c) = pinned_values(&q.var, g, env, cx)? {
            c.retain(|x| (lo..=hi).contains(x));
            c.sort_unstable();
            c.dedup();
            return Ok(Domain::List(c));
        }
    }
    let size = hi.abs_diff(lo).saturating_add(1);
    if size > cx.max_range {
        return Err(FoError::RangeOverflow { var: q.var.clone(), size });
    }
    Ok(Domain::Range(lo, hi))
}

enum Domain {
    List(Vec<i128>),
    Range(i128, i128),
}

impl Domain {
    fn iter(&self) -> Box<dyn Iterator<Item = i128> + '_> {
        match self {
            Domain::List(v) => Box::new(v.iter().copied()),
            Domain::Range(lo, hi) => Box::new(*lo..=*hi),
        }
    }
}

fn eval(f: &Formula, env: &mut Valuation, cx: &Ctx) -> Result<bool, FoError> {
    Ok(match f {
        Formula::True => true,
        Formula::False => false,
        Formula::Cmp(op, a, b) => compare(*op, eval_term(a, env, cx)?, eval_term(b, env, cx)?),
        Formula::Rel(name, args) => {
            let r = cx.st.rels.get(name).ok_or_else(|| FoError::UnknownSymbol(name.clone()))?;
            let vals = args.iter().map(|a| eval_term(a, env, cx)).collect::<Result<Vec<_>, _>>()?;
            r.holds(&vals)
        }
        Formula::Not(a) => !eval(a, env, cx)?,
        Formula::And(v) => {
            for a in v {
                if !eval(a, env, cx)? {
                    return Ok(false);
                }
            }
            true
        }
        Formula::Or(v) => {
            for a in v {
                if eval(a, env, cx)? {
                    return Ok(true);
                }
            }
            false
        }
        Formula::Implies(a, b) => !eval(a, env, cx)? || eval(b, env, cx)?,
        Formula::Exists(q) | Formula::Forall(q) => {
            let exists = matches!(f, Formula::Exists(_));
            let dom = domain(q, exists, env, cx)?;
            for x in dom.iter() {
                env.push((q.var.clone(), x));
                let r = eval(&q.body, env, cx);
                env.pop();
                if r? == exists {
                    return Ok(exists);
                }
            }
            !exists
        }
    })
}

fn check_closed(f: &Formula, valuation: &Valuation) -> Result<(), FoError> {
    for v in f.free_vars() {
        if !valuation.iter().any(|(n, _)| *n == v) {
            return Err(FoError::UnboundVariable(v));
        }
    }
    Ok(())
}

/// Truth of `f` under `valuation` with every quantifier relativised to its range.
pub fn eval_formula(
    f: &Formula,
    valuation: &Valuation,
    st: &Structure,
    bounds: &BoundProfile,
) -> Result<bool, FoError> {
    check_closed(f, valuation)?;
    let cx = Ctx { st, max_range: bounds.max_range };
    eval(f, &mut valuation.clone(), &cx)
}

fn witness(f: &Formula, env: &mut Valuation, cx: &Ctx) -> Result<Option<Valuation>, FoError> {
    match f {
        Formula::Exists(q) => {
            let dom = domain(q, true, env, cx)?;
            for x in dom.iter() {
                env.push((q.var.clone(), x));
                let r = witness(&q.body, env, cx);
                env.pop();
                if let Some(mut w) = r? {
                    w.insert(0, (q.var.clone(), x));
                    return Ok(Some(w));
                }
            }
            Ok(None)
        }
        Formula::And(v) if !v.is_empty() => {
            let (last, init) = v.split_last().unwrap();
            for a in init {
                if !eval(a, env, cx)? {
                    return Ok(None);
                }
            }
            witness(last, env, cx)
        }
        other => Ok(if eval(other, env, cx)? { Some(Vec::new()) } else { None }),
    }
}

/// Like [`eval_formula`], but also returns the first satisfying values of the
/// leading existential block (ascending search order).
pub fn find_witness(
    f: &Formula,
    valuation: &Valuation,
    st: &Structure,
    bounds: &BoundProfile,
) -> Result<Option<Valuation>, FoError> {
    check_closed(f, valuation)?;
    let cx = Ctx { st, max_range: bounds.max_range };
    witness(f, &mut valuation.clone(), &cx)
}
