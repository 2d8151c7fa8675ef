//! Polynomial equations to bounded sentences over (Z; +, Q).
//!
//! p(n⃗) = 0 has a solution iff some m ≠ 0 and y⃗ ∈ (mZ)^s give t_m(y⃗) = 0
//! for the canonical term t of p. Each ×_m becomes a fresh existential z with
//! the atom Q(m, left, right, z), so every remaining atom is linear.

use std::collections::BTreeSet;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::poly::IntPolynomial;
use super::qset::QSet;
use super::term::{poly_to_term, Term as WTerm};
use super::WeakMultError;
use crate::fo::{find_witness, BoundProfile, Formula, Structure, Term};

/// Ranges of the quantifiers in a compiled sentence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CompileBounds {
    /// m ranges over [−m_bound, m_bound] minus 0.
    pub m_bound: i128,
    /// Each y_i ranges over [−y_bound, y_bound].
    pub y_bound: i128,
    /// Each intermediate product ranges over [−z_bound, z_bound].
    pub z_bound: i128,
}

impl Default for CompileBounds {
    fn default() -> Self {
        CompileBounds { m_bound: 30, y_bound: 200, z_bound: 200 * 200 * 200 }
    }
}

#[derive(Clone, Debug)]
pub struct Compiled {
    pub sentence: Formula,
    pub term: WTerm,
    pub arity: usize,
    /// Number of Q atoms introduced for products.
    pub products: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "result", rename_all = "kebab-case")]
pub enum Solvability {
    /// t_m(y⃗) = 0 with y⃗ = m·n⃗; `verified` records p(n⃗) = 0 checked directly.
    Found { m: i128, y: Vec<i128>, n: Vec<i128>, verified: bool },
    /// Nothing within the bounds. This says nothing about unsolvability.
    NotFound,
}

struct Product {
    var: String,
    left: Term,
    right: Term,
    /// Largest y index the product depends on (0 for none).
    depth: usize,
}

fn yvar(i: usize) -> String {
    format!("y{i}")
}

// Linear form of a term, pushing a fresh product for every ×.
fn flatten(t: &WTerm, out: &mut Vec<Product>) -> (Term, usize) {
    match t {
        WTerm::One => (Term::var("m"), 0),
        WTerm::Var(i) => (Term::var(&yvar(*i)), *i),
        WTerm::Plus(a, b) | WTerm::Minus(a, b) | WTerm::Times(a, b) => {
            let (la, da) = flatten(a, out);
            let (lb, db) = flatten(b, out);
            let depth = da.max(db);
            match t {
                WTerm::Plus(..) => (la + lb, depth),
                WTerm::Minus(..) => (la - lb, depth),
                _ => {
                    let var = format!("z{}", out.len() + 1);
                    out.push(Product { var: var.clone(), left: la, right: lb, depth });
                    (Term::var(&var), depth)
                }
            }
        }
    }
}

/// The sentence ∃m ≠ 0 ∃y₁ … y_s ∈ mZ: t_m(y⃗) = 0, with products placed
/// right after the last variable they depend on so bounded search prunes early.
pub fn compile_solvability(p: &IntPolynomial, bounds: &CompileBounds) -> Compiled {
    let term = poly_to_term(p);
    let arity = p.arity();
    let mut products = Vec::new();
    let (top, _) = flatten(&term, &mut products);
    let (yb, zb) = (bounds.y_bound, bounds.z_bound);

    let product_block = |depth: usize, inner: Formula| -> Formula {
        products.iter().rev().filter(|pr| pr.depth == depth).fold(inner, |acc, pr| {
            let atom = Formula::rel("Q", vec![Term::var("m"), pr.left.clone(), pr.right.clone(), Term::var(&pr.var)]);
            Formula::exists(&pr.var, Term::int(-zb), Term::int(zb), Formula::And(vec![atom, acc]))
        })
    };

    let mut body = product_block(arity, Formula::eq(top, Term::int(0)));
    for i in (1..=arity).rev() {
        let y = Term::var(&yvar(i));
        let multiple = Formula::Or(vec![
            Formula::eq(y.clone(), Term::int(0)),
            Formula::rel("Q", vec![Term::var("m"), Term::var("m"), y.clone(), y]),
        ]);
        body = Formula::exists(&yvar(i), Term::int(-yb), Term::int(yb), Formula::And(vec![multiple, body]));
        body = product_block(i - 1, body);
    }
    let nonzero = Formula::cmp(crate::fo::Cmp::Ne, Term::var("m"), Term::int(0));
    let sentence = Formula::exists(
        "m",
        Term::int(-bounds.m_bound),
        Term::int(bounds.m_bound),
        Formula::And(vec![nonzero, body]),
    );
    Compiled { sentence, term, arity, products: products.len() }
}

/// Searches the compiled sentence against Q and decodes n⃗ = y⃗/m.
pub fn check_solvability(p: &IntPolynomial, q: Arc<QSet>, bounds: &CompileBounds) -> Result<Solvability, WeakMultError> {
    let c = compile_solvability(p, bounds);
    let st = Structure::new().with_relation("Q", q);
    let profile = BoundProfile { max_range: u128::MAX, ..BoundProfile::default() };
    let w = find_witness(&c.sentence, &Vec::new(), &st, &profile).map_err(|e| WeakMultError::Eval(e.to_string()))?;
    let Some(w) = w else { return Ok(Solvability::NotFound) };
    let get = |name: &str| w.iter().find(|(k, _)| k == name).map(|&(_, v)| v);
    let m = get("m").expect("witness binds m");
    let y: Vec<i128> = (1..=c.arity).map(|i| get(&yvar(i)).expect("witness binds every y")).collect();
    let n: Vec<i128> = y.iter().map(|&v| v / m).collect();
    let exact = y.iter().all(|&v| v % m == 0);
    let verified = exact && p.eval(&n) == Some(0);
    Ok(Solvability::Found { m, y, n, verified })
}

/// Variables bound by the sentence, for display.
pub fn sentence_variables(c: &Compiled) -> BTreeSet<String> {
    let mut out: BTreeSet<String> = (1..=c.arity).map(yvar).collect();
    out.insert("m".into());
    out.extend((1..=c.products).map(|k| format!("z{k}")));
    out
}
