//! First-order formulas over (Z; <, +, 1) with named sequences and
//! relations, every quantifier carrying an explicit range.

use std::fmt;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Term {
    Int(i128),
    Var(String),
    Add(Box<Term>, Box<Term>),
    Sub(Box<Term>, Box<Term>),
    Mul(Box<Term>, Box<Term>),
    Neg(Box<Term>),
    /// Application of a named integer sequence.
    Seq(String, Box<Term>),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cmp {
    Eq,
    Ne,
    Lt,
    Le,
    Gt,
    Ge,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Formula {
    True,
    False,
    Cmp(Cmp, Term, Term),
    Rel(String, Vec<Term>),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(Quant),
    Forall(Quant),
}

/// A bounded quantifier: `var` ranges over [lo, hi].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Quant {
    pub var: String,
    pub lo: Term,
    pub hi: Term,
    pub body: Box<Formula>,
}

impl Term {
    pub fn int(v: i128) -> Self {
        Term::Int(v)
    }

    pub fn var(name: &str) -> Self {
        Term::Var(name.to_string())
    }

    pub fn seq(name: &str, arg: Term) -> Self {
        Term::Seq(name.to_string(), Box::new(arg))
    }

    pub fn scale(k: i128, t: Term) -> Self {
        Term::Mul(Box::new(Term::Int(k)), Box::new(t))
    }

    pub fn free_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Int(_) => {}
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone());
                }
            }
            Term::Add(a, b) | Term::Sub(a, b) | Term::Mul(a, b) => {
                a.free_vars(out);
                b.free_vars(out);
            }
            Term::Neg(a) | Term::Seq(_, a) => a.free_vars(out),
        }
    }

    pub fn mentions(&self, v: &str) -> bool {
        let mut fv = Vec::new();
        self.free_vars(&mut fv);
        fv.iter().any(|x| x == v)
    }
}

impl std::ops::Add for Term {
    type Output = Term;
    fn add(self, o: Term) -> Term {
        Term::Add(Box::new(self), Box::new(o))
    }
}

impl std::ops::Sub for Term {
    type Output = Term;
    fn sub(self, o: Term) -> Term {
        Term::Sub(Box::new(self), Box::new(o))
    }
}

impl std::ops::Mul for Term {
    type Output = Term;
    fn mul(self, o: Term) -> Term {
        Term::Mul(Box::new(self), Box::new(o))
    }
}

impl Formula {
    pub fn cmp(op: Cmp, a: Term, b: Term) -> Self {
        Formula::Cmp(op, a, b)
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Cmp(Cmp::Eq, a, b)
    }

    pub fn rel(name: &str, args: Vec<Term>) -> Self {
        Formula::Rel(name.to_string(), args)
    }

    pub fn not(f: Formula) -> Self {
        Formula::Not(Box::new(f))
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(var: &str, lo: Term, hi: Term, body: Formula) -> Self {
        Formula::Exists(Quant { var: var.to_string(), lo, hi, body: Box::new(body) })
    }

    pub fn forall(var: &str, lo: Term, hi: Term, body: Formula) -> Self {
        Formula::Forall(Quant { var: var.to_string(), lo, hi, body: Box::new(body) })
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut Vec<String>) {
        let add_term = |t: &Term, bound: &Vec<String>, out: &mut Vec<String>| {
            let mut fv = Vec::new();
            t.free_vars(&mut fv);
            for v in fv {
                if !bound.contains(&v) && !out.contains(&v) {
                    out.push(v);
                }
            }
        };
        match self {
            Formula::True | Formula::False => {}
            Formula::Cmp(_, a, b) => {
                add_term(a, bound, out);
                add_term(b, bound, out);
            }
            Formula::Rel(_, args) => {
                for a in args {
                    add_term(a, bound, out);
                }
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(fs) | Formula::Or(fs) => {
                for f in fs {
                    f.collect_free(bound, out);
                }
            }
            Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(q) | Formula::Forall(q) => {
                add_term(&q.lo, bound, out);
                add_term(&q.hi, bound, out);
                bound.push(q.var.clone());
                q.body.collect_free(bound, out);
                bound.pop();
            }
        }
    }
}

fn term_prec(t: &Term) -> u8 {
    match t {
        Term::Add(..) | Term::Sub(..) => 1,
        Term::Mul(..) => 2,
        _ => 3,
    }
}

fn fmt_term(t: &Term, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
    let p = term_prec(t);
    if p < min {
        write!(f, "(")?;
    }
    match t {
        Term::Int(v) if *v < 0 => write!(f, "-{}", v.unsigned_abs())?,
        Term::Int(v) => write!(f, "{v}")?,
        Term::Var(v) => write!(f, "{v}")?,
        Term::Add(a, b) => {
            fmt_term(a, f, 1)?;
            write!(f, " + ")?;
            fmt_term(b, f, 2)?;
        }
        Term::Sub(a, b) => {
            fmt_term(a, f, 1)?;
            write!(f, " - ")?;
            fmt_term(b, f, 2)?;
        }
        Term::Mul(a, b) => {
            fmt_term(a, f, 2)?;
            write!(f, "*")?;
            fmt_term(b, f, 3)?;
        }
        Term::Neg(a) => {
            write!(f, "-")?;
            fmt_term(a, f, 3)?;
        }
        Term::Seq(name, a) => {
            write!(f, "{name}(")?;
            fmt_term(a, f, 0)?;
            write!(f, ")")?;
        }
    }
    if p < min {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_term(self, f, 0)
    }
}

impl Cmp {
    pub fn symbol(self) -> &'static str {
        match self {
            Cmp::Eq => "=",
            Cmp::Ne => "!=",
            Cmp::Lt => "<",
            Cmp::Le => "<=",
            Cmp::Gt => ">",
            Cmp::Ge => ">=",
        }
    }
}

// Precedence: 0 implication, 1 or, 2 and, 3 unary/atoms. Quantifiers extend
// as far right as possible, so they are parenthesised unless outermost.
fn formula_prec(x: &Formula) -> u8 {
    match x {
        Formula::Implies(..) => 0,
        Formula::Or(v) if v.len() > 1 => 1,
        Formula::And(v) if v.len() > 1 => 2,
        Formula::Exists(_) | Formula::Forall(_) => 0,
        _ => 3,
    }
}

fn fmt_formula(x: &Formula, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
    let p = formula_prec(x);
    if p < min {
        write!(f, "(")?;
    }
    match x {
        Formula::True => write!(f, "true")?,
        Formula::False => write!(f, "false")?,
        Formula::Cmp(op, a, b) => write!(f, "{a} {} {b}", op.symbol())?,
        Formula::Rel(name, args) => {
            write!(f, "{name}(")?;
            for (i, a) in args.iter().enumerate() {
                if i > 0 {
                    write!(f, ", ")?;
                }
                write!(f, "{a}")?;
            }
            write!(f, ")")?;
        }
        Formula::Not(a) => {
            write!(f, "not ")?;
            fmt_formula(a, f, 3)?;
        }
        Formula::And(v) | Formula::Or(v) if v.is_empty() => {
            write!(f, "{}", if matches!(x, Formula::And(_)) { "true" } else { "false" })?
        }
        Formula::And(v) | Formula::Or(v) if v.len() == 1 => fmt_formula(&v[0], f, min.max(3))?,
        Formula::And(v) | Formula::Or(v) => {
            let (word, level) = if matches!(x, Formula::And(_)) { ("and", 3) } else { ("or", 2) };
            for (i, a) in v.iter().enumerate() {
                if i > 0 {
                    write!(f, " {word} ")?;
                }
                fmt_formula(a, f, level)?;
            }
        }
        Formula::Implies(a, b) => {
            fmt_formula(a, f, 1)?;
            write!(f, " -> ")?;
            fmt_formula(b, f, 0)?;
        }
        Formula::Exists(q) | Formula::Forall(q) => {
            let word = if matches!(x, Formula::Exists(_)) { "exists" } else { "forall" };
            write!(f, "{word} {} in [{}, {}]: ", q.var, q.lo, q.hi)?;
            fmt_formula(&q.body, f, 0)?;
        }
    }
    if p < min {
        write!(f, ")")?;
    }
    Ok(())
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt_formula(self, f, 0)
    }
}
