//! Expression trees for generalised polynomials in one integer variable `n`.

use std::fmt;

use num_bigint::BigInt;

/// Byte range in the source text.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Debug)]
pub struct Expr {
    pub node: Node,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Node {
    Int(BigInt),
    Const(String),
    Var,
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    Floor(Box<Expr>),
    Nint(Box<Expr>),
    Frac(Box<Expr>),
    Norm(Box<Expr>),
    /// 1 if the first value is strictly below the second, else 0.
    IndLess(Box<Expr>, Box<Expr>),
}

/// Structural equality; source positions are ignored.
impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.node == other.node
    }
}

impl Eq for Expr {}

impl Expr {
    pub fn new(node: Node) -> Self {
        Expr { node, span: Span::default() }
    }

    pub fn int(v: impl Into<BigInt>) -> Self {
        Expr::new(Node::Int(v.into()))
    }

    pub fn constant(name: &str) -> Self {
        Expr::new(Node::Const(name.to_string()))
    }

    pub fn var() -> Self {
        Expr::new(Node::Var)
    }

    pub fn add(a: Expr, b: Expr) -> Self {
        Expr::new(Node::Add(Box::new(a), Box::new(b)))
    }

    pub fn sub(a: Expr, b: Expr) -> Self {
        Expr::new(Node::Sub(Box::new(a), Box::new(b)))
    }

    pub fn mul(a: Expr, b: Expr) -> Self {
        Expr::new(Node::Mul(Box::new(a), Box::new(b)))
    }

    pub fn neg(a: Expr) -> Self {
        Expr::new(Node::Neg(Box::new(a)))
    }

    pub fn floor(a: Expr) -> Self {
        Expr::new(Node::Floor(Box::new(a)))
    }

    pub fn nint(a: Expr) -> Self {
        Expr::new(Node::Nint(Box::new(a)))
    }

    pub fn frac(a: Expr) -> Self {
        Expr::new(Node::Frac(Box::new(a)))
    }

    pub fn norm(a: Expr) -> Self {
        Expr::new(Node::Norm(Box::new(a)))
    }

    /// `ind(norm(a) < b)`.
    pub fn ind_norm_less(a: Expr, b: Expr) -> Self {
        Expr::new(Node::IndLess(Box::new(Expr::norm(a)), Box::new(b)))
    }

    /// Names of all constants, in order of first appearance.
    pub fn constants(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.walk(&mut |e| {
            if let Node::Const(c) = &e.node {
                if !out.contains(c) {
                    out.push(c.clone());
                }
            }
        });
        out
    }

    pub fn walk(&self, f: &mut impl FnMut(&Expr)) {
        f(self);
        match &self.node {
            Node::Int(_) | Node::Const(_) | Node::Var => {}
            Node::Add(a, b) | Node::Sub(a, b) | Node::Mul(a, b) | Node::IndLess(a, b) => {
                a.walk(f);
                b.walk(f);
            }
            Node::Neg(a) | Node::Floor(a) | Node::Nint(a) | Node::Frac(a) | Node::Norm(a) => a.walk(f),
        }
    }

    fn fmt_prec(&self, f: &mut fmt::Formatter<'_>, prec: u8) -> fmt::Result {
        let (own, body): (u8, Box<dyn Fn(&mut fmt::Formatter<'_>) -> fmt::Result + '_>) = match &self.node {
            Node::Int(v) => (3, Box::new(move |f| write!(f, "{v}"))),
            Node::Const(c) => (3, Box::new(move |f| write!(f, "{c}"))),
            Node::Var => (3, Box::new(|f| write!(f, "n"))),
            Node::Add(a, b) => (1, Box::new(move |f| {
                a.fmt_prec(f, 1)?;
                write!(f, " + ")?;
                b.fmt_prec(f, 2)
            })),
            Node::Sub(a, b) => (1, Box::new(move |f| {
                a.fmt_prec(f, 1)?;
                write!(f, " - ")?;
                b.fmt_prec(f, 2)
            })),
            Node::Mul(a, b) => (2, Box::new(move |f| {
                a.fmt_prec(f, 2)?;
                write!(f, "*")?;
                b.fmt_prec(f, 3)
            })),
            Node::Neg(a) => (3, Box::new(move |f| {
                write!(f, "-")?;
                a.fmt_prec(f, 3)
            })),
            Node::Floor(a) => (3, Box::new(move |f| write!(f, "floor({a})"))),
            Node::Nint(a) => (3, Box::new(move |f| write!(f, "nint({a})"))),
            Node::Frac(a) => (3, Box::new(move |f| write!(f, "frac({a})"))),
            Node::Norm(a) => (3, Box::new(move |f| write!(f, "norm({a})"))),
            Node::IndLess(a, b) => (3, Box::new(move |f| write!(f, "ind({a} < {b})"))),
        };
        if own < prec {
            write!(f, "(")?;
            body(f)?;
            write!(f, ")")
        } else {
            body(f)
        }
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_prec(f, 0)
    }
}

/// g(n) = ⌊βn⌊αn⌉⌉ with the given constant names.
pub fn theorem_a_expr(alpha: &str, beta: &str) -> Expr {
    let inner = Expr::nint(Expr::mul(Expr::constant(alpha), Expr::var()));
    Expr::nint(Expr::mul(Expr::mul(Expr::constant(beta), Expr::var()), inner))
}

/// g(n) = 1 if ‖αn²‖ < ρ, else 0.
pub fn bohr_expr(alpha: &str, rho: &str) -> Expr {
    let sq = Expr::mul(Expr::mul(Expr::constant(alpha), Expr::var()), Expr::var());
    Expr::ind_norm_less(sq, Expr::constant(rho))
}
