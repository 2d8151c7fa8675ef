//! Text syntax for formulas.
//!
//! ```text
//! formula := disj ("->" formula)?
//! disj    := conj ("or" conj)*
//! conj    := unary ("and" unary)*
//! unary   := "not" unary | quant | "true" | "false" | "(" formula ")" | atom
//! quant   := ("exists" | "forall") NAME "in" "[" term "," term "]" ":" formula
//! atom    := term CMP term | NAME "(" term ("," term)* ")"
//! term    := prod (("+" | "-") prod)*
//! prod    := factor ("*" factor)*
//! factor  := INT | NAME | NAME "(" term ")" | "-" factor | "(" term ")"
//! ```
//!
//! A name applied to several arguments in atom position is a relation; with a
//! single argument inside a term it is a sequence. `R(t)` standing alone as an
//! atom is read as a unary relation.

use super::formula::{Cmp, Formula, Term};
use super::FoError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(i128),
    Name(String),
    Sym(&'static str),
    End,
}

const SYMBOLS: [&str; 16] =
    ["->", "!=", "<=", ">=", "+", "-", "*", "(", ")", "[", "]", ",", ":", "=", "<", ">"];

fn lex(src: &str) -> Result<Vec<(Tok, usize)>, FoError> {
    let b = src.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    'outer: while i < b.len() {
        if b[i].is_ascii_whitespace() {
            i += 1;
            continue;
        }
        if b[i].is_ascii_digit() {
            let s = i;
            while i < b.len() && b[i].is_ascii_digit() {
                i += 1;
            }
            let v = src[s..i]
                .parse::<i128>()
                .map_err(|_| FoError::Syntax { pos: s, expected: "integer within 128 bits".into() })?;
            out.push((Tok::Int(v), s));
            continue;
        }
        if b[i].is_ascii_alphabetic() {
            let s = i;
            while i < b.len() && (b[i].is_ascii_alphanumeric() || b[i] == b'_' || b[i] == b'\'') {
                i += 1;
            }
            out.push((Tok::Name(src[s..i].to_string()), s));
            continue;
        }
        for sym in SYMBOLS {
            if src[i..].starts_with(sym) {
                out.push((Tok::Sym(sym), i));
                i += sym.len();
                continue 'outer;
            }
        }
        return Err(FoError::Syntax { pos: i, expected: "token".into() });
    }
    out.push((Tok::End, b.len()));
    Ok(out)
}

const KEYWORDS: [&str; 8] = ["exists", "forall", "in", "and", "or", "not", "true", "false"];

struct Parser {
    toks: Vec<(Tok, usize)>,
    at: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn pos(&self) -> usize {
        self.toks[self.at].1
    }

    fn err<T>(&self, expected: &str) -> Result<T, FoError> {
        Err(FoError::Syntax { pos: self.pos(), expected: expected.into() })
    }

    fn eat_sym(&mut self, s: &str) -> bool {
        if matches!(self.peek(), Tok::Sym(x) if *x == s) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect_sym(&mut self, s: &str) -> Result<(), FoError> {
        if self.eat_sym(s) {
            Ok(())
        } else {
            self.err(&format!("`{s}`"))
        }
    }

    fn eat_word(&mut self, w: &str) -> bool {
        if matches!(self.peek(), Tok::Name(x) if x == w) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn ident(&mut self) -> Result<String, FoError> {
        match self.peek().clone() {
            Tok::Name(n) if !KEYWORDS.contains(&n.as_str()) => {
                self.at += 1;
                Ok(n)
            }
            _ => self.err("identifier"),
        }
    }

    fn formula(&mut self) -> Result<Formula, FoError> {
        let lhs = self.disj()?;
        if self.eat_sym("->") {
            let rhs = self.formula()?;
            return Ok(Formula::implies(lhs, rhs));
        }
        Ok(lhs)
    }

    fn disj(&mut self) -> Result<Formula, FoError> {
        let mut parts = vec![self.conj()?];
        while self.eat_word("or") {
            parts.push(self.conj()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::Or(parts) })
    }

    fn conj(&mut self) -> Result<Formula, FoError> {
        let mut parts = vec![self.unary()?];
        while self.eat_word("and") {
            parts.push(self.unary()?);
        }
        Ok(if parts.len() == 1 { parts.pop().unwrap() } else { Formula::And(parts) })
    }

    fn unary(&mut self) -> Result<Formula, FoError> {
        if self.eat_word("not") {
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat_word("true") {
            return Ok(Formula::True);
        }
        if self.eat_word("false") {
            return Ok(Formula::False);
        }
        for (word, exists) in [("exists", true), ("forall", false)] {
            if self.eat_word(word) {
                let var = self.ident()?;
                if !self.eat_word("in") {
                    return self.err("`in`");
                }
                self.expect_sym("[")?;
                let lo = self.term()?;
                self.expect_sym(",")?;
                let hi = self.term()?;
                self.expect_sym("]")?;
                self.expect_sym(":")?;
                let body = self.formula()?;
                return Ok(if exists {
                    Formula::exists(&var, lo, hi, body)
                } else {
                    Formula::forall(&var, lo, hi, body)
                });
            }
        }
        if matches!(self.peek(), Tok::Sym("(")) {
            // Either a parenthesised formula or a term starting an atom.
            let save = self.at;
            self.at += 1;
            if let Ok(f) = self.formula() {
                if self.eat_sym(")") && !self.at_cmp() && !self.at_arith() {
                    return Ok(f);
                }
            }
            self.at = save;
        }
        self.atom()
    }

    fn at_cmp(&self) -> bool {
        matches!(self.peek(), Tok::Sym("=" | "!=" | "<" | "<=" | ">" | ">="))
    }

    fn at_arith(&self) -> bool {
        matches!(self.peek(), Tok::Sym("+" | "-" | "*"))
    }

    fn atom(&mut self) -> Result<Formula, FoError> {
        // Relation atom: NAME "(" args ")" not followed by a comparison.
        if let Tok::Name(n) = self.peek().clone() {
            if !KEYWORDS.contains(&n.as_str()) && matches!(self.toks[self.at + 1].0, Tok::Sym("(")) {
                let save = self.at;
                self.at += 2;
                let mut args = vec![self.term()?];
                while self.eat_sym(",") {
                    args.push(self.term()?);
                }
                self.expect_sym(")")?;
                if !self.at_cmp() && !self.at_arith() {
                    return Ok(Formula::Rel(n, args));
                }
                self.at = save;
            }
        }
        let lhs = self.term()?;
        let op = match self.peek() {
            Tok::Sym("=") => Cmp::Eq,
            Tok::Sym("!=") => Cmp::Ne,
            Tok::Sym("<") => Cmp::Lt,
            Tok::Sym("<=") => Cmp::Le,
            Tok::Sym(">") => Cmp::Gt,
            Tok::Sym(">=") => Cmp::Ge,
            _ => return self.err("comparison operator"),
        };
        self.at += 1;
        let rhs = self.term()?;
        Ok(Formula::Cmp(op, lhs, rhs))
    }

    fn term(&mut self) -> Result<Term, FoError> {
        let mut t = self.prod()?;
        loop {
            if self.eat_sym("+") {
                t = t + self.prod()?;
            } else if self.eat_sym("-") {
                t = t - self.prod()?;
            } else {
                return Ok(t);
            }
        }
    }

    fn prod(&mut self) -> Result<Term, FoError> {
        let mut t = self.factor()?;
        while self.eat_sym("*") {
            t = t * self.factor()?;
        }
        Ok(t)
    }

    fn factor(&mut self) -> Result<Term, FoError> {
        match self.peek().clone() {
            Tok::Int(v) => {
                self.at += 1;
                Ok(Term::Int(v))
            }
            Tok::Sym("-") => {
                self.at += 1;
                Ok(Term::Neg(Box::new(self.factor()?)))
            }
            Tok::Sym("(") => {
                self.at += 1;
                let t = self.term()?;
                self.expect_sym(")")?;
                Ok(t)
            }
            Tok::Name(_) => {
                let n = self.ident()?;
                if self.eat_sym("(") {
                    let arg = self.term()?;
                    self.expect_sym(")")?;
                    Ok(Term::Seq(n, Box::new(arg)))
                } else {
                    Ok(Term::Var(n))
                }
            }
            _ => self.err("term"),
        }
    }
}

pub fn parse_formula(src: &str) -> Result<Formula, FoError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let f = p.formula()?;
    if *p.peek() != Tok::End {
        return p.err("end of input");
    }
    Ok(f)
}

pub fn parse_term(src: &str) -> Result<Term, FoError> {
    let mut p = Parser { toks: lex(src)?, at: 0 };
    let t = p.term()?;
    if *p.peek() != Tok::End {
        return p.err("end of input");
    }
    Ok(t)
}
