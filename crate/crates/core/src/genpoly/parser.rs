//! Recursive-descent parser for the expression grammar
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := factor ("*" factor)*
//! factor := INT | NAME | "n" | "-" factor | "(" expr ")"
//!         | "floor(" expr ")" | "nint(" expr ")" | "frac(" expr ")"
//!         | "norm(" expr ")" | "ind(" "norm(" expr ")" "<" expr ")"
//! ```

use num_bigint::BigInt;

use super::ast::{Expr, Node, Span};
use super::GenPolyError;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Plus,
    Minus,
    Star,
    LParen,
    RParen,
    Less,
    End,
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, Span), GenPolyError> {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&c) = self.src.get(self.pos) else {
            return Ok((Tok::End, Span { start, end: start }));
        };
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'<' => Tok::Less,
            b'0'..=b'9' => {
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok((Tok::Int(text.parse().unwrap()), Span { start, end: self.pos }));
            }
            b'a'..=b'z' => {
                while self.pos < self.src.len()
                    && matches!(self.src[self.pos], b'a'..=b'z' | b'0'..=b'9' | b'_')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                return Ok((Tok::Name(text.to_string()), Span { start, end: self.pos }));
            }
            _ => {
                return Err(GenPolyError::Syntax {
                    pos: start,
                    expected: vec!["expression".into()],
                })
            }
        };
        self.pos += 1;
        Ok((tok, Span { start, end: self.pos }))
    }
}

struct Parser<'a> {
    lex: Lexer<'a>,
    tok: Tok,
    span: Span,
}

const FUNCS: [&str; 5] = ["floor", "nint", "frac", "norm", "ind"];

impl<'a> Parser<'a> {
    fn bump(&mut self) -> Result<(), GenPolyError> {
        let (t, s) = self.lex.next()?;
        self.tok = t;
        self.span = s;
        Ok(())
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T, GenPolyError> {
        Err(GenPolyError::Syntax {
            pos: self.span.start,
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, t: Tok, what: &str) -> Result<usize, GenPolyError> {
        if self.tok == t {
            let end = self.span.end;
            self.bump()?;
            Ok(end)
        } else {
            self.fail(&[what])
        }
    }

    fn expr(&mut self) -> Result<Expr, GenPolyError> {
        let mut lhs = self.term()?;
        loop {
            let sub = match self.tok {
                Tok::Plus => false,
                Tok::Minus => true,
                _ => return Ok(lhs),
            };
            self.bump()?;
            let rhs = self.term()?;
            let span = Span { start: lhs.span.start, end: rhs.span.end };
            let node = if sub {
                Node::Sub(Box::new(lhs), Box::new(rhs))
            } else {
                Node::Add(Box::new(lhs), Box::new(rhs))
            };
            lhs = Expr { node, span };
        }
    }

    fn term(&mut self) -> Result<Expr, GenPolyError> {
        let mut lhs = self.factor()?;
        while self.tok == Tok::Star {
            self.bump()?;
            let rhs = self.factor()?;
            let span = Span { start: lhs.span.start, end: rhs.span.end };
            lhs = Expr { node: Node::Mul(Box::new(lhs), Box::new(rhs)), span };
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, GenPolyError> {
        let start = self.span.start;
        match self.tok.clone() {
            Tok::Int(v) => {
                let span = self.span;
                self.bump()?;
                Ok(Expr { node: Node::Int(v), span })
            }
            Tok::Minus => {
                self.bump()?;
                let inner = self.factor()?;
                let span = Span { start, end: inner.span.end };
                Ok(Expr { node: Node::Neg(Box::new(inner)), span })
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr()?;
                let end = self.expect(Tok::RParen, ")")?;
                Ok(Expr { node: inner.node, span: Span { start, end } })
            }
            Tok::Name(name) => {
                let span = self.span;
                self.bump()?;
                if name == "n" {
                    return Ok(Expr { node: Node::Var, span });
                }
                if !FUNCS.contains(&name.as_str()) {
                    return Ok(Expr { node: Node::Const(name), span });
                }
                self.expect(Tok::LParen, "(")?;
                if name == "ind" {
                    let nstart = self.span.start;
                    if self.tok != Tok::Name("norm".into()) {
                        return self.fail(&["norm"]);
                    }
                    self.bump()?;
                    self.expect(Tok::LParen, "(")?;
                    let a = self.expr()?;
                    let nend = self.expect(Tok::RParen, ")")?;
                    let lhs = Expr { node: Node::Norm(Box::new(a)), span: Span { start: nstart, end: nend } };
                    self.expect(Tok::Less, "<")?;
                    let rhs = self.expr()?;
                    let end = self.expect(Tok::RParen, ")")?;
                    return Ok(Expr { node: Node::IndLess(Box::new(lhs), Box::new(rhs)), span: Span { start, end } });
                }
                let a = Box::new(self.expr()?);
                let end = self.expect(Tok::RParen, ")")?;
                let node = match name.as_str() {
                    "floor" => Node::Floor(a),
                    "nint" => Node::Nint(a),
                    "frac" => Node::Frac(a),
                    _ => Node::Norm(a),
                };
                Ok(Expr { node, span: Span { start, end } })
            }
            _ => self.fail(&["integer", "name", "n", "-", "("]),
        }
    }
}

/// Parses an expression; errors carry a byte offset and the expected tokens.
pub fn parse(text: &str) -> Result<Expr, GenPolyError> {
    let mut p = Parser { lex: Lexer { src: text.as_bytes(), pos: 0 }, tok: Tok::End, span: Span::default() };
    p.bump()?;
    let e = p.expr()?;
    if p.tok != Tok::End {
        return p.fail(&["+", "-", "*", "end of input"]);
    }
    Ok(e)
}
