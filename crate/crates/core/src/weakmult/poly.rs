//! Sparse multivariate integer polynomials.

use std::collections::BTreeMap;
use std::fmt;

use super::WeakMultError;
use crate::fo::{parse_term, Term as FoTerm};

/// Σ c·x^e over exponent vectors of length `arity`; zero coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntPolynomial {
    arity: usize,
    terms: BTreeMap<Vec<u32>, i128>,
}

impl IntPolynomial {
    pub fn zero(arity: usize) -> Self {
        IntPolynomial { arity, terms: BTreeMap::new() }
    }

    pub fn constant(arity: usize, c: i128) -> Self {
        Self::monomial(arity, vec![0; arity], c)
    }

    /// x_i, 1-based.
    pub fn var(arity: usize, i: usize) -> Self {
        assert!((1..=arity).contains(&i), "variable index out of range");
        let mut e = vec![0; arity];
        e[i - 1] = 1;
        Self::monomial(arity, e, 1)
    }

    pub fn monomial(arity: usize, exps: Vec<u32>, c: i128) -> Self {
        assert_eq!(exps.len(), arity, "exponent vector has the wrong length");
        let mut p = Self::zero(arity);
        if c != 0 {
            p.terms.insert(exps, c);
        }
        p
    }

    pub fn from_terms(arity: usize, terms: impl IntoIterator<Item = (Vec<u32>, i128)>) -> Self {
        let mut p = Self::zero(arity);
        for (e, c) in terms {
            p.add_term(e, c);
        }
        p
    }

    fn add_term(&mut self, e: Vec<u32>, c: i128) {
        assert_eq!(e.len(), self.arity, "exponent vector has the wrong length");
        let slot = self.terms.entry(e.clone()).or_insert(0);
        *slot += c;
        if *slot == 0 {
            self.terms.remove(&e);
        }
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, i128)> {
        self.terms.iter().map(|(e, &c)| (e, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant if the polynomial has no variables.
    pub fn as_constant(&self) -> Option<i128> {
        match self.terms.len() {
            0 => Some(0),
            1 => self.terms.get(&vec![0; self.arity]).copied(),
            _ => None,
        }
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn all_negative(&self) -> bool {
        !self.is_zero() && self.terms.values().all(|&c| c < 0)
    }

    /// Lowest variable index (1-based) with a positive exponent somewhere.
    pub fn lowest_var(&self) -> Option<usize> {
        (0..self.arity).find(|&i| self.terms.keys().any(|e| e[i] > 0)).map(|i| i + 1)
    }

    /// Splits p = p₀ + x_i·r where p₀ does not involve x_i.
    pub fn split_by_var(&self, i: usize) -> (IntPolynomial, IntPolynomial) {
        let mut p0 = Self::zero(self.arity);
        let mut r = Self::zero(self.arity);
        for (e, &c) in &self.terms {
            if e[i - 1] == 0 {
                p0.terms.insert(e.clone(), c);
            } else {
                let mut e2 = e.clone();
                e2[i - 1] -= 1;
                r.terms.insert(e2, c);
            }
        }
        (p0, r)
    }

    /// Same polynomial in more variables.
    pub fn widen(&self, arity: usize) -> Self {
        assert!(arity >= self.arity);
        Self::from_terms(
            arity,
            self.terms.iter().map(|(e, &c)| {
                let mut e2 = e.clone();
                e2.resize(arity, 0);
                (e2, c)
            }),
        )
    }

    pub fn scale(&self, k: i128) -> Self {
        Self::from_terms(self.arity, self.terms.iter().map(|(e, &c)| (e.clone(), c * k)))
    }

    /// Checked evaluation; `None` on overflow.
    pub fn eval(&self, x: &[i128]) -> Option<i128> {
        assert_eq!(x.len(), self.arity, "argument count differs from arity");
        let mut acc: i128 = 0;
        for (e, &c) in &self.terms {
            let mut v = c;
            for (xi, &k) in x.iter().zip(e) {
                v = v.checked_mul(xi.checked_pow(k)?)?;
            }
            acc = acc.checked_add(v)?;
        }
        Some(acc)
    }

    /// Parses `x1*x2 - 6`-style text; variables are `x1`, `x2`, ….
    pub fn parse(src: &str, arity: Option<usize>) -> Result<Self, WeakMultError> {
        let t = parse_term(src).map_err(|e| WeakMultError::Parse(e.to_string()))?;
        let need = max_var(&t)?;
        let arity = arity.unwrap_or(need.max(1));
        if need > arity {
            return Err(WeakMultError::ArityMismatch { expected: arity, found: need });
        }
        from_fo_term(&t, arity)
    }
}

fn var_index(name: &str) -> Result<usize, WeakMultError> {
    name.strip_prefix('x')
        .and_then(|d| d.parse::<usize>().ok())
        .filter(|&i| i >= 1)
        .ok_or_else(|| WeakMultError::Parse(format!("unknown variable `{name}`, expected x1, x2, ...")))
}

fn max_var(t: &FoTerm) -> Result<usize, WeakMultError> {
    Ok(match t {
        FoTerm::Int(_) => 0,
        FoTerm::Var(v) => var_index(v)?,
        FoTerm::Add(a, b) | FoTerm::Sub(a, b) | FoTerm::Mul(a, b) => max_var(a)?.max(max_var(b)?),
        FoTerm::Neg(a) => max_var(a)?,
        FoTerm::Seq(name, _) => return Err(WeakMultError::Parse(format!("unexpected application of `{name}`"))),
    })
}

fn from_fo_term(t: &FoTerm, arity: usize) -> Result<IntPolynomial, WeakMultError> {
    Ok(match t {
        FoTerm::Int(c) => IntPolynomial::constant(arity, *c),
        FoTerm::Var(v) => IntPolynomial::var(arity, var_index(v)?),
        FoTerm::Add(a, b) => &from_fo_term(a, arity)? + &from_fo_term(b, arity)?,
        FoTerm::Sub(a, b) => &from_fo_term(a, arity)? - &from_fo_term(b, arity)?,
        FoTerm::Mul(a, b) => &from_fo_term(a, arity)? * &from_fo_term(b, arity)?,
        FoTerm::Neg(a) => -&from_fo_term(a, arity)?,
        FoTerm::Seq(name, _) => return Err(WeakMultError::Parse(format!("unexpected application of `{name}`"))),
    })
}

impl std::ops::Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, o: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.arity, o.arity, "arity mismatch");
        let mut p = self.clone();
        for (e, &c) in &o.terms {
            p.add_term(e.clone(), c);
        }
        p
    }
}

impl std::ops::Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, o: &IntPolynomial) -> IntPolynomial {
        self + &(-o)
    }
}

impl std::ops::Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        self.scale(-1)
    }
}

impl std::ops::Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, o: &IntPolynomial) -> IntPolynomial {
        assert_eq!(self.arity, o.arity, "arity mismatch");
        let mut p = IntPolynomial::zero(self.arity);
        for (e1, &c1) in &self.terms {
            for (e2, &c2) in &o.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1 * c2);
            }
        }
        p
    }
}

/// Highest degree first, x^e written as repeated products so the text parses back.
impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut order: Vec<(&Vec<u32>, i128)> = self.terms().collect();
        order.sort_by(|a, b| {
            let (da, db): (u32, u32) = (a.0.iter().sum(), b.0.iter().sum());
            db.cmp(&da).then_with(|| b.0.cmp(a.0))
        });
        for (idx, (e, c)) in order.into_iter().enumerate() {
            let factors: Vec<String> = e
                .iter()
                .enumerate()
                .flat_map(|(i, &k)| std::iter::repeat(format!("x{}", i + 1)).take(k as usize))
                .collect();
            let mag = c.unsigned_abs();
            match (idx, c < 0) {
                (0, true) => write!(f, "-")?,
                (0, false) => {}
                (_, true) => write!(f, " - ")?,
                (_, false) => write!(f, " + ")?,
            }
            if factors.is_empty() {
                write!(f, "{mag}")?;
            } else if mag == 1 {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{mag}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_display() {
        let x1 = IntPolynomial::var(2, 1);
        let x2 = IntPolynomial::var(2, 2);
        let p = &(&x1 + &x2) * &(&x1 - &x2);
        assert_eq!(p.to_string(), "x1*x1 - x2*x2");
        assert_eq!(IntPolynomial::parse(&p.to_string(), Some(2)).unwrap(), p);
        assert!((&p - &p).is_zero());
        assert_eq!(p.eval(&[3, 2]), Some(5));
    }

    #[test]
    fn parse_infers_arity() {
        let p = IntPolynomial::parse("x1*x1 + x2*x2 - x3*x3", None).unwrap();
        assert_eq!(p.arity(), 3);
        assert_eq!(p.eval(&[3, 4, 5]), Some(0));
        assert!(IntPolynomial::parse("x3", Some(2)).is_err());
        assert!(IntPolynomial::parse("y + 1", None).is_err());
        assert_eq!(IntPolynomial::parse("-7", None).unwrap().as_constant(), Some(-7));
    }
}
