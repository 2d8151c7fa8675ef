use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::cf::convergent_denominators;
use super::{ApproxWitness, SearchBudget, SearchError, Strategy};
use crate::genpoly::{eval, Context, Expr, Node, SecondDerivativeScan, TheoremA, Value};
use crate::numeric::{AlgebraicReal, Fixed, FracMul, Threshold, FIXED_BITS};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

/// Candidate order: convergent denominators (and, for the multiples
/// strategy, their small multiples), then an ascending scan.
fn candidates(x: &AlgebraicReal, budget: &SearchBudget, multiples: u64) -> Box<dyn Iterator<Item = u64>> {
    let max = budget.max_candidate;
    let scan = 1..=max;
    match budget.strategy {
        Strategy::Exhaustive => Box::new(scan),
        s => {
            let qs = if x.is_rational() { vec![] } else { convergent_denominators(x, max) };
            let mut first: Vec<u64> = qs.clone();
            if multiples > 1 {
                for &q in &qs {
                    first.extend((2..=multiples).map(|k| k * q).filter(|&v| v <= max));
                }
            }
            if s == Strategy::Hybrid {
                Box::new(first.into_iter().chain(scan))
            } else {
                Box::new(first.into_iter())
            }
        }
    }
}

/// Some m ≤ max_candidate with ‖xm‖ < ε; the least such m under the
/// exhaustive strategy.
pub fn find_small_norm(x: &AlgebraicReal, eps: &BigRational, budget: &SearchBudget) -> Result<ApproxWitness, SearchError> {
    if *eps <= BigRational::zero() {
        return Err(SearchError::InvalidArgument("epsilon must be positive".into()));
    }
    let fm = FracMul::new(x)?;
    let th = Threshold::new(AlgebraicReal::from_rational(x.field(), eps.clone()));
    for m in candidates(x, budget, 1) {
        if fm.norm_lt(m as i128, &th) {
            let v = fm.frac_signed_exact(m as i128).abs();
            return Ok(ApproxWitness { m: m as i64, achieved: vec![("norm(x*m)".into(), v)] });
        }
    }
    Err(SearchError::NotFoundWithinBudget)
}

/// m with ‖αm‖ < 1/(2r) and ‖βm⌊αm⌉‖ < 1/(2r²).
pub fn find_progression_base(r: i64, g: &TheoremA, budget: &SearchBudget) -> Result<ApproxWitness, SearchError> {
    if r < 2 {
        return Err(SearchError::PreconditionViolated("r must be at least 2".into()));
    }
    let field = g.alpha().value().field().clone();
    let t1 = Threshold::new(AlgebraicReal::from_rational(&field, rat(1, 2 * r)));
    let t2 = Threshold::new(AlgebraicReal::from_rational(&field, rat(1, 2 * r * r)));
    for m in candidates(g.alpha().value(), budget, r as u64 + 1) {
        let m = m as i64;
        if !g.alpha().norm_lt(m as i128, &t1) {
            continue;
        }
        let k = m as i128 * g.a(m);
        if g.beta().norm_lt(k, &t2) {
            return Ok(ApproxWitness {
                m,
                achieved: vec![
                    ("norm(alpha*m)".into(), g.alpha().frac_signed_exact(m as i128).abs()),
                    ("norm(beta*m*nint(alpha*m))".into(), g.beta().frac_signed_exact(k).abs()),
                ],
            });
        }
    }
    Err(SearchError::NotFoundWithinBudget)
}

/// |⦃αn₀⦄ + ⦃αn₁⦄| < 1/2, exactly.
pub fn pair_condition_holds(g: &TheoremA, n0: i64, n1: i64) -> bool {
    let a = g.alpha();
    let half = 1i128 << (FIXED_BITS - 1);
    if let (Some(x), Some(y)) = (a.frac_signed_fixed(n0 as i128), a.frac_signed_fixed(n1 as i128)) {
        let s = Fixed { lo: x.lo + y.lo, hi: x.hi + y.hi };
        if s.lo > -half && s.hi < half {
            return true;
        }
        if s.hi < -half || s.lo > half {
            return false;
        }
    }
    let s = &a.frac_signed_exact(n0 as i128) + &a.frac_signed_exact(n1 as i128);
    s.abs().cmp_rational(&rat(1, 2)).is_lt()
}

/// Least n₂ ∈ [C·n₁, max_candidate] with Δ°²g(n₀, n₁, n₂) = 0.
pub fn find_lemma32_witness(g: &TheoremA, n0: i64, n1: i64, c: i64, budget: &SearchBudget) -> Result<i64, SearchError> {
    if n0 < c || n1 < c * n0 {
        return Err(SearchError::PreconditionViolated("need n0 >= C and n1 >= C*n0".into()));
    }
    if !pair_condition_holds(g, n0, n1) {
        return Err(SearchError::PreconditionViolated("|{alpha*n0} + {alpha*n1}| >= 1/2".into()));
    }
    scan_lemma32(g, n0, n1, c * n1, budget.max_candidate as i64).ok_or(SearchError::NotFoundWithinBudget)
}

/// Least n₂ ∈ [lo, hi] with Δ°²g(n₀, n₁, n₂) = 0, without preconditions.
pub fn scan_lemma32(g: &TheoremA, n0: i64, n1: i64, lo: i64, hi: i64) -> Option<i64> {
    let scan = SecondDerivativeScan::new(g, n0, n1);
    (lo..=hi).find(|&n2| scan.at(n2) == 0)
}

#[derive(Clone, Debug)]
enum TargetKind {
    /// coeff · n^degree
    Monomial { mul: FracMul, degree: u32 },
    General { expr: Expr, ctx: Context },
}

/// The condition {v(n) − lo} ∈ (0, hi − lo), with {·} the ordinary
/// fractional part: the open arc from lo to hi on the circle.
#[derive(Clone, Debug)]
pub struct WeylTarget {
    kind: TargetKind,
    lo: Threshold,
    width: Threshold,
    field_lo: AlgebraicReal,
}

impl WeylTarget {
    /// ⦃coeff · n^degree⦄ on the arc (lo, hi), with 0 < hi − lo < 1.
    pub fn monomial(coeff: &AlgebraicReal, degree: u32, lo: BigRational, hi: BigRational) -> Result<Self, SearchError> {
        let f = coeff.field().clone();
        Self::build(TargetKind::Monomial { mul: FracMul::new(coeff)?, degree }, &f, lo, hi)
    }

    /// A target given as an expression in `n`. Products of constants,
    /// integers and `n` are recognised and use the fast path.
    pub fn from_expr(expr: &Expr, ctx: &Context, lo: BigRational, hi: BigRational) -> Result<Self, SearchError> {
        crate::genpoly::check(expr, ctx)?;
        let f = ctx.field().clone();
        let mut coeff = AlgebraicReal::from_int(&f, 1);
        let mut degree = 0;
        if flatten_monomial(expr, ctx, &mut coeff, &mut degree) {
            return Self::build(TargetKind::Monomial { mul: FracMul::new(&coeff)?, degree }, &f, lo, hi);
        }
        Self::build(TargetKind::General { expr: expr.clone(), ctx: ctx.clone() }, &f, lo, hi)
    }

    fn build(kind: TargetKind, f: &std::sync::Arc<crate::numeric::NumberField>, lo: BigRational, hi: BigRational) -> Result<Self, SearchError> {
        let w = &hi - &lo;
        if w <= BigRational::zero() || w >= BigRational::one() {
            return Err(SearchError::InvalidArgument("target arc must have length in (0, 1)".into()));
        }
        let field_lo = AlgebraicReal::from_rational(f, lo);
        Ok(WeylTarget {
            kind,
            lo: Threshold::new(field_lo.clone()),
            width: Threshold::new(AlgebraicReal::from_rational(f, w)),
            field_lo,
        })
    }

    fn exact_value(&self, n: i64) -> AlgebraicReal {
        match &self.kind {
            TargetKind::Monomial { mul, degree } => mul.value().mul_int(BigInt::from(n).pow(*degree)),
            TargetKind::General { expr, ctx } => match eval(expr, ctx, &BigInt::from(n)).expect("checked expression") {
                Value::Int(i) => AlgebraicReal::from_int(ctx.field(), i),
                Value::Real(r) => r,
            },
        }
    }

    pub fn holds(&self, n: i64) -> bool {
        if let TargetKind::Monomial { mul, degree } = &self.kind {
            let k = (n as i128).checked_pow(*degree);
            if let (Some(k), Some(lo), Some(w)) = (k, self.lo.fixed, self.width.fixed) {
                if let Some(f) = mul.frac_signed_fixed(k) {
                    let one = 1i128 << FIXED_BITS;
                    let (mut a, mut b) = (f.lo - lo.hi, f.hi - lo.lo);
                    let q = a.div_euclid(one);
                    a -= q * one;
                    b -= q * one;
                    if b < one {
                        if a > 0 && b < w.lo {
                            return true;
                        }
                        if a >= w.hi {
                            return false;
                        }
                    }
                }
            }
        }
        let v = self.exact_value(n).add_rational(&-self.field_lo.as_rational().expect("rational endpoint"));
        let t = v.add_int(-v.floor());
        !t.is_zero() && t.lt(&self.width.exact)
    }
}

fn flatten_monomial(e: &Expr, ctx: &Context, coeff: &mut AlgebraicReal, degree: &mut u32) -> bool {
    match &e.node {
        Node::Int(v) => {
            *coeff = coeff.mul_int(v.clone());
            true
        }
        Node::Var => {
            *degree += 1;
            true
        }
        Node::Const(c) => match ctx.get(c) {
            Some(v) => {
                *coeff = &*coeff * v;
                true
            }
            None => false,
        },
        Node::Mul(a, b) => flatten_monomial(a, ctx, coeff, degree) && flatten_monomial(b, ctx, coeff, degree),
        Node::Neg(a) => {
            *coeff = -&*coeff;
            flatten_monomial(a, ctx, coeff, degree)
        }
        _ => false,
    }
}

/// Least n in [start, max_candidate] meeting every target.
pub fn find_weyl_witness(targets: &[WeylTarget], start: i64, budget: &SearchBudget) -> Result<i64, SearchError> {
    (start..=budget.max_candidate as i64)
        .find(|&n| targets.iter().all(|t| t.holds(n)))
        .ok_or(SearchError::NotFoundWithinBudget)
}
