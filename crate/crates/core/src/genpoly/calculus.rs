//! Discrete derivatives.

use super::seq::IntSequence;
use super::GenPolyError;

/// Δ_m f(n) = f(n+m) − f(n).
pub fn delta_shift(f: &dyn IntSequence, m: i64, n: i64) -> i128 {
    f.at(n + m) - f.at(n)
}

/// Δ°_m f(n) = f(n+m) − f(n) − f(m) + f(0).
pub fn delta_sym(f: &dyn IntSequence, m: i64, n: i64) -> i128 {
    f.at(n + m) - f.at(n) - f.at(m) + f.at(0)
}

/// Δ°_{n_r} ⋯ Δ°_{n_1} f(n₀) for `args = [n₀, …, n_r]`, r ≥ 1.
///
/// Unfolds the definition recursively; the inclusion–exclusion closed form
/// is left to the tests as an independent check.
pub fn delta_sym_iter(f: &dyn IntSequence, args: &[i64]) -> Result<i128, GenPolyError> {
    if args.len() < 2 {
        return Err(GenPolyError::ArityTooSmall);
    }
    Ok(iterate(f, args[0], &args[1..]))
}

// Δ°_{steps[k-1]} applied to G = Δ°_{steps[..k-1]} f, evaluated at x.
fn iterate(f: &dyn IntSequence, x: i64, steps: &[i64]) -> i128 {
    match steps.split_last() {
        None => f.at(x),
        Some((&m, rest)) => {
            iterate(f, x + m, rest) - iterate(f, x, rest) - iterate(f, m, rest) + iterate(f, 0, rest)
        }
    }
}

/// Δ°²g(n₀, n₁, n₂) for a scan over n₂ with n₀, n₁ fixed: four evaluations
/// per step after the first.
pub struct SecondDerivativeScan<'a> {
    f: &'a dyn IntSequence,
    n0: i64,
    n1: i64,
    base: i128,
}

impl<'a> SecondDerivativeScan<'a> {
    pub fn new(f: &'a dyn IntSequence, n0: i64, n1: i64) -> Self {
        let base = f.at(n0 + n1) - f.at(n0) - f.at(n1) + f.at(0);
        SecondDerivativeScan { f, n0, n1, base }
    }

    pub fn at(&self, n2: i64) -> i128 {
        let f = self.f;
        f.at(self.n0 + self.n1 + n2) - f.at(self.n0 + n2) - f.at(self.n1 + n2) + f.at(n2) - self.base
    }
}
