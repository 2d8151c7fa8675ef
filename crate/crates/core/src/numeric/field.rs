//! Real number fields Q(θ) given by a minimal polynomial and an isolating interval.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::{self, QPoly};
use super::NumericError;

/// Precision levels (bits) at which θ is bracketed when the field is built.
pub const CACHED_LEVELS: [u32; 7] = [64, 128, 256, 512, 1024, 2048, 4096];

/// θ ∈ (a / 2^bits, (a+1) / 2^bits), plus scaled enclosures of θ^i.
#[derive(Clone, Debug)]
pub(crate) struct Level {
    pub bits: u32,
    /// ⌊θ·2^bits⌋.
    #[allow(dead_code)]
    pub a: BigInt,
    /// `powers[i] = (lo, hi)` with θ^i ∈ [lo, hi] / 2^bits.
    pub powers: Vec<(BigInt, BigInt)>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Irreducibility {
    /// Checked exactly (degree ≤ 4).
    Verified,
    /// Degree ≥ 5: taken on trust from the caller.
    Assumed,
}

pub struct NumberField {
    minpoly: Vec<BigInt>,
    lo: BigRational,
    hi: BigRational,
    monic: QPoly,
    irreducibility: Irreducibility,
    rational_root: Option<BigRational>,
    levels: Vec<Level>,
}

impl fmt::Debug for NumberField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("NumberField")
            .field("minpoly", &self.minpoly)
            .field("interval", &(&self.lo, &self.hi))
            .finish()
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.minpoly == other.minpoly && self.lo == other.lo && self.hi == other.hi
    }
}

impl Eq for NumberField {}

impl NumberField {
    /// Validates the minimal polynomial and isolating interval.
    pub fn new(minpoly: &[BigInt], lo: BigRational, hi: BigRational) -> Result<Arc<Self>, NumericError> {
        let mut mp = minpoly.to_vec();
        while mp.last().is_some_and(|c| c.is_zero()) {
            mp.pop();
        }
        if mp.len() < 2 {
            return Err(NumericError::InvalidField("degree must be at least 1".into()));
        }
        if !mp.last().unwrap().is_positive() {
            return Err(NumericError::InvalidField("leading coefficient must be positive".into()));
        }
        if lo > hi {
            return Err(NumericError::InvalidField("interval endpoints out of order".into()));
        }
        let p = poly::from_ints(&mp);
        let d = mp.len() - 1;
        let g = poly::gcd(&p, &poly::derivative(&p));
        if g.len() > 1 {
            return Err(NumericError::NotSquarefree);
        }
        match poly::count_roots_closed(&p, &lo, &hi) {
            0 => return Err(NumericError::NoRootInInterval),
            1 => {}
            _ => return Err(NumericError::MultipleRootsInInterval),
        }
        let monic = poly::monic(&p);
        if d == 1 {
            let root = BigRational::new(-mp[0].clone(), mp[1].clone());
            return Ok(Arc::new(NumberField {
                minpoly: mp,
                lo,
                hi,
                monic,
                irreducibility: Irreducibility::Verified,
                rational_root: Some(root),
                levels: Vec::new(),
            }));
        }
        let irreducibility = if d <= 4 {
            if !poly::rational_roots(&mp).is_empty() || (d == 4 && poly::has_quadratic_factor(&mp)) {
                return Err(NumericError::Reducible);
            }
            Irreducibility::Verified
        } else {
            Irreducibility::Assumed
        };
        if poly::sign_at(&p, &lo) == 0 || poly::sign_at(&p, &hi) == 0 {
            // A rational root of a polynomial of degree ≥ 2 means it factors.
            return Err(NumericError::Reducible);
        }
        let mut field = NumberField {
            minpoly: mp,
            lo,
            hi,
            monic,
            irreducibility,
            rational_root: None,
            levels: Vec::new(),
        };
        field.levels = field.bracket_levels(&CACHED_LEVELS);
        Ok(Arc::new(field))
    }

    pub fn minpoly(&self) -> &[BigInt] {
        &self.minpoly
    }

    pub fn interval(&self) -> (&BigRational, &BigRational) {
        (&self.lo, &self.hi)
    }

    pub fn degree(&self) -> usize {
        self.minpoly.len() - 1
    }

    pub fn irreducibility(&self) -> Irreducibility {
        self.irreducibility
    }

    pub(crate) fn monic(&self) -> &QPoly {
        &self.monic
    }

    pub(crate) fn rational_root(&self) -> Option<&BigRational> {
        self.rational_root.as_ref()
    }

    pub(crate) fn levels(&self) -> &[Level] {
        &self.levels
    }

    /// Sign of minpoly(X / 2^bits), scaled to an integer.
    fn sign_dyadic(&self, x: &BigInt, bits: u32) -> i8 {
        let d = self.degree();
        let mut acc = self.minpoly[d].clone();
        for i in (0..d).rev() {
            acc = acc * x + (&self.minpoly[i] << (bits as usize * (d - i)));
        }
        if acc.is_zero() {
            0
        } else if acc.is_positive() {
            1
        } else {
            -1
        }
    }

    /// Floors of θ·2^bits for each requested precision, by bisection.
    fn bracket_levels(&self, wanted: &[u32]) -> Vec<Level> {
        let p = poly::from_ints(&self.minpoly);
        let s_lo = poly::sign_at(&p, &self.lo);
        let mut l = self.lo.clone();
        let mut h = self.hi.clone();
        let first = wanted[0];
        let target = BigRational::new(BigInt::one(), BigInt::one() << (first as usize + 1));
        while &h - &l > target {
            let mid = (&l + &h) / BigRational::from_integer(2.into());
            let s = poly::sign_at(&p, &mid);
            if s == s_lo {
                l = mid;
            } else {
                h = mid;
            }
        }
        let scale = BigRational::from_integer(BigInt::one() << first as usize);
        let fl = poly::floor_rat(&(&l * &scale));
        let fh = poly::floor_rat(&(&h * &scale));
        let mut a = if fl == fh {
            fl
        } else {
            // fh/2^first lies in (l, h]; its side decides.
            let s = self.sign_dyadic(&fh, first);
            if s == s_lo {
                fh
            } else {
                fl
            }
        };
        let mut bits = first;
        let mut out = Vec::new();
        for &w in wanted {
            if w > bits + 32 {
                if let Some(na) = self.newton_jump(&a, bits, w, s_lo) {
                    a = na;
                    bits = w;
                }
            }
            while bits < w {
                // Bisect (a/2^bits, (a+1)/2^bits) at (2a+1)/2^(bits+1).
                let m: BigInt = (&a << 1usize) + 1;
                let mq = BigRational::new(m.clone(), BigInt::one() << (bits as usize + 1));
                let below = if mq <= l {
                    true
                } else if mq >= h {
                    false
                } else {
                    self.sign_dyadic(&m, bits + 1) == s_lo
                };
                if below {
                    a = m;
                } else {
                    a = m - 1;
                }
                bits += 1;
            }
            out.push(self.make_level(bits, a.clone()));
        }
        out
    }

    /// Lifts θ ∈ (a, a+1)/2^from to a certified bracket at `to` bits by
    /// fixed-point Newton steps, checked by two exact sign evaluations.
    fn newton_jump(&self, a: &BigInt, from: u32, to: u32, s_lo: i8) -> Option<BigInt> {
        let d = self.degree();
        let deriv: Vec<BigInt> = (1..=d).map(|i| &self.minpoly[i] * BigInt::from(i)).collect();
        let eval = |c: &[BigInt], x: &BigInt, b: u32| -> BigInt {
            let k = c.len() - 1;
            let mut acc = c[k].clone();
            for i in (0..k).rev() {
                acc = acc * x + (&c[i] << (b as usize * (k - i)));
            }
            acc
        };
        let work = to + 16;
        let mut x: BigInt = (a << 1usize) + 1;
        x <<= (work - from - 1) as usize;
        let mut prec = from;
        while prec < work {
            let pv = eval(&self.minpoly, &x, work);
            let dv = eval(&deriv, &x, work);
            if dv.is_zero() {
                return None;
            }
            x -= pv.div_floor(&dv);
            prec = prec.saturating_mul(2).saturating_sub(8);
        }
        let mut cand = shr_floor(&x, work - to);
        for _ in 0..8 {
            let below = self.sign_dyadic(&cand, to) == s_lo;
            let above = self.sign_dyadic(&(&cand + BigInt::one()), to) != s_lo;
            match (below, above) {
                // Must stay inside the previous bracket, which holds only θ.
                (true, true) if shr_floor(&cand, to - from) == *a => return Some(cand),
                (true, true) => return None,
                (true, false) => cand += 1,
                (false, _) => cand -= 1,
            }
        }
        None
    }

    fn make_level(&self, bits: u32, a: BigInt) -> Level {
        let one = BigInt::one() << bits as usize;
        let t_lo = a.clone();
        let t_hi = &a + 1;
        let mut powers = vec![(one.clone(), one)];
        for _ in 1..self.degree() {
            let (plo, phi) = powers.last().unwrap().clone();
            let cands = [&plo * &t_lo, &plo * &t_hi, &phi * &t_lo, &phi * &t_hi];
            let mn = cands.iter().min().unwrap().clone();
            let mx = cands.iter().max().unwrap().clone();
            powers.push((shr_floor(&mn, bits), shr_ceil(&mx, bits)));
        }
        Level { bits, a, powers }
    }

    /// A fresh bracket beyond the cached levels, used only for extreme
    /// cancellation.
    pub(crate) fn level_beyond(&self, bits: u32) -> Level {
        let mut wanted: Vec<u32> = CACHED_LEVELS.to_vec();
        let mut b = *CACHED_LEVELS.last().unwrap();
        while b < bits {
            b *= 2;
            wanted.push(b);
        }
        self.bracket_levels(&wanted).pop().unwrap()
    }

    /// True if `g` (a factor candidate of minpoly) vanishes at θ.
    pub(crate) fn vanishes_at_theta(&self, g: &QPoly) -> bool {
        g.len() > 1 && poly::count_roots_closed(g, &self.lo, &self.hi) > 0
    }
}

pub(crate) fn shr_floor(x: &BigInt, bits: u32) -> BigInt {
    x.div_floor(&(BigInt::one() << bits as usize))
}

pub(crate) fn shr_ceil(x: &BigInt, bits: u32) -> BigInt {
    -((-x).div_floor(&(BigInt::one() << bits as usize)))
}
