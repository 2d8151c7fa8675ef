use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::SearchError;
use crate::numeric::{AlgebraicReal, FracMul};

#[derive(Clone, Debug)]
pub struct EquidistReport {
    pub grid: usize,
    /// Row-major counts, cell (i, j) covering x ∈ [−1/2 + i/grid, …), y likewise.
    pub orbit_hist: Vec<u64>,
    pub push_hist: Vec<u64>,
    pub orbit_len: u64,
    pub push_samples: u64,
    /// max over cells of the difference in empirical mass.
    pub sup_cell_discrepancy: f64,
    /// max over grid-anchored boxes [−1/2, x) × [−1/2, y).
    pub anchored_box_discrepancy: f64,
    /// Fraction of orbit points in [−0.05, 0.05]².
    pub near_origin_fraction: f64,
    pub theta: AlgebraicReal,
}

fn wrap(v: f64) -> f64 {
    // signed fractional part in [−1/2, 1/2)
    v - (v + 0.5).floor()
}

fn cell(v: f64, grid: usize) -> usize {
    (((v + 0.5) * grid as f64) as usize).min(grid - 1)
}

/// Compares the orbit (⦃αn⦄, ⦃α⌊θn⌉⦄), n = 1…N, with samples of the
/// push-forward of the uniform measure on {0,…,d−1} × [−1/2,1/2)² through
/// (r, x, y) ↦ (⦃dx + αr⦄, ⦃bx − cy + αθr − α⦃dy + θr⦄⦄), θ = (a + αb)/(c + αd).
#[allow(clippy::too_many_arguments)]
pub fn equidist_check(
    alpha: &AlgebraicReal,
    a: i64,
    b: i64,
    c: i64,
    d: i64,
    n: u64,
    m: u64,
    grid: usize,
    seed: u64,
) -> Result<EquidistReport, SearchError> {
    if d == 0 {
        return Err(SearchError::PreconditionViolated("d must be nonzero".into()));
    }
    if grid == 0 {
        return Err(SearchError::InvalidArgument("grid must be positive".into()));
    }
    let num = alpha.mul_int(b).add_int(a);
    let den = alpha.mul_int(d).add_int(c);
    let theta = num.arith(&den, crate::numeric::ArithOp::Div)?;
    if theta.is_rational() {
        return Err(SearchError::ThetaRational);
    }
    let am = FracMul::new(alpha)?;
    let tm = FracMul::new(&theta)?;
    let mut orbit = vec![0u64; grid * grid];
    let mut near = 0u64;
    for k in 1..=n as i128 {
        let x = am.frac_signed_f64(k);
        let y = am.frac_signed_f64(tm.nint_mul(k)?);
        orbit[cell(x, grid) * grid + cell(y, grid)] += 1;
        near += u64::from(x.abs() <= 0.05 && y.abs() <= 0.05);
    }
    let (af, tf) = (alpha.to_f64(), theta.to_f64());
    let (bf, cf, df) = (b as f64, c as f64, d as f64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut push = vec![0u64; grid * grid];
    let unit = |rng: &mut ChaCha8Rng| (rng.gen::<u64>() >> 11) as f64 / (1u64 << 53) as f64 - 0.5;
    for _ in 0..m {
        let r = rng.gen_range(0..d.unsigned_abs()) as f64;
        let x = unit(&mut rng);
        let y = unit(&mut rng);
        let u = wrap(df * x + af * r);
        let v = wrap(bf * x - cf * y + af * tf * r - af * wrap(df * y + tf * r));
        push[cell(u, grid) * grid + cell(v, grid)] += 1;
    }
    let (nf, mf) = (n.max(1) as f64, m.max(1) as f64);
    let sup = orbit.iter().zip(&push).map(|(&o, &p)| (o as f64 / nf - p as f64 / mf).abs()).fold(0.0, f64::max);
    let mut anchored = 0.0f64;
    let mut co = vec![0u64; (grid + 1) * (grid + 1)];
    let mut cp = vec![0u64; (grid + 1) * (grid + 1)];
    for i in 0..grid {
        for j in 0..grid {
            let at = |v: &Vec<u64>, i: usize, j: usize| v[i * (grid + 1) + j];
            let o = orbit[i * grid + j] + at(&co, i, j + 1) + at(&co, i + 1, j) - at(&co, i, j);
            let p = push[i * grid + j] + at(&cp, i, j + 1) + at(&cp, i + 1, j) - at(&cp, i, j);
            co[(i + 1) * (grid + 1) + j + 1] = o;
            cp[(i + 1) * (grid + 1) + j + 1] = p;
            anchored = anchored.max((o as f64 / nf - p as f64 / mf).abs());
        }
    }
    Ok(EquidistReport {
        grid,
        orbit_hist: orbit,
        push_hist: push,
        orbit_len: n,
        push_samples: m,
        sup_cell_discrepancy: sup,
        anchored_box_discrepancy: anchored,
        near_origin_fraction: near as f64 / nf,
        theta,
    })
}
