//! Adaptive Simpson quadrature.

use crate::{Error, Result};

const MAX_DEPTH: usize = 60;

fn simpson(_f: &mut dyn FnMut(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64) -> f64 {
    (b - a) / 6.0 * (fa + 4.0 * fm + fb)
}

#[allow(clippy::too_many_arguments)]
fn recurse(
    f: &mut dyn FnMut(f64) -> f64,
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    whole: f64,
    tol: f64,
    depth: usize,
) -> Result<f64> {
    let m = 0.5 * (a + b);
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let flm = f(lm);
    let frm = f(rm);
    let left = simpson(f, a, m, fa, flm, fm);
    let right = simpson(f, m, b, fm, frm, fb);
    let delta = left + right - whole;
    if delta.abs() <= 15.0 * tol {
        return Ok(left + right + delta / 15.0);
    }
    if depth >= MAX_DEPTH {
        return Err(Error::QuadratureDepth(MAX_DEPTH));
    }
    Ok(
        recurse(f, a, m, fa, flm, fm, left, 0.5 * tol, depth + 1)?
            + recurse(f, m, b, fm, frm, fb, right, 0.5 * tol, depth + 1)?,
    )
}

/// Integral of `f` over `[lo, hi]` to relative tolerance `rel_tol` by
/// adaptive subdivision.
pub fn adaptive_quadrature(
    mut f: impl FnMut(f64) -> f64,
    lo: f64,
    hi: f64,
    rel_tol: f64,
) -> Result<f64> {
    if lo == hi {
        return Ok(0.0);
    }
    let fa = f(lo);
    let fb = f(hi);
    let fm = f(0.5 * (lo + hi));
    for v in [fa, fm, fb] {
        super::finite(v, "adaptive_quadrature integrand")?;
    }
    // coarse scale estimate fixes the absolute tolerance for the recursion
    let coarse = simpson(&mut f, lo, hi, fa, fm, fb);
    let tol = rel_tol * coarse.abs().max(1e-300).max((hi - lo).abs() * 1e-6);
    recurse(&mut f, lo, hi, fa, fm, fb, coarse, tol, 0)
}
