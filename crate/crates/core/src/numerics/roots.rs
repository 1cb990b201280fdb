//! Real root isolation on an interval for low-degree polynomials.

use crate::{Error, Result};
use nalgebra::DMatrix;

fn horner(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

fn horner_deriv(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
        acc = acc * x + k as f64 * c;
    }
    acc
}

/// Refines a bracketed root by bisection with Newton acceleration.
fn refine(coeffs: &[f64], mut lo: f64, mut hi: f64, rel_tol: f64) -> f64 {
    let mut flo = horner(coeffs, lo);
    if flo == 0.0 {
        return lo;
    }
    let mut x = 0.5 * (lo + hi);
    for _ in 0..200 {
        let fx = horner(coeffs, x);
        if fx == 0.0 {
            return x;
        }
        if (fx > 0.0) == (flo > 0.0) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
        }
        // Newton step, kept only when it stays inside the bracket
        let dfx = horner_deriv(coeffs, x);
        let newton = x - fx / dfx;
        x = if dfx != 0.0 && newton > lo && newton < hi {
            newton
        } else {
            0.5 * (lo + hi)
        };
        if (hi - lo).abs() <= rel_tol * x.abs().max(1.0) {
            break;
        }
    }
    x
}

/// All real roots of `poly` (coefficients in ascending degree order, degree
/// at most 8) inside the open interval `(lo, hi)`, refined to `rel_tol` and
/// sorted ascending. Returns an empty list when there is no root.
pub fn real_roots_in_interval(poly: &[f64], lo: f64, hi: f64, rel_tol: f64) -> Result<Vec<f64>> {
    if lo >= hi {
        return Err(Error::Domain(format!("empty interval ({lo}, {hi})")));
    }
    let mut coeffs: Vec<f64> = poly.to_vec();
    while coeffs.last().is_some_and(|&c| c == 0.0) {
        coeffs.pop();
    }
    if coeffs.len() <= 1 {
        return Ok(vec![]);
    }
    let deg = coeffs.len() - 1;
    if deg > 8 {
        return Err(Error::Domain(format!("degree {deg} exceeds 8")));
    }

    // companion-matrix eigenvalues give root candidates; each real candidate
    // in range is re-bracketed and polished against the exact polynomial
    let lead = *coeffs.last().unwrap();
    let mut comp = DMatrix::<f64>::zeros(deg, deg);
    for i in 1..deg {
        comp[(i, i - 1)] = 1.0;
    }
    for i in 0..deg {
        comp[(i, deg - 1)] = -coeffs[i] / lead;
    }
    let eigen = comp
        .schur()
        .complex_eigenvalues()
        .iter()
        .cloned()
        .collect::<Vec<_>>();

    let scale = coeffs.iter().fold(0.0_f64, |m, c| m.max(c.abs()));
    let mut roots: Vec<f64> = Vec::new();
    for ev in eigen {
        if ev.im.abs() > 1e-8 * (1.0 + ev.re.abs()) {
            continue;
        }
        let x0 = ev.re;
        if x0 <= lo || x0 >= hi {
            continue;
        }
        // bracket around the candidate; widen until a sign change is found
        let mut h = 1e-10 * (1.0 + x0.abs());
        let mut bracket = None;
        for _ in 0..60 {
            let (a, b) = ((x0 - h).max(lo), (x0 + h).min(hi));
            let (fa, fb) = (horner(&coeffs, a), horner(&coeffs, b));
            if fa == 0.0 {
                bracket = Some((a, a));
                break;
            }
            if fb == 0.0 {
                bracket = Some((b, b));
                break;
            }
            if (fa > 0.0) != (fb > 0.0) {
                bracket = Some((a, b));
                break;
            }
            h *= 4.0;
            if a == lo && b == hi {
                break;
            }
        }
        let root = match bracket {
            Some((a, b)) if a == b => a,
            Some((a, b)) => refine(&coeffs, a, b, rel_tol),
            // even-multiplicity or spurious candidate: accept only if the
            // residual already vanishes at polynomial scale
            None => {
                if horner(&coeffs, x0).abs() < 1e-9 * scale {
                    x0
                } else {
                    continue;
                }
            }
        };
        if root > lo && root < hi {
            roots.push(root);
        }
    }
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    roots.dedup_by(|a, b| (*a - *b).abs() <= 1e-9 * (1.0 + a.abs()));
    Ok(roots)
}

#[cfg(test)]
mod tests {
    use super::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn quadratic_single_root() {
        let r = real_roots_in_interval(&[-1.0, 0.0, 1.0], 0.0, 2.0, TOL).unwrap();
        assert_eq!(r.len(), 1);
        assert!((r[0] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn cubic_three_roots() {
        // x^3 - x on (-2, 2)
        let r = real_roots_in_interval(&[0.0, -1.0, 0.0, 1.0], -2.0, 2.0, TOL).unwrap();
        assert_eq!(r.len(), 3);
        assert!((r[0] + 1.0).abs() < 1e-12);
        assert!(r[1].abs() < 1e-12);
        assert!((r[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn no_roots_is_empty() {
        let r = real_roots_in_interval(&[1.0, 0.0, 1.0], -2.0, 2.0, TOL).unwrap();
        assert!(r.is_empty());
    }

    #[test]
    fn residual_bound_property() {
        // random-ish degree-5 polynomial with known roots 0.3, 0.7, 1.5
        let p = |x: f64| (x - 0.3) * (x - 0.7) * (x - 1.5) * (x * x + 1.0);
        // expand: (x-0.3)(x-0.7)(x-1.5) = x^3 - 2.5x^2 + 1.71x - 0.315
        let cubic = [-0.315, 1.71, -2.5, 1.0];
        let mut coeffs = [0.0; 6];
        for (i, &c) in cubic.iter().enumerate() {
            coeffs[i] += c; // * 1
            coeffs[i + 2] += c; // * x^2
        }
        let max_c = coeffs.iter().fold(0.0_f64, |m, &c: &f64| m.max(c.abs()));
        let roots = real_roots_in_interval(&coeffs, 0.0, 2.0, TOL).unwrap();
        assert_eq!(roots.len(), 3);
        for r in roots {
            assert!(p(r).abs() < 1e-9 * max_c);
        }
    }
}
