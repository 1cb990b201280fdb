//! Gauss hypergeometric series on `[0, 1)`.

use crate::{Error, Result};

/// Default exclusion margin at the `z -> 1` endpoint.
pub const DEFAULT_Z_MARGIN: f64 = 1e-6;
/// Default cap on the number of summed terms.
pub const DEFAULT_TERM_CAP: usize = 1_000_000;

fn check_params(c: f64, z: f64, margin: f64) -> Result<()> {
    if c <= 0.0 && (c - c.round()).abs() < f64::EPSILON {
        return Err(Error::Domain(format!(
            "2F1 parameter c = {c} is a non-positive integer"
        )));
    }
    if !(0.0..1.0 - margin).contains(&z) {
        return Err(Error::Domain(format!(
            "2F1 argument z = {z} outside [0, {})",
            1.0 - margin
        )));
    }
    Ok(())
}

/// Gauss series `sum_n (a)_n (b)_n / (c)_n z^n / n!` summed to relative
/// tolerance `rel_tol`, with the term count capped.
pub fn hyp2f1(a: f64, b: f64, c: f64, z: f64, rel_tol: f64) -> Result<f64> {
    check_params(c, z, DEFAULT_Z_MARGIN)?;
    let mut term = 1.0_f64;
    let mut sum = 1.0_f64;
    for n in 0..DEFAULT_TERM_CAP {
        let nf = n as f64;
        term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
        sum += term;
        if term.abs() <= rel_tol * sum.abs() {
            // one extra term guards against an accidentally tiny ratio
            let next = term * (a + nf + 1.0) * (b + nf + 1.0) / ((c + nf + 1.0) * (nf + 2.0)) * z;
            if next.abs() <= rel_tol * sum.abs() {
                return Ok(sum + next);
            }
        }
    }
    Err(Error::NonConvergence {
        terms: DEFAULT_TERM_CAP,
        last: term,
    })
}

/// `n`-th derivative of the Gauss series via the contiguous-parameter
/// identity `d/dz 2F1(a,b;c;z) = (ab/c) 2F1(a+1,b+1;c+1;z)`.
pub fn hyp2f1_deriv(a: f64, b: f64, c: f64, z: f64, order: u32, rel_tol: f64) -> Result<f64> {
    let mut factor = 1.0;
    let (mut a, mut b, mut c) = (a, b, c);
    for _ in 0..order {
        factor *= a * b / c;
        a += 1.0;
        b += 1.0;
        c += 1.0;
    }
    Ok(factor * hyp2f1(a, b, c, z, rel_tol)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    const TOL: f64 = 1e-12;

    #[test]
    fn empty_tail_at_zero() {
        assert_eq!(hyp2f1(1.0, 1.0, 1.0, 0.0, TOL).unwrap(), 1.0);
    }

    #[test]
    fn log_identity() {
        // 2F1(1,1;2;z) = -ln(1-z)/z
        let v = hyp2f1(1.0, 1.0, 2.0, 0.5, TOL).unwrap();
        assert!((v - (-(0.5_f64.ln()) / 0.5)).abs() < 1e-12);
    }

    #[test]
    fn brute_force_partial_sum_oracle() {
        // independent 50-term partial sum for (0.5, 0.5, 1, 0.25),
        // frozen from the oracle run: 1.0731820071493645
        let mut s = 0.0;
        let mut t = 1.0;
        for n in 0..50 {
            s += t;
            let nf = n as f64;
            t *= (0.5 + nf) * (0.5 + nf) / ((1.0 + nf) * (nf + 1.0)) * 0.25;
        }
        let v = hyp2f1(0.5, 0.5, 1.0, 0.25, TOL).unwrap();
        assert!((v - s).abs() < 1e-12, "{v} vs oracle {s}");
        assert!((s - 1.073_182_007_149_364_5).abs() < 1e-14);
    }

    #[test]
    fn domain_errors() {
        assert!(hyp2f1(1.0, 1.0, 0.0, 0.5, TOL).is_err());
        assert!(hyp2f1(1.0, 1.0, -2.0, 0.5, TOL).is_err());
        assert!(hyp2f1(1.0, 1.0, 2.0, 1.0, TOL).is_err());
        assert!(hyp2f1(1.0, 1.0, 2.0, -0.1, TOL).is_err());
    }

    #[test]
    fn derivative_vs_finite_difference() {
        let h = 1e-6;
        let d = hyp2f1_deriv(0.75, 1.25, 2.5, 0.4, 1, TOL).unwrap();
        let fd = (hyp2f1(0.75, 1.25, 2.5, 0.4 + h, TOL).unwrap()
            - hyp2f1(0.75, 1.25, 2.5, 0.4 - h, TOL).unwrap())
            / (2.0 * h);
        assert!((d - fd).abs() < 1e-8);
    }

    proptest! {
        // positive parameters, z in (0,1): partial sums are monotone, so the
        // final value dominates any partial sum
        #[test]
        fn partial_sums_monotone(a in 0.1f64..3.0, b in 0.1f64..3.0,
                                 c in 0.5f64..4.0, z in 0.01f64..0.9) {
            let full = hyp2f1(a, b, c, z, TOL).unwrap();
            let mut term = 1.0;
            let mut partial = 1.0;
            for n in 0..30 {
                let nf = n as f64;
                term *= (a + nf) * (b + nf) / ((c + nf) * (nf + 1.0)) * z;
                partial += term;
                prop_assert!(full >= partial - 1e-9 * full.abs());
            }
        }
    }
}
