//! Rank-3 reflection groups `Delta_{p,3,2}`: the geometric representation,
//! the invariant bilinear form, signature classification, and the change of
//! basis to the standard anti-diagonal hyperbolic metric.

use crate::{Error, Result, Tolerances};
use nalgebra::Matrix3;
use serde::Serialize;

/// Signature class of the invariant form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SignatureClass {
    Spherical,
    EuclideanDegenerate,
    Hyperbolic,
}

/// Parameters of the family: `p >= 2` and `mu = cos(pi/p)`.
#[derive(Debug, Clone, Copy)]
pub struct CoxeterParams {
    pub p: u32,
    pub mu: f64,
}

impl CoxeterParams {
    pub fn new(p: u32) -> Result<Self> {
        if p < 2 {
            return Err(Error::Domain("p must be at least 2".into()));
        }
        Ok(Self {
            p,
            mu: (std::f64::consts::PI / p as f64).cos(),
        })
    }
}

/// Geometric representation of `Delta_{p,3,2}`: the three reflections, the
/// rotation generators `A = s1 s2`, `B = s2 s3`, `C = s1 s3 = A B`, and the
/// invariant form `kappa`.
#[derive(Debug, Clone)]
pub struct CoxeterRep {
    pub params: CoxeterParams,
    pub s1: Matrix3<f64>,
    pub s2: Matrix3<f64>,
    pub s3: Matrix3<f64>,
    pub a: Matrix3<f64>,
    pub b: Matrix3<f64>,
    pub c: Matrix3<f64>,
    pub kappa: Matrix3<f64>,
}

fn mat_norm(m: &Matrix3<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

fn power(m: &Matrix3<f64>, k: u32) -> Matrix3<f64> {
    let mut out = Matrix3::identity();
    for _ in 0..k {
        out *= m;
    }
    out
}

/// Builds the geometric representation for `Delta_{p,3,2}` and verifies all
/// construction-time relations (`s_i^2 = 1`, `B^3 = C^2 = 1`, `A B = C`,
/// `A^p = 1`, and kappa-invariance of `A`, `B`, `C`).
pub fn build_rep(p: u32) -> Result<CoxeterRep> {
    build_rep_with(p, Tolerances::default())
}

/// [`build_rep`] with explicit tolerances.
pub fn build_rep_with(p: u32, tol: Tolerances) -> Result<CoxeterRep> {
    let params = CoxeterParams::new(p)?;
    let mu = params.mu;
    let s1 = Matrix3::new(-1.0, 2.0 * mu, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 1.0);
    let s2 = Matrix3::new(1.0, 0.0, 0.0, 2.0 * mu, -1.0, 1.0, 0.0, 0.0, 1.0);
    let s3 = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, -1.0);
    let a = Matrix3::new(
        4.0 * mu * mu - 1.0,
        -2.0 * mu,
        2.0 * mu,
        2.0 * mu,
        -1.0,
        1.0,
        0.0,
        0.0,
        1.0,
    );
    let b = Matrix3::new(1.0, 0.0, 0.0, 2.0 * mu, 0.0, -1.0, 0.0, 1.0, -1.0);
    let c = Matrix3::new(-1.0, 2.0 * mu, 0.0, 0.0, 1.0, 0.0, 0.0, 1.0, -1.0);
    let kappa = Matrix3::new(1.0, -mu, 0.0, -mu, 1.0, -0.5, 0.0, -0.5, 1.0);

    let rep = CoxeterRep {
        params,
        s1,
        s2,
        s3,
        a,
        b,
        c,
        kappa,
    };

    let id = Matrix3::identity();
    let checks: Vec<(String, f64)> = vec![
        ("s1^2".into(), mat_norm(&(s1 * s1 - id))),
        ("s2^2".into(), mat_norm(&(s2 * s2 - id))),
        ("s3^2".into(), mat_norm(&(s3 * s3 - id))),
        ("A = s1 s2".into(), mat_norm(&(s1 * s2 - a))),
        ("B = s2 s3".into(), mat_norm(&(s2 * s3 - b))),
        ("C = s1 s3".into(), mat_norm(&(s1 * s3 - c))),
        ("A B = C".into(), mat_norm(&(a * b - c))),
        ("B^3".into(), mat_norm(&(power(&b, 3) - id))),
        ("C^2".into(), mat_norm(&(c * c - id))),
        (format!("A^{p}"), mat_norm(&(power(&a, p) - id))),
        (
            "kappa invariance A".into(),
            mat_norm(&(a.transpose() * kappa * a - kappa)),
        ),
        (
            "kappa invariance B".into(),
            mat_norm(&(b.transpose() * kappa * b - kappa)),
        ),
        (
            "kappa invariance C".into(),
            mat_norm(&(c.transpose() * kappa * c - kappa)),
        ),
    ];
    for (relation, residual) in checks {
        if residual > tol.relation_tol {
            return Err(Error::RelationFailure { relation, residual });
        }
    }
    Ok(rep)
}

/// Determinant of the invariant form: `3/4 - mu^2`; degenerate only at
/// `p = 6`.
pub fn det_kappa(rep: &CoxeterRep) -> f64 {
    0.75 - rep.params.mu * rep.params.mu
}

/// Eigenvalues of `kappa`: `{1, (2 - sqrt(4 mu^2 + 1))/2, (2 + sqrt(...))/2}`.
pub fn kappa_eigenvalues(rep: &CoxeterRep) -> [f64; 3] {
    let r = (4.0 * rep.params.mu * rep.params.mu + 1.0).sqrt();
    [1.0, 0.5 * (2.0 - r), 0.5 * (2.0 + r)]
}

/// Classifies the signature of the invariant form: degenerate iff
/// `det kappa` vanishes, hyperbolic iff one eigenvalue is negative
/// (`4 mu^2 + 1 > 4`, i.e. `p >= 7`), spherical otherwise.
pub fn classify_signature(rep: &CoxeterRep) -> SignatureClass {
    let det = det_kappa(rep);
    if det.abs() < Tolerances::default().rel_tol {
        SignatureClass::EuclideanDegenerate
    } else if det < 0.0 {
        SignatureClass::Hyperbolic
    } else {
        SignatureClass::Spherical
    }
}

/// Anti-diagonal standard metric `eta`.
pub fn eta() -> Matrix3<f64> {
    Matrix3::new(0.0, 0.0, 1.0, 0.0, 1.0, 0.0, 1.0, 0.0, 0.0)
}

/// Closed-form change of basis `S` with `S^T kappa S = eta` in the
/// hyperbolic regime `p >= 7`.
pub fn standardize_basis(rep: &CoxeterRep) -> Result<Matrix3<f64>> {
    if classify_signature(rep) != SignatureClass::Hyperbolic {
        return Err(Error::Domain(format!(
            "standard basis requires the hyperbolic case (p >= 7), got p = {}",
            rep.params.p
        )));
    }
    let mu = rep.params.mu;
    let r = (4.0 * mu * mu + 1.0).sqrt();
    let s8 = (8.0 * mu * mu + 2.0).sqrt();
    let rm = (r - 2.0).sqrt();
    let rp = (r + 2.0).sqrt();
    let rq = (4.0 * mu * mu + 1.0).sqrt() * rp; // sqrt((4mu^2+1)(r+2))
    let s = Matrix3::new(
        -2.0 * mu / (s8 * rm) - 1.0 / s8,
        2.0 * mu / rq,
        2.0 * mu / (s8 * rm) - 1.0 / s8,
        -1.0 / (2.0_f64.sqrt() * rm),
        -1.0 / rp,
        1.0 / (2.0_f64.sqrt() * rm),
        2.0_f64.sqrt() / (1.0 / (mu * mu) + 4.0).sqrt() - 1.0 / (s8 * rm),
        1.0 / rq,
        1.0 / (s8 * rm) + 2.0_f64.sqrt() / (1.0 / (mu * mu) + 4.0).sqrt(),
    );
    let residual = mat_norm(&(s.transpose() * rep.kappa * s - eta()));
    if residual > 1e-10 {
        return Err(Error::TableMismatch {
            what: "S^T kappa S - eta".into(),
            residual,
        });
    }
    Ok(s)
}

/// Closed-form change of basis for the degenerate `p = 6` case, mapping the
/// form to `diag(1, 1, 0)`; the transported generators `(S^T X^T S)^T` then
/// carry the bordered affine shape with last row `(0, 0, 1)`.
pub fn degenerate_basis() -> Matrix3<f64> {
    let s3 = 3.0_f64.sqrt();
    let s2 = 2.0_f64.sqrt();
    Matrix3::new(
        s3 / 4.0,
        -0.5,
        (1.5_f64).sqrt() / 2.0,
        -0.5,
        0.0,
        1.0 / s2,
        0.25,
        s3 / 2.0,
        1.0 / (2.0 * s2),
    )
}

/// Transported generator in the degenerate basis: `S^T X^T S`, the bordered
/// affine form whose last row is `(0, 0, 1)`.
pub fn degenerate_transport(x: &Matrix3<f64>) -> Matrix3<f64> {
    let s = degenerate_basis();
    s.transpose() * x.transpose() * s
}

/// Order of a generator word up to `max`: smallest `k` with `X^k = 1`.
pub fn element_order(x: &Matrix3<f64>, max: u32, tol: f64) -> Option<u32> {
    let mut acc = *x;
    for k in 1..=max {
        if mat_norm(&(acc - Matrix3::identity())) < tol {
            return Some(k);
        }
        acc *= x;
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn p8_relations() {
        let rep = build_rep(8).unwrap();
        let id = Matrix3::identity();
        assert!(mat_norm(&(power(&rep.a, 8) - id)) < 1e-10);
        assert!(mat_norm(&(power(&rep.b, 3) - id)) < 1e-12);
        assert!(mat_norm(&(rep.c * rep.c - id)) < 1e-12);
    }

    #[test]
    fn p6_is_degenerate() {
        let rep = build_rep(6).unwrap();
        assert!(det_kappa(&rep).abs() < 1e-14);
        assert_eq!(
            classify_signature(&rep),
            SignatureClass::EuclideanDegenerate
        );
    }

    #[test]
    fn p7_eigenvalues() {
        let rep = build_rep(7).unwrap();
        let ev = kappa_eigenvalues(&rep);
        assert_eq!(ev[0], 1.0);
        assert!(ev[1] < 0.0, "p = 7 must have a negative eigenvalue");
        // cross-check against the numerically computed spectrum
        let sym = nalgebra::SymmetricEigen::new(rep.kappa);
        let mut got: Vec<f64> = sym.eigenvalues.iter().copied().collect();
        got.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut want = ev.to_vec();
        want.sort_by(|a, b| a.partial_cmp(b).unwrap());
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12);
        }
    }

    #[test]
    fn classification_sweeps() {
        assert_eq!(
            classify_signature(&build_rep(5).unwrap()),
            SignatureClass::Spherical
        );
        let rep8 = build_rep(8).unwrap();
        assert_eq!(classify_signature(&rep8), SignatureClass::Hyperbolic);
        assert!((det_kappa(&rep8) + 0.103_553_390_593_273_7).abs() < 1e-12);
    }

    #[test]
    fn standardization_residuals() {
        for p in [7, 8, 9] {
            let rep = build_rep(p).unwrap();
            let s = standardize_basis(&rep).unwrap();
            let res = mat_norm(&(s.transpose() * rep.kappa * s - eta()));
            assert!(res < 1e-10, "p = {p}: residual {res}");
            // conjugated A preserves eta
            let si = s.try_inverse().unwrap();
            let at = si * rep.a * s;
            let res = mat_norm(&(at.transpose() * eta() * at - eta()));
            assert!(res < 1e-9, "p = {p}: transported invariance {res}");
        }
        assert!(standardize_basis(&build_rep(5).unwrap()).is_err());
    }

    #[test]
    fn generator_orders() {
        for p in 3..=12u32 {
            let rep = build_rep(p).unwrap();
            let ord = element_order(&rep.a, 16, 1e-10);
            assert_eq!(ord, Some(p), "order of A at p = {p}");
        }
    }

    #[test]
    fn kappa_invariance_on_words() {
        let rep = build_rep(8).unwrap();
        // every word of length <= 6 in {A, B}
        let mut frontier = vec![Matrix3::<f64>::identity()];
        for _ in 0..6 {
            let mut next = Vec::new();
            for w in &frontier {
                next.push(w * rep.a);
                next.push(w * rep.b);
            }
            for w in &next {
                let res = mat_norm(&(w.transpose() * rep.kappa * w - rep.kappa));
                assert!(res < 1e-9);
            }
            frontier = next;
        }
    }

    #[test]
    fn p6_bordered_affine_form() {
        let rep = build_rep(6).unwrap();
        let s = degenerate_basis();
        let transformed = s.transpose() * rep.kappa * s;
        let want = Matrix3::new(1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0);
        assert!(mat_norm(&(transformed - want)) < 1e-12);
        for x in [&rep.a, &rep.b, &rep.c] {
            let t = degenerate_transport(x);
            // bordered: last row (0, 0, 1)
            assert!(t[(2, 0)].abs() < 1e-10 && t[(2, 1)].abs() < 1e-10);
            assert!((t[(2, 2)] - 1.0).abs() < 1e-10);
        }
    }
}
