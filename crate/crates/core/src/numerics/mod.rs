//! Scalar conventions, special functions, root finding, quadrature and
//! finite-difference operators shared by the geometric modules.

mod fd;
mod hyp2f1;
mod quadrature;
mod radical;
mod roots;

pub use fd::{fd_apply, fd_first, fd_mixed, fd_second, SecondOrderOp};
pub use hyp2f1::{hyp2f1, hyp2f1_deriv, DEFAULT_TERM_CAP, DEFAULT_Z_MARGIN};
pub use quadrature::adaptive_quadrature;
pub use radical::RadicalExpr;
pub use roots::real_roots_in_interval;

/// Tolerance bundle threaded through construction-time relation checks.
///
/// `rel_tol` governs series summation and root refinement, `relation_tol`
/// bounds group-relation residuals, `fd_tol` bounds finite-difference
/// residuals. The invariant `rel_tol <= relation_tol <= fd_tol` is enforced.
#[derive(Debug, Clone, Copy)]
pub struct Tolerances {
    pub rel_tol: f64,
    pub relation_tol: f64,
    pub fd_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel_tol: 1e-12,
            relation_tol: 1e-10,
            fd_tol: 1e-6,
        }
    }
}

impl Tolerances {
    /// Builds a tolerance bundle, enforcing positivity and the ordering
    /// `rel_tol <= relation_tol <= fd_tol`.
    pub fn new(rel_tol: f64, relation_tol: f64, fd_tol: f64) -> crate::Result<Self> {
        if !(rel_tol > 0.0 && relation_tol > 0.0 && fd_tol > 0.0) {
            return Err(crate::Error::Domain("tolerances must be positive".into()));
        }
        if !(rel_tol <= relation_tol && relation_tol <= fd_tol) {
            return Err(crate::Error::Domain(
                "tolerances must satisfy rel_tol <= relation_tol <= fd_tol".into(),
            ));
        }
        Ok(Self {
            rel_tol,
            relation_tol,
            fd_tol,
        })
    }

    /// Reads an override from the `CARTAN_TESS_TOL` environment variable
    /// (a single float used as `rel_tol`, with the other two scaled by the
    /// default ratios), falling back to the defaults.
    pub fn from_env() -> Self {
        match std::env::var("CARTAN_TESS_TOL")
            .ok()
            .and_then(|s| s.parse::<f64>().ok())
        {
            Some(r) if r > 0.0 => Self {
                rel_tol: r,
                relation_tol: r * 1e2,
                fd_tol: r * 1e6,
            },
            _ => Self::default(),
        }
    }
}

/// Guards a scalar against NaN/infinity escaping a public operation.
pub(crate) fn finite(x: f64, what: &str) -> crate::Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(crate::Error::Domain(format!("non-finite value in {what}")))
    }
}
