//! Regular harmonics on the hyperbolic plane: the fundamental symmetric
//! matrix of the triangular coset representative, the metric Laplacian and
//! its eigenvalue checks, Euler coordinates and the Wick-rotated scalar
//! product, finite-dimensional representation matrices of the tiling group
//! on harmonics, invariant-subspace reports, and truncated harmonic fits.

use crate::fuchsian::{self, Psl2Element, TilingGroup};
use crate::models::{EulerPoint, SolvPoint};
use crate::numerics::{adaptive_quadrature, fd_apply, SecondOrderOp};
use crate::{Error, Result};
use nalgebra::{DMatrix, DVector, Matrix3, Vector3};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Entries `(m11, m12, m22)` of the fundamental symmetric matrix
/// `L L^T` at a plane point: `m11 = e^{w1} (w2^2 + 4)/4`, `m12 = w2/2`,
/// `m22 = e^{-w1}`; the determinant is identically one.
pub fn eval_fundamental(p: &SolvPoint) -> (f64, f64, f64) {
    let (w1, w2) = (p.w[0], p.w[1]);
    (
        w1.exp() * (w2 * w2 + 4.0) / 4.0,
        w2 / 2.0,
        (-w1).exp(),
    )
}

/// Fundamental entries in Euler coordinates, at a possibly complex Cartan
/// parameter (used by the Wick-rotated integrals).
pub fn fundamental_euler(mu: Complex64, theta: f64) -> (Complex64, Complex64, Complex64) {
    let (s, c) = (theta.sin(), theta.cos());
    let ep = mu.exp();
    let em = (-mu).exp();
    (
        ep * s * s + em * c * c,
        (ep - em) * s * c,
        em * s * s + ep * c * c,
    )
}

// ---------------------------------------------------------------------------
// Laplace operator
// ---------------------------------------------------------------------------

/// Inverse-metric coefficients of `H^{2+k}` in solvable coordinates:
/// `g^{11} = 1`, `g^{1j} = -w_j`, `g^{jj} = 4 + w_j^2`,
/// `g^{ij} = w_i w_j` (distinct `i, j >= 2`); `sqrt(det g)` is constant.
pub fn inverse_metric(w: &[f64]) -> Vec<Vec<f64>> {
    let n = w.len();
    let mut g = vec![vec![0.0; n]; n];
    g[0][0] = 1.0;
    for j in 1..n {
        g[0][j] = -w[j];
        g[j][0] = -w[j];
        for i in 1..n {
            g[i][j] = if i == j {
                4.0 + w[j] * w[j]
            } else {
                w[i] * w[j]
            };
        }
    }
    g
}

/// First-order (divergence) coefficients of the metric Laplacian
/// `div(g^{ij} grad)`: `b_1 = -(k+1)`, `b_j = (k+2) w_j`.
pub fn metric_drift(w: &[f64]) -> Vec<f64> {
    let n = w.len();
    let k = n - 2;
    let mut b = vec![0.0; n];
    b[0] = -((k + 1) as f64);
    for j in 1..n {
        b[j] = (k + 2) as f64 * w[j];
    }
    b
}

/// The metric Laplacian `div(g^{ij} grad f)` at `p`, by central
/// differences. The harmonic normalization carries an extra factor two
/// (see [`laplacian_s`]); this plain version drives the radial identities
/// and the heat kernel.
pub fn metric_laplacian(f: impl FnMut(&[f64]) -> f64, p: &SolvPoint, h: f64) -> f64 {
    let op = SecondOrderOp::new(inverse_metric(&p.w), metric_drift(&p.w));
    fd_apply(&op, f, &p.w, h)
}

/// The normalized operator `2 div(g^{ij} grad f)` whose eigenvalue on the
/// fundamental triple is 4 and on degree-`J` harmonics `2J(J+1)`.
pub fn laplacian_s(f: impl FnMut(&[f64]) -> f64, p: &SolvPoint, h: f64) -> f64 {
    2.0 * metric_laplacian(f, p, h)
}

// ---------------------------------------------------------------------------
// Euler coordinates
// ---------------------------------------------------------------------------

/// Euler coordinates `(mu1, theta1)` diagonalizing the fundamental matrix:
/// `sinh(mu1) cos(2 theta1) = (m22 - m11)/2` and
/// `sinh(mu1) sin(2 theta1) = m12`, canonicalized to `mu1 >= 0`,
/// `theta1` in `[0, pi)`.
pub fn euler_coords(p: &SolvPoint) -> EulerPoint {
    let (m11, m12, m22) = eval_fundamental(p);
    let a = 0.5 * (m22 - m11);
    let s = (a * a + m12 * m12).sqrt();
    if s == 0.0 {
        return EulerPoint { mu1: 0.0, theta1: 0.0 };
    }
    let mu1 = s.asinh();
    let theta1 = 0.5 * m12.atan2(a);
    let theta1 = if theta1 < 0.0 { theta1 + PI } else { theta1 };
    EulerPoint { mu1, theta1 }
}

/// Fundamental entries reconstructed from Euler coordinates.
pub fn fundamental_from_euler(e: &EulerPoint) -> (f64, f64, f64) {
    let v = fundamental_euler(Complex64::new(e.mu1, 0.0), e.theta1);
    (v.0.re, v.1.re, v.2.re)
}

/// Solvable coordinates recovered from Euler coordinates:
/// `w1 = -ln m22`, `w2 = 2 m12`.
pub fn euler_to_solv(e: &EulerPoint) -> SolvPoint {
    let (_, m12, m22) = fundamental_from_euler(e);
    SolvPoint::plane(-m22.ln(), 2.0 * m12)
}

/// Volume density `4 sinh(mu1)` of the Euler parametrization.
pub fn euler_volume_density(mu1: f64) -> f64 {
    4.0 * mu1.sinh()
}

// ---------------------------------------------------------------------------
// Wick-rotated inner product
// ---------------------------------------------------------------------------

/// Wick-rotated scalar product
/// `4 ∫_0^pi dpsi ∫_0^{2pi} dtheta sin(psi) f(-i psi, theta) g(i psi, theta)`.
///
/// The measure sign is chosen so the fundamental orthonormal triple has
/// unit norm (the raw volume-form orientation would flip the sign, giving
/// `<1,1> = -16 pi`). Errors out when the imaginary residue exceeds 1e-10.
pub fn wick_inner(
    f: impl Fn(Complex64, f64) -> Complex64 + Copy,
    g: impl Fn(Complex64, f64) -> Complex64 + Copy,
) -> Result<f64> {
    let theta_n = 64usize;
    let inner = |psi: f64| -> Complex64 {
        // trapezoid in theta is exact for trigonometric polynomials
        let mut acc = Complex64::new(0.0, 0.0);
        for k in 0..theta_n {
            let theta = 2.0 * PI * k as f64 / theta_n as f64;
            let mu_minus = Complex64::new(0.0, -psi);
            let mu_plus = Complex64::new(0.0, psi);
            acc += f(mu_minus, theta) * g(mu_plus, theta);
        }
        acc * (2.0 * PI / theta_n as f64) * psi.sin()
    };
    let re = adaptive_quadrature(|psi| inner(psi).re, 0.0, PI, 1e-12)?;
    let im = adaptive_quadrature(|psi| inner(psi).im, 0.0, PI, 1e-12)?;
    let (re, im) = (4.0 * re, 4.0 * im);
    if im.abs() > 1e-10 {
        return Err(Error::ImaginaryResidue(im.abs()));
    }
    Ok(re)
}

// ---------------------------------------------------------------------------
// harmonic bases and representation matrices
// ---------------------------------------------------------------------------

/// Frame of the orthonormal degree-one harmonic triple.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Frame {
    /// `(c m22, c' m12, c m11)` with `c = sqrt(3/(2 pi))/4`,
    /// `c' = sqrt(3/pi)/4`.
    Solvable,
    /// The solvable triple rotated by `5 pi/8` about the rotation-invariant
    /// axis `(1, 0, 1)/sqrt 2`; the frame of the tabulated representation
    /// matrices.
    Tabulated,
}

/// The orthonormal degree-one harmonic triple in a chosen frame.
#[derive(Debug, Clone)]
pub struct HarmonicBasis {
    pub frame: Frame,
    rot: Matrix3<f64>,
}

/// Rodrigues rotation by `5 pi/8` about `(1, 0, 1)/sqrt 2`, with
/// radical-exact entries `cos = -sqrt(2 - sqrt 2)/2`,
/// `sin = sqrt(2 + sqrt 2)/2`.
fn frame_rotation() -> Matrix3<f64> {
    let s2 = 2.0_f64.sqrt();
    let cw = -(2.0 - s2).sqrt() / 2.0;
    let sw = (2.0 + s2).sqrt() / 2.0;
    let k = sw / s2;
    Matrix3::new(
        (1.0 + cw) / 2.0,
        -k,
        (1.0 - cw) / 2.0,
        k,
        cw,
        -k,
        (1.0 - cw) / 2.0,
        k,
        (1.0 + cw) / 2.0,
    )
}

impl HarmonicBasis {
    pub fn solvable() -> Self {
        Self {
            frame: Frame::Solvable,
            rot: Matrix3::identity(),
        }
    }

    pub fn tabulated() -> Self {
        Self {
            frame: Frame::Tabulated,
            rot: frame_rotation(),
        }
    }

    /// Normalization constants of the triple.
    pub fn constants() -> (f64, f64) {
        ((3.0 / (2.0 * PI)).sqrt() / 4.0, (3.0 / PI).sqrt() / 4.0)
    }

    /// The triple at a plane point.
    pub fn eval(&self, p: &SolvPoint) -> Vector3<f64> {
        let (c1, c2) = Self::constants();
        let (m11, m12, m22) = eval_fundamental(p);
        self.rot * Vector3::new(c1 * m22, c2 * m12, c1 * m11)
    }

    /// The triple in Euler coordinates at complex Cartan parameter.
    pub fn eval_euler(&self, mu: Complex64, theta: f64) -> [Complex64; 3] {
        let (c1, c2) = Self::constants();
        let (m11, m12, m22) = fundamental_euler(mu, theta);
        let v = [c1 * m22, c2 * m12, c1 * m11];
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for i in 0..3 {
            for (j, vj) in v.iter().enumerate() {
                out[i] += self.rot[(i, j)] * vj;
            }
        }
        out
    }
}

/// Degree-one representation matrix `D(g)`: `U_i(g p) = D_ij U_j(p)`,
/// computed by sampling and a least-squares solve; the sample set is
/// re-drawn up to five times if ill-conditioned.
pub fn rep_matrix(g: &Psl2Element, basis: &HarmonicBasis) -> Result<Matrix3<f64>> {
    let mut seed = 0x2545f4914f6cdd1d_u64;
    for _attempt in 0..5 {
        let mut rng = || {
            seed = seed
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2.4
        };
        let pts: Vec<SolvPoint> = (0..12).map(|_| SolvPoint::plane(rng(), rng())).collect();
        let mut v = DMatrix::<f64>::zeros(3, pts.len());
        let mut u = DMatrix::<f64>::zeros(3, pts.len());
        for (k, p) in pts.iter().enumerate() {
            let vp = basis.eval(p);
            let up = basis.eval(&g.apply_solv(p)?);
            for i in 0..3 {
                v[(i, k)] = vp[i];
                u[(i, k)] = up[i];
            }
        }
        let vvt = &v * v.transpose();
        if let Some(inv) = vvt.clone().try_inverse() {
            let cond_ok = vvt.symmetric_eigenvalues().iter().all(|&e| e > 1e-10);
            if cond_ok {
                let d = &u * v.transpose() * inv;
                return Ok(Matrix3::from_fn(|i, j| d[(i, j)]));
            }
        }
    }
    Err(Error::IllConditioned(5))
}

/// The four tabulated degree-one representation matrices, radical-exact.
pub fn tabulated_rep_matrices() -> [(&'static str, Matrix3<f64>); 4] {
    let s2 = 2.0_f64.sqrt();
    let q14 = 2.0_f64.powf(0.25); // 2^{1/4}
    let q34 = 2.0_f64.powf(0.75); // 2^{3/4}
    let root43 = (4.0 + 3.0 * s2).sqrt();
    let dt = Matrix3::new(
        (2.0 + s2) / 4.0,
        0.5,
        (2.0 - s2) / 4.0,
        -0.5,
        1.0 / s2,
        0.5,
        (2.0 - s2) / 4.0,
        -0.5,
        (2.0 + s2) / 4.0,
    );
    let ds = Matrix3::new(
        0.25 + 1.0 / s2 - 1.0 / q14,
        (2.0 + s2 - 2.0 * root43) / 4.0,
        0.75 + 1.0 / s2,
        -0.5 + 1.0 / q34 - 1.0 / (2.0 * s2) + 1.0 / q14,
        -0.5 - s2,
        (2.0 + 2.0 * q14 + s2 + 2.0 * q34) / 4.0,
        (17.0 + 12.0 * s2).sqrt() / 4.0,
        (-2.0 - s2 - 2.0 * root43) / 4.0,
        0.25 + 1.0 / s2 + 1.0 / q14,
    );
    let dr = Matrix3::new(
        (1.0 + s2) / 4.0,
        0.5 * (-1.0 / s2 - root43),
        (3.0 + 3.0 * s2 + 2.0 * q34) / 4.0,
        1.0 / q34 - 1.0 / (2.0 * s2) + 1.0 / q14,
        -1.5 - 1.0 / s2,
        1.0 / q34 + 1.0 / (2.0 * s2) + 1.0 / q14,
        (3.0 + 3.0 * s2 - 2.0 * q34) / 4.0,
        (s2 - 2.0 * root43) / 4.0,
        (1.0 + s2) / 4.0,
    );
    let du3 = Matrix3::new(
        10.0 + 7.0 * s2 + 2.0 * (48.0 + 34.0 * s2).sqrt(),
        -12.0 - 8.0 * s2 - (2.0 * (140.0 + 99.0 * s2)).sqrt(),
        7.0 + 5.0 * s2 + 2.0 * (24.0 + 17.0 * s2).sqrt(),
        -q14 * (2.0 + s2),
        3.0 + 2.0 * s2,
        -q14 * (2.0 + s2),
        7.0 + 5.0 * s2 - 2.0 * (24.0 + 17.0 * s2).sqrt(),
        12.0 + 8.0 * s2 - (2.0 * (140.0 + 99.0 * s2)).sqrt(),
        10.0 + 7.0 * s2 - 2.0 * (48.0 + 34.0 * s2).sqrt(),
    );
    [("T", dt), ("S", ds), ("R", dr), ("U^3", du3)]
}

// ---------------------------------------------------------------------------
// invariant-subspace analysis
// ---------------------------------------------------------------------------

/// Exponent triple of a degree-`J` monomial in the three basis functions.
type Mono = (u8, u8, u8);

fn monomials_of_degree(j: u32) -> Vec<Mono> {
    let mut out = Vec::new();
    for a in 0..=j {
        for b in 0..=(j - a) {
            let c = j - a - b;
            out.push((a as u8, b as u8, c as u8));
        }
    }
    out
}

/// Coefficient-space action on degree-`J` monomial functions: functions
/// transform by the transpose of the monomial substitution matrix.
fn monomial_action(d: &Matrix3<f64>, j: u32) -> DMatrix<f64> {
    let monos = monomials_of_degree(j);
    let index: std::collections::HashMap<Mono, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, i))
        .collect();
    let n = monos.len();
    // substitution: u_i -> sum_j d[i][j] u_j, expand each monomial
    let mut m = DMatrix::<f64>::zeros(n, n);
    for (row, &(a, b, c)) in monos.iter().enumerate() {
        // expand (sum d0j uj)^a (sum d1j uj)^b (sum d2j uj)^c
        let mut poly: std::collections::HashMap<Mono, f64> = std::collections::HashMap::new();
        poly.insert((0, 0, 0), 1.0);
        for (var, count) in [(0usize, a), (1, b), (2, c)] {
            for _ in 0..count {
                let mut next: std::collections::HashMap<Mono, f64> =
                    std::collections::HashMap::new();
                for (&(x, y, z), &coef) in &poly {
                    for (col, e) in [(0u8, 0usize), (1, 1), (2, 2)] {
                        let cval = d[(var, e)];
                        if cval == 0.0 {
                            continue;
                        }
                        let key = match col {
                            0 => (x + 1, y, z),
                            1 => (x, y + 1, z),
                            _ => (x, y, z + 1),
                        };
                        *next.entry(key).or_insert(0.0) += coef * cval;
                    }
                }
                poly = next;
            }
        }
        for (key, coef) in poly {
            m[(row, index[&key])] = coef;
        }
    }
    // coefficients transform with the transpose
    m.transpose()
}

/// Gram matrix of the invariant quadratic form (the determinant relation)
/// in the solvable triple: `q(u) = u0 u2 / c1^2 - u1^2 / c2^2`, constant
/// one on the orbit.
fn det_form_coeffs(j: u32) -> Vec<DVector<f64>> {
    // det-multiples inside degree-J monomials: q * (monomials of degree J-2)
    if j < 2 {
        return vec![];
    }
    let (c1, c2) = HarmonicBasis::constants();
    let monos = monomials_of_degree(j);
    let index: std::collections::HashMap<Mono, usize> = monos
        .iter()
        .enumerate()
        .map(|(i, &m)| (m, i))
        .collect();
    let lower = monomials_of_degree(j - 2);
    lower
        .iter()
        .map(|&(a, b, c)| {
            let mut v = DVector::<f64>::zeros(monos.len());
            v[index[&(a + 1, b, c + 1)]] += 1.0 / (c1 * c1);
            v[index[&(a, b + 2, c)]] -= 1.0 / (c2 * c2);
            v
        })
        .collect()
}

/// Dimension report for one conjugated generator at one degree.
#[derive(Debug, Clone, serde::Serialize)]
pub struct EigenspaceEntry {
    pub conjugate: usize,
    pub dim_plus_one: usize,
    pub dim_minus_one: usize,
}

/// Invariant-subspace report at a fixed degree `J`.
#[derive(Debug, Clone, serde::Serialize)]
pub struct InvariantReport {
    pub degree: u32,
    pub entries: Vec<EigenspaceEntry>,
    /// Smallest singular value of the stacked fixed-vector system,
    /// relative to the largest; nonzero means no common invariant.
    pub common_invariant_gap: f64,
    pub eigenvectors_pairwise_distinct: bool,
}

fn eig_dim(q: &DMatrix<f64>, lambda: f64) -> usize {
    let n = q.nrows();
    let shifted = q - DMatrix::<f64>::identity(n, n) * lambda;
    let svd = shifted.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    svd.singular_values
        .iter()
        .filter(|&&s| s < 1e-8 * smax.max(1.0))
        .count()
}

fn fixed_vector(q: &DMatrix<f64>, lambda: f64) -> DVector<f64> {
    let n = q.nrows();
    let shifted = q - DMatrix::<f64>::identity(n, n) * lambda;
    let svd = shifted.svd(false, true);
    let vt = svd.v_t.unwrap();
    vt.row(n - 1).transpose()
}

/// Analyzes the sixteen conjugated translation generators at degree `J`
/// (at most 4): eigenspace dimensions for the eigenvalues `+1` and `-1`
/// in the quotient by the determinant relation, pairwise distinctness of
/// the fixed directions, and emptiness of the common invariant subspace.
pub fn invariant_subspace_report(j: u32) -> Result<InvariantReport> {
    if !(1..=4).contains(&j) {
        return Err(Error::Unsupported(format!("degree {j} outside 1..=4")));
    }
    let g16 = fuchsian::build_gamma16()?;
    let basis = HarmonicBasis::solvable();
    let conjugates: Vec<Matrix3<f64>> = g16
        .generators
        .iter()
        .map(|g| rep_matrix(g, &basis))
        .collect::<Result<_>>()?;
    let pairing = g16.inverse_pairing.clone();
    // quotient by the determinant-relation subspace
    let monos = monomials_of_degree(j);
    let n = monos.len();
    let det_basis = det_form_coeffs(j);
    let quotient_dim = n - det_basis.len();
    // orthonormal complement of the det subspace
    let mut dmat = DMatrix::<f64>::zeros(n, det_basis.len().max(1));
    for (c, v) in det_basis.iter().enumerate() {
        dmat.set_column(c, v);
    }
    let complement: DMatrix<f64> = if det_basis.is_empty() {
        DMatrix::identity(n, n)
    } else {
        let svd = dmat.clone().svd(true, false);
        let u = svd.u.unwrap();
        // columns of U beyond the rank span the orthogonal complement
        let full = {
            // build a full orthonormal basis by QR of [U | I]
            let mut aug = DMatrix::<f64>::zeros(n, n + u.ncols());
            aug.view_mut((0, 0), (n, u.ncols())).copy_from(&u);
            aug.view_mut((0, u.ncols()), (n, n))
                .copy_from(&DMatrix::identity(n, n));
            let qr = aug.qr();
            qr.q()
        };
        full.columns(det_basis.len(), quotient_dim).into_owned()
    };
    // projector P = B^T (with B orthonormal): quotient matrix B^T M B + the
    // det-part mixes only INTO the det subspace, so B^T M B represents the
    // quotient action
    let mut entries = Vec::new();
    let mut fixed: Vec<DVector<f64>> = Vec::new();
    let mut stacked = DMatrix::<f64>::zeros(16 * quotient_dim, quotient_dim);
    for (idx, c) in conjugates.iter().enumerate() {
        let m = monomial_action(c, j);
        let q = complement.transpose() * &m * &complement;
        let dp = eig_dim(&q, 1.0);
        let dm = eig_dim(&q, -1.0);
        entries.push(EigenspaceEntry {
            conjugate: idx,
            dim_plus_one: dp,
            dim_minus_one: dm,
        });
        fixed.push(fixed_vector(&q, 1.0));
        stacked
            .view_mut((idx * quotient_dim, 0), (quotient_dim, quotient_dim))
            .copy_from(&(&q - DMatrix::<f64>::identity(quotient_dim, quotient_dim)));
    }
    let svd = stacked.svd(false, false);
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let smin = svd
        .singular_values
        .iter()
        .cloned()
        .fold(f64::INFINITY, f64::min);
    // fixed lines coincide exactly on inverse pairs (g and g^{-1} share
    // eigenvectors); distinctness is asserted across pair classes
    let mut distinct = true;
    for i in 0..fixed.len() {
        for kk in (i + 1)..fixed.len() {
            let dot = fixed[i].dot(&fixed[kk]).abs();
            let norms = fixed[i].norm() * fixed[kk].norm();
            let parallel = (dot - norms).abs() < 1e-8 * norms;
            if pairing[i] == kk {
                if !parallel {
                    distinct = false; // inverse pair must share its line
                }
            } else if parallel {
                distinct = false;
            }
        }
    }
    Ok(InvariantReport {
        degree: j,
        entries,
        common_invariant_gap: smin / smax.max(1e-300),
        eigenvectors_pairwise_distinct: distinct,
    })
}

// ---------------------------------------------------------------------------
// harmonic fits
// ---------------------------------------------------------------------------

/// Least-squares coefficients of a truncated harmonic expansion.
#[derive(Debug, Clone, serde::Serialize)]
pub struct HarmonicCoefficients {
    pub degree: u32,
    /// `(i, j, k)` exponents of `m11^i m12^j m22^k` with the coefficient.
    pub coefficients: Vec<((u8, u8, u8), f64)>,
    pub residual: f64,
    pub holdout_error: f64,
}

impl HarmonicCoefficients {
    pub fn get(&self, mono: (u8, u8, u8)) -> f64 {
        self.coefficients
            .iter()
            .find(|(m, _)| *m == mono)
            .map(|(_, c)| *c)
            .unwrap_or(0.0)
    }

    /// Evaluates the fitted expansion at a point.
    pub fn eval(&self, p: &SolvPoint) -> f64 {
        let (m11, m12, m22) = eval_fundamental(p);
        self.coefficients
            .iter()
            .map(|((i, j, k), c)| {
                c * m11.powi(*i as i32) * m12.powi(*j as i32) * m22.powi(*k as i32)
            })
            .sum()
    }
}

fn all_monomials_up_to(d: u32) -> Vec<(u8, u8, u8)> {
    let mut out = Vec::new();
    for total in 0..=d {
        out.extend(monomials_of_degree(total));
    }
    out
}

/// Fits `f(p) = sum c_ijk m11^i m12^j m22^k` over all monomials of total
/// degree at most `d`. A fifth of the samples is held out to report the
/// reconstruction error.
pub fn fit_expansion(samples: &[(SolvPoint, f64)], d: u32) -> Result<HarmonicCoefficients> {
    let monos = all_monomials_up_to(d);
    let holdout = samples.len() / 5;
    let train = samples.len() - holdout;
    if train < monos.len() {
        return Err(Error::RankDeficient {
            rank: train,
            need: monos.len(),
        });
    }
    let design = |set: &[(SolvPoint, f64)]| -> (DMatrix<f64>, DVector<f64>) {
        let mut a = DMatrix::<f64>::zeros(set.len(), monos.len());
        let mut y = DVector::<f64>::zeros(set.len());
        for (r, (p, v)) in set.iter().enumerate() {
            let (m11, m12, m22) = eval_fundamental(p);
            for (c, &(i, j, k)) in monos.iter().enumerate() {
                a[(r, c)] = m11.powi(i as i32) * m12.powi(j as i32) * m22.powi(k as i32);
            }
            y[r] = *v;
        }
        (a, y)
    };
    let (a, y) = design(&samples[..train]);
    let svd = a.clone().svd(true, true);
    let smax = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > 1e-10 * smax)
        .count();
    // the determinant relation makes the free monomial family dependent for
    // d >= 2; the intrinsic rank of the degree-<= d harmonics is (d+1)^2
    let need = ((d + 1) * (d + 1)) as usize;
    if rank < need {
        return Err(Error::RankDeficient { rank, need });
    }
    // minimum-norm solution: the truncated pseudo-inverse kills the
    // det-relation null direction
    let c = svd
        .solve(&y, 1e-10 * smax)
        .map_err(|e| Error::Singular(format!("least squares: {e}")))?;
    let residual = (&a * &c - &y).norm() / (y.norm().max(1e-300));
    let coeffs = HarmonicCoefficients {
        degree: d,
        coefficients: monos.iter().cloned().zip(c.iter().cloned()).collect(),
        residual,
        holdout_error: 0.0,
    };
    let holdout_error = if holdout > 0 {
        let set = &samples[train..];
        let mut err: f64 = 0.0;
        let mut scale: f64 = 0.0;
        for (p, v) in set {
            err = err.max((coeffs.eval(p) - v).abs());
            scale = scale.max(v.abs());
        }
        err / scale.max(1.0)
    } else {
        0.0
    };
    Ok(HarmonicCoefficients {
        holdout_error,
        ..coeffs
    })
}

/// Deterministic sample cloud for fits and representation checks.
pub fn sample_points(n: usize, span: f64, seed: u64) -> Vec<SolvPoint> {
    let mut state = seed.max(1);
    let mut rng = move || {
        state = state
            .wrapping_mul(6364136223846793005)
            .wrapping_add(1442695040888963407);
        ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2.0 * span
    };
    (0..n).map(|_| SolvPoint::plane(rng(), rng())).collect()
}

/// Convenience wrapper exposing the tiling group used by the harmonic
/// representation checks.
pub fn tiling_group() -> Result<TilingGroup> {
    fuchsian::build_delta832()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn fundamental_values() {
        let (m11, m12, m22) = eval_fundamental(&SolvPoint::plane(0.0, 0.0));
        assert_eq!((m11, m12, m22), (1.0, 0.0, 1.0));
        let (m11, m12, m22) = eval_fundamental(&SolvPoint::plane(1.0, 0.0));
        assert_abs_diff_eq!(m11, std::f64::consts::E, epsilon = 1e-14);
        assert_eq!(m12, 0.0);
        assert_abs_diff_eq!(m22, (-1.0_f64).exp(), epsilon = 1e-14);
        // det = 1 on a deterministic cloud
        for p in sample_points(100, 2.0, 11) {
            let (a, b, c) = eval_fundamental(&p);
            assert_abs_diff_eq!(a * c - b * b, 1.0, epsilon = 1e-12);
        }
    }

    #[test]
    fn laplacian_eigenvalue_four() {
        let h = 1e-3;
        let pts = [
            SolvPoint::plane(0.3, -0.7),
            SolvPoint::plane(-0.2, 0.4),
            SolvPoint::plane(0.9, 1.1),
        ];
        for p in &pts {
            let comps: [(usize, fn(&[f64]) -> f64); 3] = [
                (0, |w| w[0].exp() * (w[1] * w[1] + 4.0) / 4.0),
                (1, |w| w[1] / 2.0),
                (2, |w| (-w[0]).exp()),
            ];
            for (idx, f) in comps {
                let val = match idx {
                    0 => eval_fundamental(p).0,
                    1 => eval_fundamental(p).1,
                    _ => eval_fundamental(p).2,
                };
                let lap = laplacian_s(f, p, h);
                assert!(
                    (lap - 4.0 * val).abs() < 1e-5,
                    "component {idx}: {lap} vs {}",
                    4.0 * val
                );
            }
        }
    }

    #[test]
    fn laplacian_degree_two_eigenvalue_twelve() {
        let h = 1e-3;
        let p = SolvPoint::plane(0.4, -0.3);
        let f = |w: &[f64]| (-2.0 * w[0]).exp(); // m22^2
        let val = (-2.0 * p.w[0]).exp();
        assert!((laplacian_s(f, &p, h) - 12.0 * val).abs() < 1e-4);
        let g = |w: &[f64]| w[1] * w[1] / 4.0 + 1.0 / 3.0; // m12^2 + 1/3
        let gval = p.w[1] * p.w[1] / 4.0 + 1.0 / 3.0;
        assert!((laplacian_s(g, &p, h) - 12.0 * gval).abs() < 1e-4);
    }

    #[test]
    fn degree_two_span_closed_under_laplacian() {
        // finite-difference images of degree <= 2 monomials re-fit inside
        // the same span
        let pts = sample_points(120, 1.2, 23);
        for mono in [(1u8, 0u8, 0u8), (0, 1, 1), (0, 2, 0), (1, 1, 0)] {
            let f = move |w: &[f64]| {
                let p = SolvPoint::plane(w[0], w[1]);
                let (m11, m12, m22) = eval_fundamental(&p);
                m11.powi(mono.0 as i32) * m12.powi(mono.1 as i32) * m22.powi(mono.2 as i32)
            };
            let samples: Vec<(SolvPoint, f64)> = pts
                .iter()
                .map(|p| (p.clone(), laplacian_s(f, p, 1e-3)))
                .collect();
            let fit = fit_expansion(&samples, 2).unwrap();
            assert!(fit.residual < 1e-4, "monomial {mono:?}: {}", fit.residual);
        }
    }

    #[test]
    fn euler_roundtrip() {
        let e = euler_coords(&SolvPoint::plane(0.0, 0.0));
        assert_eq!((e.mu1, e.theta1), (0.0, 0.0));
        // diagonal case
        let e = euler_coords(&SolvPoint::plane(0.8, 0.0));
        assert_abs_diff_eq!(e.mu1, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(e.theta1, PI / 2.0, epsilon = 1e-12);
        let e = euler_coords(&SolvPoint::plane(-0.8, 0.0));
        assert_abs_diff_eq!(e.mu1, 0.8, epsilon = 1e-12);
        assert!(e.theta1.abs() < 1e-12);
        // reconstruction through the fundamental matrix
        for p in sample_points(100, 1.5, 5) {
            let e = euler_coords(&p);
            let (a, b, c) = fundamental_from_euler(&e);
            let (x, y, z) = eval_fundamental(&p);
            assert_abs_diff_eq!(a, x, epsilon = 1e-9);
            assert_abs_diff_eq!(b, y, epsilon = 1e-9);
            assert_abs_diff_eq!(c, z, epsilon = 1e-9);
            let q = euler_to_solv(&e);
            assert_abs_diff_eq!(q.w[0], p.w[0], epsilon = 1e-9);
            assert_abs_diff_eq!(q.w[1], p.w[1], epsilon = 1e-9);
        }
        assert_abs_diff_eq!(euler_volume_density(0.5), 4.0 * 0.5_f64.sinh());
    }

    #[test]
    fn wick_orthonormality() {
        let basis = HarmonicBasis::solvable();
        for i in 0..3usize {
            for j in 0..3usize {
                let f = |mu: Complex64, th: f64| basis.eval_euler(mu, th)[i];
                let g = |mu: Complex64, th: f64| basis.eval_euler(mu, th)[j];
                let v = wick_inner(f, g).unwrap();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((v - want).abs() < 1e-10, "<u{i}, u{j}> = {v}");
            }
        }
        // the constant function: +16 pi under the unit-norm convention
        let one = |_: Complex64, _: f64| Complex64::new(1.0, 0.0);
        let v = wick_inner(one, one).unwrap();
        assert_abs_diff_eq!(v, 16.0 * PI, epsilon = 1e-9);
    }

    #[test]
    fn rep_matrices_match_tables() {
        let tg = tiling_group().unwrap();
        let basis = HarmonicBasis::tabulated();
        let tables = tabulated_rep_matrices();
        let elements = [
            tg.t.clone(),
            tg.s.clone(),
            tg.r.clone(),
            fuchsian::power(&tg.u, 3),
        ];
        for ((name, want), g) in tables.iter().zip(elements.iter()) {
            let d = rep_matrix(g, &basis).unwrap();
            let err = (d - want).iter().fold(0.0_f64, |m, x| m.max(x.abs()));
            assert!(err < 1e-9, "D({name}) error {err}");
        }
        // the triple relations transfer to degree one
        let dt = tables[0].1;
        let ds = tables[1].1;
        let dr = tables[2].1;
        let id = Matrix3::<f64>::identity();
        let mut t8 = Matrix3::<f64>::identity();
        for _ in 0..8 {
            t8 *= dt;
        }
        assert!((t8 - id).iter().fold(0.0_f64, |m, x| m.max(x.abs())) < 1e-8);
        assert!(
            ((ds * ds * ds) - id)
                .iter()
                .fold(0.0_f64, |m, x| m.max(x.abs()))
                < 1e-8
        );
        assert!(
            ((dr * dr) - id)
                .iter()
                .fold(0.0_f64, |m, x| m.max(x.abs()))
                < 1e-8
        );
        assert!(
            ((dt * ds * dr) - id)
                .iter()
                .fold(0.0_f64, |m, x| m.max(x.abs()))
                < 1e-8
        );
        // first row of D(T)
        assert_abs_diff_eq!(dt[(0, 0)], (2.0 + 2.0_f64.sqrt()) / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(dt[(0, 1)], 0.5, epsilon = 1e-14);
        assert_abs_diff_eq!(dt[(0, 2)], (2.0 - 2.0_f64.sqrt()) / 4.0, epsilon = 1e-14);
        // top-left of D(U^3)
        let s2 = 2.0_f64.sqrt();
        assert_abs_diff_eq!(
            tables[3].1[(0, 0)],
            10.0 + 7.0 * s2 + 2.0 * (48.0 + 34.0 * s2).sqrt(),
            epsilon = 1e-12
        );
    }

    #[test]
    fn rep_homomorphism_on_words() {
        let tg = tiling_group().unwrap();
        let basis = HarmonicBasis::solvable();
        let gens = [tg.t.clone(), tg.s.clone(), tg.r.clone()];
        let mut seed = 99u64;
        let mut pick = move || {
            seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1);
            (seed >> 33) as usize % 3
        };
        for _ in 0..50 {
            let w1 = gens[pick()].mul(&gens[pick()]).mul(&gens[pick()]);
            let w2 = gens[pick()].mul(&gens[pick()]);
            let d1 = rep_matrix(&w1, &basis).unwrap();
            let d2 = rep_matrix(&w2, &basis).unwrap();
            let d12 = rep_matrix(&w1.mul(&w2), &basis).unwrap();
            let err = (d1 * d2 - d12)
                .iter()
                .fold(0.0_f64, |m, x| m.max(x.abs()));
            assert!(err < 1e-7, "homomorphism residual {err}");
        }
    }

    #[test]
    fn invariant_subspaces() {
        for j in [1u32, 2] {
            let rep = invariant_subspace_report(j).unwrap();
            for e in &rep.entries {
                assert_eq!(e.dim_plus_one, 1, "J = {j}, conjugate {}", e.conjugate);
            }
            assert!(rep.eigenvectors_pairwise_distinct, "J = {j}");
            assert!(
                rep.common_invariant_gap > 1e-4,
                "J = {j}: gap {}",
                rep.common_invariant_gap
            );
        }
    }

    #[test]
    fn fit_recovers_basis_members() {
        let pts = sample_points(60, 1.5, 31);
        // f = m11
        let samples: Vec<(SolvPoint, f64)> = pts
            .iter()
            .map(|p| (p.clone(), eval_fundamental(p).0))
            .collect();
        let fit = fit_expansion(&samples, 1).unwrap();
        assert!((fit.get((1, 0, 0)) - 1.0).abs() < 1e-9);
        for (m, c) in &fit.coefficients {
            if *m != (1, 0, 0) {
                assert!(c.abs() < 1e-9, "{m:?} = {c}");
            }
        }
        // f = 1
        let samples: Vec<(SolvPoint, f64)> = pts.iter().map(|p| (p.clone(), 1.0)).collect();
        let fit = fit_expansion(&samples, 1).unwrap();
        assert!((fit.get((0, 0, 0)) - 1.0).abs() < 1e-10);
        // f = e^{-2 w1} = m22^2
        let samples: Vec<(SolvPoint, f64)> = pts
            .iter()
            .map(|p| (p.clone(), (-2.0 * p.w[0]).exp()))
            .collect();
        let fit = fit_expansion(&samples, 2).unwrap();
        assert!((fit.get((0, 0, 2)) - 1.0).abs() < 1e-8);
        assert!(fit.holdout_error < 1e-8);
    }

    #[test]
    fn fit_rank_deficiency_detected() {
        let p = SolvPoint::plane(0.1, 0.2);
        let samples = vec![(p.clone(), 1.0), (p.clone(), 1.0), (p, 1.0)];
        assert!(fit_expansion(&samples, 2).is_err());
    }
}
