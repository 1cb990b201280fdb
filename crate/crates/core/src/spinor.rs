//! Clifford algebras and spinor machinery: the two gamma bases, the
//! commutator generators with their symplectic invariants, the
//! vector/spinor double cover, the solvable spinor coset and its split
//! projection, and the rank-one generalization to higher paint dimension.

use crate::{Error, Result};
use nalgebra::{DMatrix, Matrix2, Matrix4};

/// A gamma basis: `d x d` matrices with `{G_a, G_b} = 2 eta_ab 1`.
#[derive(Debug, Clone)]
pub struct CliffordBasis {
    pub gammas: Vec<Matrix4<f64>>,
    pub metric: DMatrix<f64>,
}

impl CliffordBasis {
    /// Largest anticommutator residual over all pairs.
    pub fn clifford_residual(&self) -> f64 {
        let n = self.gammas.len();
        let id = Matrix4::<f64>::identity();
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                let anti = self.gammas[a] * self.gammas[b] + self.gammas[b] * self.gammas[a];
                let want = id * (2.0 * self.metric[(a, b)]);
                worst = worst.max((anti - want).iter().fold(0.0_f64, |m, x| m.max(x.abs())));
            }
        }
        worst
    }
}

fn mat4_norm(m: &Matrix4<f64>) -> f64 {
    m.iter().fold(0.0_f64, |acc, x| acc.max(x.abs()))
}

/// The five-gamma basis adapted to the ten-generator symplectic algebra;
/// metric anti-diagonal with a unit middle entry.
pub fn build_sp4_basis() -> Result<CliffordBasis> {
    let s2 = 2.0_f64.sqrt();
    let mut g1 = Matrix4::zeros();
    g1[(0, 3)] = s2;
    g1[(1, 2)] = -s2;
    let mut g2 = Matrix4::zeros();
    g2[(0, 1)] = s2;
    g2[(3, 2)] = s2;
    let g3 = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, 1.0, -1.0));
    let mut g4 = Matrix4::zeros();
    g4[(1, 0)] = s2;
    g4[(2, 3)] = s2;
    let mut g5 = Matrix4::zeros();
    g5[(2, 1)] = -s2;
    g5[(3, 0)] = s2;
    let mut metric = DMatrix::<f64>::zeros(5, 5);
    for i in 0..5 {
        metric[(i, 4 - i)] = 1.0;
    }
    let basis = CliffordBasis {
        gammas: vec![g1, g2, g3, g4, g5],
        metric,
    };
    let res = basis.clifford_residual();
    if res > 1e-12 {
        return Err(Error::RelationFailure {
            relation: "five-gamma Clifford algebra".into(),
            residual: res,
        });
    }
    Ok(basis)
}

/// The four-gamma basis adapted to the six-generator Lorentz algebra.
///
/// The Gram matrix realized by these matrices couples the first and last
/// elements off-diagonally and the middle two diagonally
/// (`eta_22 = eta_33 = 1`), which is what all double-cover identities
/// require.
pub fn build_spin13_basis() -> Result<CliffordBasis> {
    let s2 = 2.0_f64.sqrt();
    let mut s1 = Matrix4::zeros();
    s1[(1, 0)] = -s2;
    s1[(3, 2)] = s2;
    let s2m = Matrix4::from_diagonal(&nalgebra::Vector4::new(1.0, -1.0, -1.0, 1.0));
    let mut s3 = Matrix4::zeros();
    s3[(0, 2)] = -1.0;
    s3[(1, 3)] = -1.0;
    s3[(2, 0)] = -1.0;
    s3[(3, 1)] = -1.0;
    let mut s4 = Matrix4::zeros();
    s4[(0, 1)] = -s2;
    s4[(2, 3)] = s2;
    let mut metric = DMatrix::<f64>::zeros(4, 4);
    metric[(0, 3)] = 1.0;
    metric[(3, 0)] = 1.0;
    metric[(1, 1)] = 1.0;
    metric[(2, 2)] = 1.0;
    let basis = CliffordBasis {
        gammas: vec![s1, s2m, s3, s4],
        metric,
    };
    let res = basis.clifford_residual();
    if res > 1e-12 {
        return Err(Error::RelationFailure {
            relation: "four-gamma Clifford algebra".into(),
            residual: res,
        });
    }
    Ok(basis)
}

/// Commutator generators `J_ab = [G_a, G_b]/4` of a gamma basis, together
/// with an antisymmetric invariant `C` (`C J + J^T C = 0`, `C^2 = -1`).
#[derive(Debug, Clone)]
pub struct SpinAlgebra {
    pub generators: Vec<Matrix4<f64>>,
    pub invariant: Matrix4<f64>,
}

impl SpinAlgebra {
    fn from_basis(basis: &CliffordBasis, invariant: Matrix4<f64>, name: &str) -> Result<Self> {
        let n = basis.gammas.len();
        let mut generators = Vec::new();
        for a in 0..n {
            for b in (a + 1)..n {
                generators
                    .push((basis.gammas[a] * basis.gammas[b] - basis.gammas[b] * basis.gammas[a]) / 4.0);
            }
        }
        let alg = SpinAlgebra {
            generators,
            invariant,
        };
        let res = alg.symplectic_residual();
        if res > 1e-12 {
            return Err(Error::RelationFailure {
                relation: format!("symplectic condition of {name}"),
                residual: res,
            });
        }
        let sq = mat4_norm(&(invariant * invariant + Matrix4::identity()));
        if sq > 1e-12 {
            return Err(Error::RelationFailure {
                relation: format!("{name} invariant squares to -1"),
                residual: sq,
            });
        }
        Ok(alg)
    }

    /// Largest residual of `C J + J^T C` over the generators.
    pub fn symplectic_residual(&self) -> f64 {
        self.generators
            .iter()
            .map(|j| mat4_norm(&(self.invariant * j + j.transpose() * self.invariant)))
            .fold(0.0, f64::max)
    }

    /// Rank of the generator span (as vectors in dimension sixteen).
    pub fn span_rank(&self) -> usize {
        let rows = self.generators.len();
        let mut m = DMatrix::<f64>::zeros(rows, 16);
        for (r, j) in self.generators.iter().enumerate() {
            for (k, v) in j.iter().enumerate() {
                m[(r, k)] = *v;
            }
        }
        m.rank(1e-10)
    }
}

/// The symplectic invariant of the five-gamma algebra.
pub fn sp4_invariant() -> Matrix4<f64> {
    Matrix4::new(
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 1.0, //
        -1.0, 0.0, 0.0, 0.0, //
        0.0, -1.0, 0.0, 0.0,
    )
}

/// The symplectic invariant of the four-gamma algebra.
pub fn spin13_invariant() -> Matrix4<f64> {
    let q = 1.0 / 2.0_f64.sqrt();
    Matrix4::new(
        0.0, -q, 0.0, q, //
        q, 0.0, -q, 0.0, //
        0.0, q, 0.0, q, //
        -q, 0.0, -q, 0.0,
    )
}

/// Ten-generator symplectic algebra of the five-gamma basis.
pub fn sp4_algebra() -> Result<SpinAlgebra> {
    SpinAlgebra::from_basis(&build_sp4_basis()?, sp4_invariant(), "ten-generator algebra")
}

/// Six-generator Lorentz algebra of the four-gamma basis.
pub fn spin13_algebra() -> Result<SpinAlgebra> {
    SpinAlgebra::from_basis(
        &build_spin13_basis()?,
        spin13_invariant(),
        "six-generator algebra",
    )
}

/// Orthogonal conversion matrix between the two symplectic frames;
/// `Q Q^T = 1` and `Q Ct Q^T = -C` (the transported invariant matches `C`
/// up to the recorded sign).
pub fn conversion_matrix() -> Matrix4<f64> {
    let s2 = 2.0_f64.sqrt();
    let q = 2.0_f64.powf(-0.75);
    let ap = (1.0 + s2).sqrt();
    let am = (s2 - 1.0).sqrt();
    Matrix4::new(
        -ap * q, 0.0, q / ap, 0.0, //
        0.0, am * q, 0.0, q / am, //
        0.0, -ap * q, 0.0, q / ap, //
        am * q, 0.0, q / am, 0.0,
    )
}

/// Vector image of a spinor element through the trace formula
/// `O_a^b[S] = Tr(S^{-1} Sigma_a S Sigma_c) eta^{cb} / 4`.
pub fn double_cover_map(s: &Matrix4<f64>) -> Result<Matrix4<f64>> {
    let basis = build_spin13_basis()?;
    let si = s.try_inverse().ok_or(Error::Singular("double cover".into()))?;
    let mut o = Matrix4::zeros();
    for a in 0..4 {
        for b in 0..4 {
            let mut acc = 0.0;
            for c in 0..4 {
                let eta = basis.metric[(c, b)];
                if eta == 0.0 {
                    continue;
                }
                acc += 0.25 * (si * basis.gammas[a] * s * basis.gammas[c]).trace() * eta;
            }
            o[(a, b)] = acc;
        }
    }
    Ok(o)
}

/// The three solvable spinor generators.
pub fn solvable_triple() -> [Matrix4<f64>; 3] {
    let t1 = Matrix4::from_diagonal(&nalgebra::Vector4::new(0.5, -0.5, 0.5, -0.5));
    let mut t2 = Matrix4::zeros();
    t2[(0, 1)] = 0.5;
    t2[(2, 3)] = 0.5;
    let mut t3 = Matrix4::zeros();
    t3[(0, 3)] = 0.5;
    t3[(2, 1)] = -0.5;
    [t1, t2, t3]
}

/// Solvable spinor coset representative
/// `exp(w1 T1) exp(w2 T2) exp(w3 T3)` (the last two exponentials are exact
/// degree-one polynomials of nilpotent generators).
pub fn spinor_coset(w1: f64, w2: f64, w3: f64) -> Matrix4<f64> {
    let [t1, t2, t3] = solvable_triple();
    let e1 = Matrix4::from_diagonal(&nalgebra::Vector4::new(
        (0.5 * w1).exp(),
        (-0.5 * w1).exp(),
        (0.5 * w1).exp(),
        (-0.5 * w1).exp(),
    ));
    let _ = t1;
    let e2 = Matrix4::identity() + t2 * w2;
    let e3 = Matrix4::identity() + t3 * w3;
    e1 * e2 * e3
}

/// The tabulated upper-triangular vector representative matching
/// `double_cover_map(spinor_coset(..))`.
pub fn vector_coset(w1: f64, w2: f64, w3: f64) -> Matrix4<f64> {
    let s2 = 2.0_f64.sqrt();
    let e = w1.exp();
    Matrix4::new(
        e,
        e * w2 / s2,
        e * w3 / s2,
        -0.25 * e * (w2 * w2 + w3 * w3),
        0.0,
        1.0,
        0.0,
        -w2 / s2,
        0.0,
        0.0,
        1.0,
        -w3 / s2,
        0.0,
        0.0,
        0.0,
        (-w1).exp(),
    )
}

/// Split projection of the spinor coset: at `w3 = 0` the matrix is block
/// diagonal with two identical `2x2` triangular blocks, and
/// `M = L L^T` block-diagonalizes accordingly.
pub fn ts_project(w1: f64, w2: f64) -> (Matrix4<f64>, Matrix2<f64>) {
    let l = spinor_coset(w1, w2, 0.0);
    let block = Matrix2::new(
        (0.5 * w1).exp(),
        0.5 * (0.5 * w1).exp() * w2,
        0.0,
        (-0.5 * w1).exp(),
    );
    (l, block)
}

/// Residual of the block-diagonal claim for the split projection of the
/// symmetric square `M = L L^T`: off-blocks vanish and the two diagonal
/// blocks agree with the plane fundamental matrix.
pub fn ts_block_residual(w1: f64, w2: f64) -> f64 {
    let (l, block) = ts_project(w1, w2);
    let m = l * l.transpose();
    let mb = block * block.transpose();
    let mut worst = 0.0_f64;
    for i in 0..2 {
        for j in 0..2 {
            worst = worst.max((m[(i, j)] - mb[(i, j)]).abs());
            worst = worst.max((m[(i + 2, j + 2)] - mb[(i, j)]).abs());
            worst = worst.max(m[(i, j + 2)].abs());
            worst = worst.max(m[(i + 2, j)].abs());
        }
    }
    worst
}

/// The six first-order generators of the triangular ten-dimensional coset
/// parametrization (used only by the non-embedding rank check).
pub fn sp4_solvable_basis() -> [Matrix4<f64>; 6] {
    let s2 = 2.0_f64.sqrt();
    let t1 = Matrix4::from_diagonal(&nalgebra::Vector4::new(-0.5, -0.5, 0.5, 0.5));
    let t2 = Matrix4::from_diagonal(&nalgebra::Vector4::new(-0.5, 0.5, 0.5, -0.5));
    let mut t3 = Matrix4::zeros();
    t3[(1, 3)] = 1.0 / s2;
    let mut t4 = Matrix4::zeros();
    t4[(0, 2)] = -s2 / 2.0;
    let mut t5 = Matrix4::zeros();
    t5[(1, 2)] = 0.5;
    t5[(0, 3)] = 0.5;
    let mut t6 = Matrix4::zeros();
    t6[(0, 1)] = 0.5;
    t6[(3, 2)] = -0.5;
    [t1, t2, t3, t4, t5, t6]
}

/// Rank facts behind the non-embedding statement: the three solvable
/// spinor generators do not lie in the span of the six triangular
/// generators of the larger coset.
pub fn solvable_embedding_ranks() -> (usize, Vec<bool>) {
    let base = sp4_solvable_basis();
    let mut m = DMatrix::<f64>::zeros(6, 16);
    for (r, t) in base.iter().enumerate() {
        for (k, v) in t.iter().enumerate() {
            m[(r, k)] = *v;
        }
    }
    let base_rank = m.rank(1e-10);
    let contained: Vec<bool> = solvable_triple()
        .iter()
        .map(|t| {
            let mut aug = DMatrix::<f64>::zeros(7, 16);
            aug.view_mut((0, 0), (6, 16)).copy_from(&m);
            for (k, v) in t.iter().enumerate() {
                aug[(6, k)] = *v;
            }
            aug.rank(1e-10) == base_rank
        })
        .collect();
    (base_rank, contained)
}

// ---------------------------------------------------------------------------
// rank-one family with paint dimension q
// ---------------------------------------------------------------------------

fn kron(a: &DMatrix<f64>, b: &DMatrix<f64>) -> DMatrix<f64> {
    a.kronecker(b)
}

fn sigma1() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0])
}

fn sigma3() -> DMatrix<f64> {
    DMatrix::from_row_slice(2, 2, &[1.0, 0.0, 0.0, -1.0])
}

/// `sigma2 x sigma2`, a real symmetric matrix.
fn sigma22() -> DMatrix<f64> {
    DMatrix::from_row_slice(
        4,
        4,
        &[
            0.0, 0.0, 0.0, -1.0, //
            0.0, 0.0, 1.0, 0.0, //
            0.0, 1.0, 0.0, 0.0, //
            -1.0, 0.0, 0.0, 0.0,
        ],
    )
}

/// The rank-one solvable construction for paint dimension `q` in `{2, 3}`
/// with real symmetric gamma choices of size `d = 2` resp. `d = 4`.
#[derive(Debug, Clone)]
pub struct SpinRankOne {
    pub q: usize,
    pub d: usize,
    /// `H = diag(1, -1)/2 (x) 1_d` with `[H, E_i] = E_i`.
    pub cartan: DMatrix<f64>,
    /// Shift generators with `[E_i, E_i^T] = 2 H`.
    pub shifts: Vec<DMatrix<f64>>,
    pub gammas: Vec<DMatrix<f64>>,
}

/// Builds the rank-one generators for `q = 2` or `q = 3` and verifies the
/// bracket normalization.
pub fn build_spin_1q(q: usize) -> Result<SpinRankOne> {
    let gammas: Vec<DMatrix<f64>> = match q {
        2 => vec![sigma1(), sigma3()],
        3 => {
            let id2 = DMatrix::<f64>::identity(2, 2);
            vec![
                kron(&sigma1(), &id2),
                kron(&sigma3(), &id2),
                sigma22(),
            ]
        }
        _ => return Err(Error::Unsupported(format!("paint dimension {q}"))),
    };
    let d = gammas[0].nrows();
    let idd = DMatrix::<f64>::identity(d, d);
    // gamma relations: symmetric, squaring to one, pairwise anticommuting
    for (i, g) in gammas.iter().enumerate() {
        if (g - g.transpose()).amax() > 1e-14 {
            return Err(Error::RelationFailure {
                relation: format!("gamma_{i} symmetric"),
                residual: (g - g.transpose()).amax(),
            });
        }
        if (g * g - &idd).amax() > 1e-14 {
            return Err(Error::RelationFailure {
                relation: format!("gamma_{i} squares to one"),
                residual: (g * g - &idd).amax(),
            });
        }
    }
    let half = DMatrix::from_row_slice(2, 2, &[0.5, 0.0, 0.0, -0.5]);
    let cartan = kron(&half, &idd);
    let plus = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 0.0, 0.0]);
    let shifts: Vec<DMatrix<f64>> = gammas.iter().map(|g| -kron(&plus, g)).collect();
    for (i, e) in shifts.iter().enumerate() {
        let comm = &cartan * e - e * &cartan;
        if (&comm - e).amax() > 1e-14 {
            return Err(Error::RelationFailure {
                relation: format!("[H, E_{i}] = E_{i}"),
                residual: (&comm - e).amax(),
            });
        }
        let et = e.transpose();
        let comm = e * &et - &et * e;
        if (&comm - &cartan * 2.0).amax() > 1e-14 {
            return Err(Error::RelationFailure {
                relation: format!("[E_{i}, E_{i}^T] = 2H"),
                residual: (&comm - &cartan * 2.0).amax(),
            });
        }
    }
    Ok(SpinRankOne {
        q,
        d,
        cartan,
        shifts,
        gammas,
    })
}

impl SpinRankOne {
    /// Coset representative `exp(xi H) exp(zeta^i E_i)`; the shift part is
    /// an exact polynomial (the shifts are nilpotent of order two).
    pub fn coset(&self, xi: f64, zeta: &[f64]) -> Result<DMatrix<f64>> {
        if zeta.len() != self.q {
            return Err(Error::DimensionMismatch(zeta.len(), self.q));
        }
        let n = 2 * self.d;
        let mut diag = DMatrix::<f64>::identity(n, n);
        for i in 0..self.d {
            diag[(i, i)] = (0.5 * xi).exp();
            diag[(self.d + i, self.d + i)] = (-0.5 * xi).exp();
        }
        let mut nil = DMatrix::<f64>::identity(n, n);
        for (z, e) in zeta.iter().zip(&self.shifts) {
            nil += e * *z;
        }
        Ok(diag * nil)
    }

    /// Symmetric square `M = L L^T`, the block form with
    /// `e^xi (1 + |zeta|^2)` upper block and `-zeta^i gamma_i` off blocks.
    pub fn symmetric_square(&self, xi: f64, zeta: &[f64]) -> Result<DMatrix<f64>> {
        let l = self.coset(xi, zeta)?;
        Ok(&l * l.transpose())
    }

    /// Exact recovery of `(xi, zeta)` from `M` through the trace
    /// projections.
    pub fn recover(&self, m: &DMatrix<f64>) -> (f64, Vec<f64>) {
        let d = self.d;
        let n = 2 * d;
        // e^{-xi} = Tr[((1 - sigma3) x 1) M] / (2d)
        let mut tr = 0.0;
        for i in 0..d {
            tr += 2.0 * m[(d + i, d + i)];
        }
        let xi = -(tr / (2.0 * d as f64)).ln();
        // zeta_i = -Tr[(sigma+ x gamma_i) M] / d: the plus block picks the
        // lower-left of M
        let zeta = self
            .gammas
            .iter()
            .map(|g| {
                let mut acc = 0.0;
                for r in 0..d {
                    for c in 0..d {
                        acc += g[(r, c)] * m[(d + c, r)];
                    }
                }
                -acc / d as f64
            })
            .collect();
        let _ = n;
        (xi, zeta)
    }

    /// Off-block of the symmetric square: `-zeta^i gamma_i`.
    pub fn off_block(&self, zeta: &[f64]) -> DMatrix<f64> {
        let mut out = DMatrix::<f64>::zeros(self.d, self.d);
        for (z, g) in zeta.iter().zip(&self.gammas) {
            out -= g * *z;
        }
        out
    }
}

/// Hermitian variant for `q = 3` with the three complex `2x2` gamma
/// matrices: `M = L L^dagger` keeps the block form.
pub fn hermitian_variant_residual(xi: f64, zeta: &[f64; 3]) -> f64 {
    use num_complex::Complex64 as C;
    let i = C::new(0.0, 1.0);
    let zero = C::new(0.0, 0.0);
    let one = C::new(1.0, 0.0);
    let g: [[[C; 2]; 2]; 3] = [
        [[zero, one], [one, zero]],
        [[zero, -i], [i, zero]],
        [[one, zero], [zero, -one]],
    ];
    // L = diag(e^{xi/2} 1, e^{-xi/2} 1) * [[1, -zeta.g], [0, 1]]
    let zg: [[C; 2]; 2] = {
        let mut out = [[zero; 2]; 2];
        for (k, z) in zeta.iter().enumerate() {
            for r in 0..2 {
                for c in 0..2 {
                    out[r][c] += g[k][r][c] * C::new(*z, 0.0);
                }
            }
        }
        out
    };
    let ep = C::new((0.5 * xi).exp(), 0.0);
    let em = C::new((-0.5 * xi).exp(), 0.0);
    let mut l = [[zero; 4]; 4];
    for r in 0..2 {
        l[r][r] = ep;
        l[r + 2][r + 2] = em;
        for c in 0..2 {
            l[r][c + 2] = -ep * zg[r][c];
        }
    }
    // M = L L^dagger
    let mut m = [[zero; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            let mut acc = zero;
            for k in 0..4 {
                acc += l[r][k] * l[c][k].conj();
            }
            m[r][c] = acc;
        }
    }
    let n2: f64 = zeta.iter().map(|z| z * z).sum();
    let upper = C::new(xi.exp() * (1.0 + n2), 0.0);
    let lower = C::new((-xi).exp(), 0.0);
    let mut worst = 0.0_f64;
    for r in 0..2 {
        for c in 0..2 {
            let want_upper = if r == c { upper } else { zero };
            worst = worst.max((m[r][c] - want_upper).norm());
            let want_lower = if r == c { lower } else { zero };
            worst = worst.max((m[r + 2][c + 2] - want_lower).norm());
            // off block: -zeta.g (hermitian)
            worst = worst.max((m[r][c + 2] + zg[r][c] * C::new((0.0_f64).exp(), 0.0)).norm());
        }
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn clifford_relations_exact() {
        let sp4 = build_sp4_basis().unwrap();
        assert!(sp4.clifford_residual() < 1e-12);
        // {G1, G5} = 2 (anti-diagonal pairing)
        let anti = sp4.gammas[0] * sp4.gammas[4] + sp4.gammas[4] * sp4.gammas[0];
        assert!(mat4_norm(&(anti - Matrix4::identity() * 2.0)) < 1e-12);
        let s13 = build_spin13_basis().unwrap();
        assert!(s13.clifford_residual() < 1e-12);
        // the middle elements square to one: {S2, S2} = 2
        let anti = s13.gammas[1] * s13.gammas[1] * 2.0;
        assert!(mat4_norm(&(anti - Matrix4::identity() * 2.0)) < 1e-12);
    }

    #[test]
    fn symplectic_invariants() {
        let sp4 = sp4_algebra().unwrap();
        assert_eq!(sp4.generators.len(), 10);
        assert!(sp4.symplectic_residual() < 1e-12);
        assert_eq!(sp4.span_rank(), 10, "complete basis of the algebra");
        let s13 = spin13_algebra().unwrap();
        assert_eq!(s13.generators.len(), 6);
        assert!(s13.symplectic_residual() < 1e-12);
    }

    #[test]
    fn conversion_transport() {
        let q = conversion_matrix();
        assert!(mat4_norm(&(q * q.transpose() - Matrix4::identity())) < 1e-12);
        let transported = q * spin13_invariant() * q.transpose();
        // the transport lands on the first invariant with a flipped sign
        assert!(mat4_norm(&(transported + sp4_invariant())) < 1e-12);
    }

    #[test]
    fn double_cover_properties() {
        let id = Matrix4::identity();
        assert!(mat4_norm(&(double_cover_map(&id).unwrap() - id)) < 1e-12);
        assert!(mat4_norm(&(double_cover_map(&(-id)).unwrap() - id)) < 1e-12);
        // image of the solvable coset equals the triangular table
        let (w1, w2, w3) = (0.7, -0.3, 0.45);
        let l = spinor_coset(w1, w2, w3);
        let lv = double_cover_map(&l).unwrap();
        assert!(mat4_norm(&(lv - vector_coset(w1, w2, w3))) < 1e-12);
        // homomorphism on random solvable pairs
        let mut state = 77_u64;
        let mut rng = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 1.6
        };
        for _ in 0..20 {
            let a = spinor_coset(rng(), rng(), rng());
            let b = spinor_coset(rng(), rng(), rng());
            let lhs = double_cover_map(&(a * b)).unwrap();
            let rhs = double_cover_map(&a).unwrap() * double_cover_map(&b).unwrap();
            assert!(mat4_norm(&(lhs - rhs)) < 1e-10);
        }
        assert!(double_cover_map(&Matrix4::zeros()).is_err());
    }

    #[test]
    fn split_projection_blocks() {
        // zero coordinates give the identity
        assert!(mat4_norm(&(spinor_coset(0.0, 0.0, 0.0) - Matrix4::identity())) < 1e-15);
        // tabulated block at (1, 0.5)
        let (_, block) = ts_project(1.0, 0.5);
        assert_abs_diff_eq!(block[(0, 0)], 0.5_f64.exp(), epsilon = 1e-14);
        assert_abs_diff_eq!(block[(0, 1)], 0.5_f64.exp() / 4.0, epsilon = 1e-14);
        assert_abs_diff_eq!(block[(1, 1)], (-0.5_f64).exp(), epsilon = 1e-14);
        // block equality of the symmetric square on random pairs
        let mut state = 5_u64;
        let mut rng = move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 2.0
        };
        for _ in 0..50 {
            assert!(ts_block_residual(rng(), rng()) < 1e-12);
        }
    }

    #[test]
    fn solvable_triple_closes_and_does_not_embed() {
        let [t1, t2, t3] = solvable_triple();
        // closure: [T1, T2] = T2, [T1, T3] = T3, [T2, T3] = 0
        assert!(mat4_norm(&((t1 * t2 - t2 * t1) - t2)) < 1e-15);
        assert!(mat4_norm(&((t1 * t3 - t3 * t1) - t3)) < 1e-15);
        assert!(mat4_norm(&(t2 * t3 - t3 * t2)) < 1e-15);
        let (rank, contained) = solvable_embedding_ranks();
        assert_eq!(rank, 6);
        assert!(contained.iter().all(|c| !c), "no spinor generator embeds");
    }

    #[test]
    fn rank_one_family() {
        for q in [2usize, 3] {
            let alg = build_spin_1q(q).unwrap();
            assert_eq!(alg.d, if q == 2 { 2 } else { 4 });
            // zero coordinates give the identity
            let m = alg.symmetric_square(0.0, &vec![0.0; q]).unwrap();
            assert!((0..2 * alg.d).all(|i| (m[(i, i)] - 1.0).abs() < 1e-14));
            // block form and exact recovery
            let zeta: Vec<f64> = (0..q).map(|i| 0.3 + 0.1 * i as f64).collect();
            let xi = 0.8;
            let m = alg.symmetric_square(xi, &zeta).unwrap();
            let n2: f64 = zeta.iter().map(|z| z * z).sum();
            for i in 0..alg.d {
                assert_abs_diff_eq!(m[(i, i)], xi.exp() * (1.0 + n2), epsilon = 1e-12);
                assert_abs_diff_eq!(m[(alg.d + i, alg.d + i)], (-xi).exp(), epsilon = 1e-12);
            }
            let off = alg.off_block(&zeta);
            for r in 0..alg.d {
                for c in 0..alg.d {
                    assert_abs_diff_eq!(m[(r, alg.d + c)], off[(r, c)], epsilon = 1e-12);
                }
            }
            let (xi2, zeta2) = alg.recover(&m);
            assert_abs_diff_eq!(xi2, xi, epsilon = 1e-12);
            for (a, b) in zeta.iter().zip(&zeta2) {
                assert_abs_diff_eq!(a, b, epsilon = 1e-12);
            }
        }
        assert!(build_spin_1q(5).is_err());
    }

    #[test]
    fn q2_off_block_pattern() {
        let alg = build_spin_1q(2).unwrap();
        let off = alg.off_block(&[0.3, 0.4]);
        // -z1 s1 - z2 s3 = [[-z2, -z1], [-z1, z2]]
        assert_abs_diff_eq!(off[(0, 0)], -0.4, epsilon = 1e-15);
        assert_abs_diff_eq!(off[(0, 1)], -0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(off[(1, 0)], -0.3, epsilon = 1e-15);
        assert_abs_diff_eq!(off[(1, 1)], 0.4, epsilon = 1e-15);
    }

    #[test]
    fn hermitian_variant() {
        assert!(hermitian_variant_residual(0.6, &[0.2, -0.4, 0.7]) < 1e-12);
    }
}
