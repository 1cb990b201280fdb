//! Codimension-one separator hypersurfaces in the split orthogonal and
//! special-linear symmetric spaces: root-basis matrix construction, skew
//! and normal Gaussian coordinates, the oriented distance, and a
//! brute-force minimization oracle.

use crate::{Error, Result};
use nalgebra::DMatrix;
use serde::Serialize;

/// Ambient symmetric space of the construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AmbientSpace {
    /// Split orthogonal space of signature `(r, r + q)`.
    SoRq { r: usize, q: usize },
    /// Special-linear space of unimodular symmetric matrices.
    SlN { n: usize },
}

/// Solvable algebra of the ambient space, ordered so the distinguished
/// nilpotent generator (the transverse direction of the separator) comes
/// last.
#[derive(Debug, Clone)]
pub struct SolvAlgebra {
    pub space: AmbientSpace,
    pub matrix_dim: usize,
    pub names: Vec<String>,
    pub generators: Vec<DMatrix<f64>>,
    /// Metric normalization `1 / Tr(H1^2)` making the first Cartan
    /// direction unit speed.
    pub metric_scale: f64,
}

impl SolvAlgebra {
    pub fn dim(&self) -> usize {
        self.generators.len()
    }

    /// Dimension of the separator surface (all generators but the last).
    pub fn surface_dim(&self) -> usize {
        self.generators.len() - 1
    }

    pub fn e_y(&self) -> &DMatrix<f64> {
        self.generators.last().unwrap()
    }

    /// Symmetrized transverse generator `K_y = (E_y + E_y^T)/2`, signed so
    /// the skew/normal relation is `y = sinh(y~)`.
    pub fn k_y(&self) -> DMatrix<f64> {
        let e = self.e_y();
        (e + e.transpose()) * 0.5
    }
}

fn unit(n: usize, i: usize, j: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    m[(i, j)] = 1.0;
    m
}

/// Persymmetric-skew basis element `E_{ab} - E_{n-1-b, n-1-a}` of the
/// split orthogonal algebra with anti-diagonal invariant metric.
fn m_ab(n: usize, a: usize, b: usize) -> DMatrix<f64> {
    unit(n, a, b) - unit(n, n - 1 - b, n - 1 - a)
}

/// Builds the solvable algebra of the split orthogonal space with the
/// normalization `[E, E^T] = 2H` for short roots and `4`-fold Cartan
/// coefficients for long roots; the distinguished short root of the last
/// Cartan direction is placed last.
pub fn build_solv(r: usize, q: usize) -> Result<SolvAlgebra> {
    if r < 1 || q < 1 {
        return Err(Error::Unsupported("need r >= 1 and q >= 1".into()));
    }
    let n = 2 * r + q;
    let s2 = 2.0_f64.sqrt();
    let mut names = Vec::new();
    let mut generators = Vec::new();
    for i in 0..r {
        names.push(format!("H{}", i + 1));
        generators.push(unit(n, i, i) - unit(n, n - 1 - i, n - 1 - i));
    }
    for i in 0..r {
        for j in (i + 1)..r {
            names.push(format!("E{}+{}", i + 1, j + 1));
            generators.push(m_ab(n, i, n - 1 - j) * 2.0);
            names.push(format!("E{}-{}", i + 1, j + 1));
            generators.push(m_ab(n, i, j) * -2.0);
        }
    }
    // short roots; the pair (i = r-1, I = q-1) is the transverse direction
    let mut last: Option<(String, DMatrix<f64>)> = None;
    for i in 0..r {
        for cap in 0..q {
            let name = format!("E{}^{}", i + 1, cap + 1);
            let gen = m_ab(n, i, r + cap) * s2;
            if i == r - 1 && cap == q - 1 {
                last = Some((name, gen));
            } else {
                names.push(name);
                generators.push(gen);
            }
        }
    }
    let (name, gen) = last.unwrap();
    names.push(name);
    generators.push(gen);
    let metric_scale = 1.0 / (&generators[0] * &generators[0]).trace();
    let alg = SolvAlgebra {
        space: AmbientSpace::SoRq { r, q },
        matrix_dim: n,
        names,
        generators,
        metric_scale,
    };
    check_relations(&alg)?;
    Ok(alg)
}

/// Builds the solvable (upper-triangular traceless) algebra of the
/// special-linear space; the transverse generator is the single last
/// superdiagonal entry.
pub fn build_solv_sl(n: usize) -> Result<SolvAlgebra> {
    if n < 2 {
        return Err(Error::Unsupported("need n >= 2".into()));
    }
    let mut names = Vec::new();
    let mut generators = Vec::new();
    for i in 0..(n - 1) {
        let mut h = DMatrix::zeros(n, n);
        h[(i, i)] = 0.5;
        h[(i + 1, i + 1)] = -0.5;
        names.push(format!("H{}", i + 1));
        generators.push(h);
    }
    for i in 0..n {
        for j in (i + 1)..n {
            if (i, j) == (n - 2, n - 1) {
                continue;
            }
            names.push(format!("E{}{}", i + 1, j + 1));
            generators.push(unit(n, i, j));
        }
    }
    names.push(format!("E{}{}", n - 1, n));
    generators.push(unit(n, n - 2, n - 1));
    let metric_scale = 1.0 / (&generators[0] * &generators[0]).trace();
    Ok(SolvAlgebra {
        space: AmbientSpace::SlN { n },
        matrix_dim: n,
        names,
        generators,
        metric_scale,
    })
}

/// Verifies the weight relations `[H_i, E] = alpha(H_i) E` (half-integer
/// weights) and that each `[E, E^T]` lies in the Cartan span.
fn check_relations(alg: &SolvAlgebra) -> Result<()> {
    let r = match alg.space {
        AmbientSpace::SoRq { r, .. } => r,
        AmbientSpace::SlN { n } => n - 1,
    };
    for (idx, e) in alg.generators.iter().enumerate().skip(r) {
        for h in &alg.generators[..r] {
            let comm = h * e - e * h;
            // the commutator must be a scalar multiple of e
            let num = (comm.transpose() * e).trace();
            let den = (e.transpose() * e).trace();
            let lam = num / den;
            if (&comm - e * lam).amax() > 1e-12 {
                return Err(Error::RelationFailure {
                    relation: format!("weight of {}", alg.names[idx]),
                    residual: (&comm - e * lam).amax(),
                });
            }
        }
        let et = e.transpose();
        let c = e * &et - &et * e;
        // c must lie in the Cartan span, up to a compact paint component
        // supported on the middle diagonal block (present for q >= 2)
        let mut residual = c.clone();
        for h in &alg.generators[..r] {
            let coef = (c.transpose() * h).trace() / (h.transpose() * h).trace();
            residual -= h * coef;
        }
        let n = alg.matrix_dim;
        let mut worst = 0.0_f64;
        for a in 0..n {
            for b in 0..n {
                if a == b && a >= r && a < n - r {
                    // paint diagonal entries must pair antisymmetrically
                    let partner = n - 1 - a;
                    worst = worst.max((residual[(a, a)] + residual[(partner, partner)]).abs());
                } else if a != b {
                    worst = worst.max(residual[(a, b)].abs());
                } else {
                    worst = worst.max(residual[(a, a)].abs());
                }
            }
        }
        if worst > 1e-12 {
            return Err(Error::RelationFailure {
                relation: format!("[E, E^T] span for {}", alg.names[idx]),
                residual: worst,
            });
        }
    }
    Ok(())
}

/// Matrix exponential by scaling and squaring with a Taylor tail;
/// fine for the small dimensions used here.
pub fn expm(m: &DMatrix<f64>) -> DMatrix<f64> {
    let n = m.nrows();
    let norm = m.amax();
    let k = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as u32
    } else {
        0
    };
    let scaled = m / 2.0_f64.powi(k as i32);
    let mut term = DMatrix::<f64>::identity(n, n);
    let mut sum = term.clone();
    for i in 1..30 {
        term = &term * &scaled / i as f64;
        sum += &term;
        if term.amax() < 1e-17 {
            break;
        }
    }
    for _ in 0..k {
        sum = &sum * &sum;
    }
    sum
}

/// Gaussian coordinate kind: the transverse parameter multiplies the
/// nilpotent generator (skew) or its symmetrization (normal).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CoordKind {
    Skew,
    Normal,
}

/// Coset representative: the ordered product of surface exponentials times
/// the transverse exponential.
pub fn coset_rep(alg: &SolvAlgebra, kind: CoordKind, coords: &[f64]) -> Result<DMatrix<f64>> {
    if coords.len() != alg.dim() {
        return Err(Error::DimensionMismatch(coords.len(), alg.dim()));
    }
    let mut l = DMatrix::<f64>::identity(alg.matrix_dim, alg.matrix_dim);
    for (c, g) in coords[..alg.surface_dim()]
        .iter()
        .zip(&alg.generators[..alg.surface_dim()])
    {
        l = l * expm(&(g * *c));
    }
    let t = coords[alg.dim() - 1];
    let trans = match kind {
        CoordKind::Skew => expm(&(alg.e_y() * t)),
        CoordKind::Normal => expm(&(alg.k_y() * t)),
    };
    Ok(l * trans)
}

/// Symmetric-square image `M = L L^T` of a coset representative.
pub fn point_matrix(alg: &SolvAlgebra, kind: CoordKind, coords: &[f64]) -> Result<DMatrix<f64>> {
    let l = coset_rep(alg, kind, coords)?;
    Ok(&l * l.transpose())
}

/// Geodesic distance between two points given by their symmetric squares:
/// `d = sqrt(c sum_i ln^2 lambda_i(M1^{-1} M2)) / 2` with the per-space
/// metric scale `c`.
pub fn distance(alg: &SolvAlgebra, m1: &DMatrix<f64>, m2: &DMatrix<f64>) -> Result<f64> {
    let chol = m1
        .clone()
        .cholesky()
        .ok_or(Error::Singular("point matrix".into()))?;
    let li = chol
        .l()
        .try_inverse()
        .ok_or(Error::Singular("Cholesky factor".into()))?;
    let a = &li * m2 * li.transpose();
    let sym = (&a + a.transpose()) * 0.5;
    let eig = sym.symmetric_eigenvalues();
    let sum: f64 = eig.iter().map(|l| l.max(1e-300).ln().powi(2)).sum();
    Ok(0.5 * (alg.metric_scale * sum).sqrt())
}

/// Upper-triangular Cholesky factor `U` with `M = U U^T`, via the
/// anti-diagonal flip of the ordinary factorization.
pub fn upper_cholesky(m: &DMatrix<f64>) -> Result<DMatrix<f64>> {
    let n = m.nrows();
    let mut j = DMatrix::<f64>::zeros(n, n);
    for i in 0..n {
        j[(i, n - 1 - i)] = 1.0;
    }
    let flipped = &j * m * &j;
    let chol = flipped
        .cholesky()
        .ok_or(Error::Singular("upper Cholesky".into()))?;
    Ok(&j * chol.l() * &j)
}

/// Skew transverse coordinate of an arbitrary manifold point: the
/// upper-triangular solvable representative has
/// `y = U[a, b] / (s U[a, a])` at the slot of the distinguished generator.
pub fn skew_coordinate(alg: &SolvAlgebra, m: &DMatrix<f64>) -> Result<f64> {
    let u = upper_cholesky(m)?;
    match alg.space {
        AmbientSpace::SoRq { r, q } => {
            Ok(u[(r - 1, r + q - 1)] / (2.0_f64.sqrt() * u[(r - 1, r - 1)]))
        }
        AmbientSpace::SlN { n } => Ok(u[(n - 2, n - 1)] / u[(n - 2, n - 2)]),
    }
}

/// Oriented distance of a point with normal Gaussian transverse
/// coordinate `y~`: the coordinate itself.
pub fn separator_distance(y_tilde: f64) -> f64 {
    y_tilde
}

/// Oriented distance computed from an arbitrary point matrix through the
/// skew coordinate: `arcsinh(y)`.
pub fn oriented_distance(alg: &SolvAlgebra, m: &DMatrix<f64>) -> Result<f64> {
    Ok(skew_coordinate(alg, m)?.asinh())
}

/// Side of the separator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Side {
    Plus,
    Minus,
    On,
}

/// Binary partition by the sign of the normal transverse coordinate, with
/// a `1e-12` band counted as on the surface.
pub fn partition_side(y_tilde: f64) -> Side {
    if y_tilde.abs() < 1e-12 {
        Side::On
    } else if y_tilde > 0.0 {
        Side::Plus
    } else {
        Side::Minus
    }
}

/// Brute-force distance to the separator: coarse grid over the surface
/// coordinates centered at `center`, refined by shrinking rounds.
pub fn brute_force_surface_distance(
    alg: &SolvAlgebra,
    m: &DMatrix<f64>,
    center: &[f64],
    rounds: usize,
) -> Result<f64> {
    let dim = alg.surface_dim();
    let mut c = center.to_vec();
    let mut step = 0.4;
    let mut best = f64::INFINITY;
    for _ in 0..rounds {
        let mut best_pt = c.clone();
        let mut idx = vec![0usize; dim];
        loop {
            let mut pt = vec![0.0; alg.dim()];
            for (d, &i) in idx.iter().enumerate() {
                pt[d] = c[d] + step * (i as f64 - 1.0);
            }
            let mu = point_matrix(alg, CoordKind::Normal, &pt)?;
            let dist = distance(alg, &mu, m)?;
            if dist < best {
                best = dist;
                best_pt = pt[..dim].to_vec();
            }
            // odometer over {0,1,2}^dim
            let mut carry = 0;
            loop {
                if carry == dim {
                    break;
                }
                idx[carry] += 1;
                if idx[carry] == 3 {
                    idx[carry] = 0;
                    carry += 1;
                } else {
                    break;
                }
            }
            if carry == dim {
                break;
            }
        }
        c = best_pt;
        step /= 4.0;
    }
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn lcg(seed: u64) -> impl FnMut() -> f64 {
        let mut state = seed.max(1);
        move || {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            ((state >> 11) as f64 / (1u64 << 53) as f64 - 0.5) * 1.6
        }
    }

    #[test]
    fn algebra_dimensions() {
        let a = build_solv(1, 1).unwrap();
        assert_eq!(a.dim(), 2);
        assert_eq!(a.surface_dim(), 1);
        let a = build_solv(2, 1).unwrap();
        assert_eq!(a.dim(), 6);
        assert_eq!(a.surface_dim(), 5);
        // the surface span of the (2,1) case: two Cartans, both long
        // roots, and the first-slot short root
        let surface: Vec<&String> = a.names[..5].iter().collect();
        assert!(surface.iter().any(|n| *n == "H1"));
        assert!(surface.iter().any(|n| *n == "H2"));
        assert!(surface.iter().any(|n| *n == "E1+2"));
        assert!(surface.iter().any(|n| *n == "E1-2"));
        assert!(surface.iter().any(|n| *n == "E1^1"));
        assert_eq!(a.names[5], "E2^1");
        let a = build_solv_sl(3).unwrap();
        assert_eq!(a.dim(), 5);
        assert_eq!(a.names[4], "E23");
        assert!(build_solv(0, 1).is_err());
    }

    #[test]
    fn short_root_normalization() {
        // [E, E^T] = 2H in the rank-one case
        let a = build_solv(1, 1).unwrap();
        let e = a.e_y();
        let et = e.transpose();
        let comm = e * &et - &et * e;
        let want = &a.generators[0] * 2.0;
        assert!((comm - want).amax() < 1e-14);
    }

    #[test]
    fn transverse_normalization_gives_unit_speed() {
        // distance from the origin to exp(y~ K_y) is |y~| in every space
        for alg in [
            build_solv(1, 1).unwrap(),
            build_solv(2, 1).unwrap(),
            build_solv(1, 2).unwrap(),
            build_solv_sl(3).unwrap(),
        ] {
            let id = DMatrix::<f64>::identity(alg.matrix_dim, alg.matrix_dim);
            for yt in [0.25, 0.7, -0.5] {
                let mut coords = vec![0.0; alg.dim()];
                coords[alg.dim() - 1] = yt;
                let m = point_matrix(&alg, CoordKind::Normal, &coords).unwrap();
                let d = distance(&alg, &id, &m).unwrap();
                assert_abs_diff_eq!(d, yt.abs(), epsilon = 1e-12);
            }
        }
        // trace normalization of the symmetrized transverse generator in
        // the special-linear case: (|y~|/sqrt2) sqrt(Tr K^2) with
        // Tr K^2 = 1/2 rescales to |y~|/2 under the raw trace metric; the
        // per-space scale restores unit speed (checked above)
        let a = build_solv_sl(2).unwrap();
        let k = a.k_y();
        assert_abs_diff_eq!((&k * &k).trace(), 0.5, epsilon = 1e-15);
    }

    #[test]
    fn skew_normal_relation() {
        // y = sinh(y~) at matched points
        for alg in [build_solv(1, 1).unwrap(), build_solv_sl(3).unwrap()] {
            let mut rng = lcg(3);
            for _ in 0..6 {
                let mut coords: Vec<f64> = (0..alg.dim()).map(|_| rng()).collect();
                let yt = coords[alg.dim() - 1];
                let m = point_matrix(&alg, CoordKind::Normal, &coords).unwrap();
                let y = skew_coordinate(&alg, &m).unwrap();
                assert_abs_diff_eq!(y, yt.sinh(), epsilon = 1e-10);
                // and the skew representative reproduces the point matrix
                coords[alg.dim() - 1] = 0.0;
                let on_surface = point_matrix(&alg, CoordKind::Skew, &coords).unwrap();
                let chol_u = upper_cholesky(&on_surface).unwrap();
                // surface points have vanishing transverse slot
                let yy = skew_coordinate(&alg, &on_surface).unwrap();
                assert!(yy.abs() < 1e-12);
                let _ = chol_u;
            }
        }
    }

    #[test]
    fn oriented_distance_and_sides() {
        assert_eq!(partition_side(0.3), Side::Plus);
        assert_eq!(partition_side(-0.3), Side::Minus);
        assert_eq!(partition_side(0.0), Side::On);
        assert_eq!(separator_distance(0.0), 0.0);
        // y = sinh(1/2) maps back to 1/2
        let y = 0.5_f64.sinh();
        assert_abs_diff_eq!(y, 0.521_095_305_493_747_3, epsilon = 1e-14);
        assert_abs_diff_eq!(y.asinh(), 0.5, epsilon = 1e-14);
        // a path crossing the surface flips sign exactly once
        let mut flips = 0;
        let mut prev = partition_side(-1.0);
        for i in 1..=100 {
            let yt = -1.0 + 2.0 * i as f64 / 100.0;
            let side = partition_side(yt);
            if side != prev && side != Side::On && prev != Side::On {
                flips += 1;
            }
            if side != Side::On {
                prev = side;
            }
        }
        assert_eq!(flips, 1);
    }

    #[test]
    fn minimizer_is_the_foot_point() {
        // d(p, u0) = |y~| and the brute-force minimum does not beat it
        for alg in [build_solv(1, 1).unwrap(), build_solv(2, 1).unwrap()] {
            let mut rng = lcg(17);
            for _ in 0..4 {
                let coords: Vec<f64> = (0..alg.dim()).map(|_| rng() * 0.8).collect();
                let yt = coords[alg.dim() - 1];
                let m = point_matrix(&alg, CoordKind::Normal, &coords).unwrap();
                let mut foot = coords.clone();
                foot[alg.dim() - 1] = 0.0;
                let mu0 = point_matrix(&alg, CoordKind::Normal, &foot).unwrap();
                let d0 = distance(&alg, &mu0, &m).unwrap();
                assert_abs_diff_eq!(d0, yt.abs(), epsilon = 1e-10);
                let brute =
                    brute_force_surface_distance(&alg, &m, &coords[..alg.surface_dim()], 4)
                        .unwrap();
                assert!(brute >= d0 - 1e-9);
                assert!(brute - d0.abs() < 1e-3, "brute {brute} vs {d0}");
            }
        }
    }

    #[test]
    fn geodesic_has_constant_surface_coordinates() {
        let alg = build_solv(1, 1).unwrap();
        let mut coords = vec![0.3, 0.8];
        let yt = coords[1];
        let mut foot = coords.clone();
        foot[1] = 0.0;
        let mu0 = point_matrix(&alg, CoordKind::Normal, &foot).unwrap();
        for s in [0.25, 0.5, 0.75] {
            coords[1] = s * yt;
            let ms = point_matrix(&alg, CoordKind::Normal, &coords).unwrap();
            let d = distance(&alg, &mu0, &ms).unwrap();
            assert!((d - s * yt.abs()).abs() < 1e-6, "s = {s}: {d}");
        }
    }

    #[test]
    fn isometric_invariance_of_transverse_coordinate() {
        // left multiplication by surface-group elements preserves the skew
        // coordinate and hence the distance to the surface
        for alg in [build_solv(1, 1).unwrap(), build_solv(2, 1).unwrap()] {
            let mut rng = lcg(29);
            for _ in 0..8 {
                let coords: Vec<f64> = (0..alg.dim()).map(|_| rng()).collect();
                let m = point_matrix(&alg, CoordKind::Normal, &coords).unwrap();
                let y = skew_coordinate(&alg, &m).unwrap();
                // random surface translation
                let mut h = DMatrix::<f64>::identity(alg.matrix_dim, alg.matrix_dim);
                for g in &alg.generators[..alg.surface_dim()] {
                    h = h * expm(&(g * (0.5 * rng())));
                }
                let moved = &h * &m * h.transpose();
                let y2 = skew_coordinate(&alg, &moved).unwrap();
                assert_abs_diff_eq!(y, y2, epsilon = 1e-8);
                assert_abs_diff_eq!(
                    oriented_distance(&alg, &m).unwrap(),
                    oriented_distance(&alg, &moved).unwrap(),
                    epsilon = 1e-8
                );
            }
        }
    }

    #[test]
    fn codimension_is_one() {
        for (r, q) in [(1, 1), (1, 2), (2, 1), (2, 2)] {
            let alg = build_solv(r, q).unwrap();
            assert_eq!(alg.dim() - alg.surface_dim(), 1);
        }
        for n in [2, 3, 4] {
            let alg = build_solv_sl(n).unwrap();
            assert_eq!(alg.dim() - alg.surface_dim(), 1);
        }
    }
}
