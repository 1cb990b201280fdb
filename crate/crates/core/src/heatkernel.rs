//! Radial Laplace eigenfunctions through the hypergeometric series, the
//! Green function of the shifted Laplacian, the closed-form heat kernel of
//! three-dimensional hyperbolic space, spectral heat-kernel sums, weighted
//! point-pair kernels, and a diffusion simulator with the short-time
//! distance asymptotics as a statistical check.

use crate::models::{self, SolvPoint};
use crate::numerics::{adaptive_quadrature, hyp2f1, hyp2f1_deriv};
use crate::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Parameters of the radial Green function on `H^{2+k}`.
#[derive(Debug, Clone, Copy)]
pub struct GreenParams {
    pub k: u32,
    /// Laplace eigenvalue (`lambda^2`).
    pub lambda2: f64,
    /// Radial coordinate, at least `rho_min`.
    pub rho: f64,
}

/// Default lower cutoff of the radial coordinate.
pub const RHO_MIN: f64 = 1e-4;

const SERIES_TOL: f64 = 1e-13;

fn indices(k: u32, lambda2: f64) -> (f64, f64, f64, f64) {
    let kf = k as f64;
    let r = (kf * kf + 2.0 * kf + 4.0 * lambda2 + 1.0).sqrt();
    // exponent and hypergeometric parameters of the decaying branch
    let s = 0.25 * (r + kf + 1.0);
    let a = 0.25 * kf + 0.25 * r + 0.25;
    let b = 0.25 * kf + 0.25 * r + 0.75;
    let c = 0.5 * r + 1.0;
    (s, a, b, c)
}

/// The decaying radial solution (the Green function of
/// `Laplacian - lambda^2`): `z^s 2F1(a, b; c; z)` at `z = sech^2(rho)`.
pub fn green_h2(lambda2: f64, k: u32, rho: f64) -> Result<f64> {
    if lambda2 <= 0.0 {
        return Err(Error::Domain("eigenvalue must be positive".into()));
    }
    if rho < RHO_MIN {
        return Err(Error::Domain(format!("rho below the cutoff {RHO_MIN}")));
    }
    let z = 1.0 / rho.cosh().powi(2);
    let (s, a, b, c) = indices(k, lambda2);
    Ok(z.powf(s) * hyp2f1(a, b, c, z, SERIES_TOL)?)
}

/// The growing companion solution `z^{s'} 2F1(a', b'; c'; z)` with the
/// opposite root sign; used only by the branch-selection checks.
pub fn growing_h1(lambda2: f64, k: u32, rho: f64) -> Result<f64> {
    let kf = k as f64;
    let r = (kf * kf + 2.0 * kf + 4.0 * lambda2 + 1.0).sqrt();
    let s = 0.25 * (-r + kf + 1.0);
    let a = 0.25 * kf - 0.25 * r + 0.25;
    let b = 0.25 * kf - 0.25 * r + 0.75;
    let c = 1.0 - 0.5 * r;
    let z = 1.0 / rho.cosh().powi(2);
    Ok(z.powf(s) * hyp2f1(a, b, c, z, SERIES_TOL)?)
}

/// Residual of the radial ordinary differential equation
/// `-4 (z - 1) z^2 H'' - 2 z (k - 1 + 3 z) H' - lambda^2 H = 0`
/// for the decaying branch, with the derivatives taken term-by-term in the
/// series (exact to series tolerance; finite differences cannot reach the
/// required accuracy near `z -> 1`).
pub fn ode_residual(lambda2: f64, k: u32, rho: f64) -> Result<f64> {
    let z = 1.0 / rho.cosh().powi(2);
    let (s, a, b, c) = indices(k, lambda2);
    let f0 = hyp2f1(a, b, c, z, SERIES_TOL)?;
    let f1 = hyp2f1_deriv(a, b, c, z, 1, SERIES_TOL)?;
    let f2 = hyp2f1_deriv(a, b, c, z, 2, SERIES_TOL)?;
    let zs = z.powf(s);
    let h = zs * f0;
    let hp = s * zs / z * f0 + zs * f1;
    let hpp = s * (s - 1.0) * zs / (z * z) * f0 + 2.0 * s * zs / z * f1 + zs * f2;
    let kf = k as f64;
    Ok(-4.0 * (z - 1.0) * z * z * hpp - 2.0 * z * (kf - 1.0 + 3.0 * z) * hp - lambda2 * h)
}

/// Applies the metric Laplacian of `H^{2+k}` to `H(z(N(w)))` by finite
/// differences and returns the difference against the closed right-hand
/// side `-4 (z - 1) z^2 H'' - 2 z (k - 1 + 3 z) H'`.
pub fn radial_laplacian_identity(
    h: impl Fn(f64) -> f64 + Copy,
    w: &SolvPoint,
    k: u32,
) -> Result<f64> {
    if w.dim() != 2 + k as usize {
        return Err(Error::DimensionMismatch(w.dim(), 2 + k as usize));
    }
    let f = move |coords: &[f64]| {
        let p = SolvPoint {
            w: coords.to_vec(),
        };
        let n = models::norm(&p);
        h(1.0 / n.cosh().powi(2))
    };
    let lhs = crate::harmonics::metric_laplacian(f, w, 2e-4);
    // right-hand side with centered derivatives of the profile
    let z = 1.0 / models::norm(w).cosh().powi(2);
    let dz = 1e-5;
    let hp = (h(z + dz) - h(z - dz)) / (2.0 * dz);
    let hpp = (h(z + dz) - 2.0 * h(z) + h(z - dz)) / (dz * dz);
    let kf = k as f64;
    let rhs = -4.0 * (z - 1.0) * z * z * hpp - 2.0 * z * (kf - 1.0 + 3.0 * z) * hp;
    Ok(lhs - rhs)
}

/// Closed-form heat kernel of three-dimensional hyperbolic space:
/// `sqrt(pi/2) rho csch(rho) t^{-3/2} exp(-rho^2/(4t) - t)`.
pub fn heat_kernel_h3(t: f64, rho: f64) -> Result<f64> {
    if t <= 0.0 || rho <= 0.0 {
        return Err(Error::Domain("heat kernel needs t > 0, rho > 0".into()));
    }
    Ok((std::f64::consts::PI / 2.0).sqrt() * rho / rho.sinh() / t.powf(1.5)
        * (-rho * rho / (4.0 * t) - t).exp())
}

/// Relative residual of the radial heat equation
/// `dH/dt = d^2 H/drho^2 + 2 coth(rho) dH/drho` for the closed form.
pub fn heat_equation_residual(t: f64, rho: f64) -> Result<f64> {
    let h = 1e-4;
    let f = heat_kernel_h3;
    let dt = (f(t + h, rho)? - f(t - h, rho)?) / (2.0 * h);
    let dr = (f(t, rho + h)? - f(t, rho - h)?) / (2.0 * h);
    let drr = (f(t, rho + h)? - 2.0 * f(t, rho)? + f(t, rho - h)?) / (h * h);
    let lap = drr + 2.0 / rho.tanh() * dr;
    Ok((dt - lap).abs() / f(t, rho)?.abs())
}

/// Prefactor-adjusted short-time distance functional
/// `-4 t [ln H + (3/2) ln t + t]`; linear in `t` with limit `rho^2`, so the
/// two-point Richardson extrapolation recovers `rho^2` exactly.
pub fn varadhan_adjusted(t: f64, rho: f64) -> Result<f64> {
    let h = heat_kernel_h3(t, rho)?;
    Ok(-4.0 * t * (h.ln() + 1.5 * t.ln() + t))
}

/// Truncated spectral heat kernel on the plane (`k = 0`):
/// `sum_J K(J(J+1), 0, rho) exp(-J(J+1) t) / 2` with the last-term
/// magnitude reported as a truncation proxy.
pub fn spectral_heat_kernel(t: f64, rho: f64, j_max: u32) -> Result<(f64, f64)> {
    if t <= 0.0 || j_max < 1 {
        return Err(Error::Domain("spectral sum needs t > 0, j_max >= 1".into()));
    }
    let mut sum = 0.0;
    let mut last = 0.0;
    for j in 1..=j_max {
        let casimir = (j * (j + 1)) as f64;
        last = 0.5 * green_h2(casimir, 0, rho)? * (-casimir * t).exp();
        sum += last;
    }
    Ok((sum, last.abs()))
}

/// Weighted point-pair kernel
/// `∫_0^{lambda_max} K(lambda, 0, N(u^{-1} v)) h(lambda) dlambda`,
/// symmetric and invariant under the solvable isometries.
pub fn point_pair_kernel(
    h: impl Fn(f64) -> f64,
    u: &SolvPoint,
    v: &SolvPoint,
    lambda_max: f64,
) -> Result<f64> {
    let n = models::distance(u, v)?.max(RHO_MIN);
    // the integrand extends continuously to the origin; clamp the
    // eigenvalue so the endpoint sample matches the limit
    adaptive_quadrature(
        |lambda| green_h2(lambda.max(1e-9), 0, n).unwrap_or(0.0) * h(lambda),
        0.0,
        lambda_max,
        1e-11,
    )
}

/// Histogrammed displacement statistics of a diffusion run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DiffusionStats {
    pub t: f64,
    pub n_paths: usize,
    pub seed: u64,
    pub bin_width: f64,
    /// Counts per distance bin `[i dr, (i+1) dr)`.
    pub counts: Vec<u64>,
    pub mean_displacement: f64,
}

impl DiffusionStats {
    /// Empirical volume density around distance `rho` (count divided by
    /// path number and by the hyperbolic annulus area `2 pi sinh(rho) dr`).
    pub fn density_at(&self, rho: f64) -> f64 {
        let i = (rho / self.bin_width) as usize;
        if i >= self.counts.len() {
            return 0.0;
        }
        self.counts[i] as f64
            / (self.n_paths as f64 * 2.0 * std::f64::consts::PI * rho.sinh() * self.bin_width)
    }

    /// Density of the central bin via the exact disk area
    /// `2 pi (cosh(dr) - 1)`.
    pub fn central_density(&self) -> f64 {
        self.counts[0] as f64
            / (self.n_paths as f64
                * 2.0
                * std::f64::consts::PI
                * (self.bin_width.cosh() - 1.0))
    }

    /// Short-time distance ratio `-2 t ln(density(rho)/density(0)) / rho^2`;
    /// the center-relative density cancels the time-dependent prefactor of
    /// the transition kernel.
    pub fn varadhan_ratio(&self, rho: f64) -> f64 {
        -2.0 * self.t * (self.density_at(rho) / self.central_density()).ln() / (rho * rho)
    }
}

/// Euler–Maruyama simulation of the Brownian motion generated by half the
/// metric Laplacian on the plane, in solvable coordinates:
/// `dw1 = -dt/2 + dB1`, `dw2 = w2 dt - w2 dB1 + 2 dB2` (the diffusion
/// matrix is the exact Cholesky factor of the inverse metric). Paths draw
/// from per-path derived streams of a counter-based generator, so the run
/// is reproducible for a fixed seed.
pub fn diffusion_simulate(
    p0: &SolvPoint,
    t: f64,
    n_paths: usize,
    seed: u64,
) -> Result<DiffusionStats> {
    if n_paths > 1_000_000 {
        return Err(Error::Domain("path count capped at 1e6".into()));
    }
    if p0.dim() != 2 {
        return Err(Error::DimensionMismatch(p0.dim(), 2));
    }
    let n_steps = ((t / 1e-3).ceil() as usize).max(40);
    let dt = t / n_steps as f64;
    let sdt = dt.sqrt();
    let bin_width = 0.05;
    let mut counts = vec![0u64; 400];
    let mut sum_d = 0.0;
    for path in 0..n_paths {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(path as u64);
        let (mut w1, mut w2) = (p0.w[0], p0.w[1]);
        for _ in 0..n_steps {
            let db1: f64 = sample_gauss(&mut rng) * sdt;
            let db2: f64 = sample_gauss(&mut rng) * sdt;
            let nw1 = w1 - 0.5 * dt + db1;
            let nw2 = w2 + w2 * dt - w2 * db1 + 2.0 * db2;
            w1 = nw1;
            w2 = nw2;
            if !(w1.is_finite() && w2.is_finite()) {
                return Err(Error::Unstable(format!(
                    "path {path} diverged at step size {dt}"
                )));
            }
        }
        let d = models::distance(p0, &SolvPoint::plane(w1, w2))?;
        sum_d += d;
        let bin = (d / bin_width) as usize;
        if bin < counts.len() {
            counts[bin] += 1;
        }
    }
    Ok(DiffusionStats {
        t,
        n_paths,
        seed,
        bin_width,
        counts,
        mean_displacement: sum_d / n_paths as f64,
    })
}

/// Box–Muller standard normal.
fn sample_gauss(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen::<f64>();
    (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn green_function_elementary_form() {
        // k = 1, eigenvalue q^2 - 1 with q = 2 at rho = 1
        let v = green_h2(3.0, 1, 1.0).unwrap();
        let want = 4.0 * (-2.0_f64).exp() / 1.0_f64.sinh();
        assert_abs_diff_eq!(v, want, epsilon = 1e-12);
        assert!((v - 0.460_636_983_585_74).abs() < 1e-12);
        // ratio against 2^q e^{-q rho}/sinh(rho) constant in rho
        let q = 2.0;
        let mut ratios = Vec::new();
        for rho in [0.3, 0.7, 1.3, 2.2, 4.0] {
            let k = green_h2(q * q - 1.0, 1, rho).unwrap();
            ratios.push(k / (2.0_f64.powf(q) * (-q * rho).exp() / rho.sinh()));
        }
        for r in &ratios {
            assert!((r - ratios[0]).abs() < 1e-9, "{ratios:?}");
        }
    }

    #[test]
    fn ode_residuals_small() {
        for k in [0u32, 1, 2] {
            for rho in [0.2, 0.9, 2.3, 4.0] {
                for lambda2 in [2.0, 5.0, 12.0] {
                    let r = ode_residual(lambda2, k, rho).unwrap();
                    assert!(
                        r.abs() < 1e-8,
                        "k = {k}, rho = {rho}, lambda2 = {lambda2}: {r}"
                    );
                }
            }
        }
    }

    #[test]
    fn branch_selection_monotonicity() {
        for k in [0u32, 1, 2] {
            for lambda2 in [2.0, 5.0, 12.0] {
                let mut prev_h2 = f64::INFINITY;
                let mut prev_h1 = 0.0;
                for i in 0..=10 {
                    let rho = 1.0 + 5.0 * i as f64 / 10.0;
                    let h2 = green_h2(lambda2, k, rho).unwrap();
                    let h1 = growing_h1(lambda2, k, rho).unwrap();
                    assert!(h2 < prev_h2, "decaying branch must decrease");
                    assert!(h1 > prev_h1, "growing branch must increase");
                    prev_h2 = h2;
                    prev_h1 = h1;
                }
            }
        }
    }

    #[test]
    fn radial_identity_residuals() {
        // profile z on the plane
        let w = SolvPoint::plane(0.4, -0.9);
        let r = radial_laplacian_identity(|z| z, &w, 0).unwrap();
        assert!(r.abs() < 1e-5, "k = 0: {r}");
        // profile z^2 on the three-dimensional space
        let w = SolvPoint::new(vec![0.5, 0.3, -0.4]).unwrap();
        let r = radial_laplacian_identity(|z| z * z, &w, 1).unwrap();
        assert!(r.abs() < 1e-5, "k = 1: {r}");
        // constants annihilate both sides
        let r = radial_laplacian_identity(|_| 3.25, &w, 1).unwrap();
        assert!(r.abs() < 1e-9);
    }

    #[test]
    fn h3_kernel_values() {
        let v = heat_kernel_h3(1.0, 1.0).unwrap();
        assert!((v - 0.305_548_117_425_089_64).abs() < 1e-14);
        assert!((v - 0.30554).abs() < 1e-4);
        let r = heat_equation_residual(0.5, 1.5).unwrap();
        assert!(r < 1e-6, "heat equation residual {r}");
        // a small grid
        for t in [0.4, 1.0, 2.0] {
            for rho in [0.6, 1.2, 2.5] {
                let r = heat_equation_residual(t, rho).unwrap();
                assert!(r < 1e-6, "t = {t}, rho = {rho}: {r}");
            }
        }
    }

    #[test]
    fn varadhan_closed_form() {
        let rho = 1.0;
        let l1 = varadhan_adjusted(0.02, rho).unwrap();
        let l2 = varadhan_adjusted(0.01, rho).unwrap();
        // exact linearity in t: Richardson recovers rho^2 to roundoff
        assert_abs_diff_eq!(2.0 * l2 - l1, rho * rho, epsilon = 1e-10);
        // and the defect halves from t to t/2
        let d1 = l1 - rho * rho;
        let d2 = l2 - rho * rho;
        assert_abs_diff_eq!(d1 / d2, 2.0, epsilon = 1e-6);
    }

    #[test]
    fn spectral_sum_truncation() {
        let (s1, _) = spectral_heat_kernel(1.0, 1.0, 1).unwrap();
        let (s2, _) = spectral_heat_kernel(1.0, 1.0, 2).unwrap();
        let j2_term = 0.5 * green_h2(6.0, 0, 1.0).unwrap() * (-6.0_f64).exp();
        assert_abs_diff_eq!(s2 - s1, j2_term, epsilon = 1e-15);
        let (s6, last) = spectral_heat_kernel(1.0, 1.0, 6).unwrap();
        assert!(last / s6 < 1e-8, "tail ratio {}", last / s6);
        // tail bound decreases with the truncation order
        let mut prev = f64::INFINITY;
        for j in 2..=8 {
            let (_, last) = spectral_heat_kernel(1.0, 1.0, j).unwrap();
            assert!(last <= prev);
            prev = last;
        }
        // positivity on a small grid
        for rho in [0.2, 0.8, 1.7, 3.0] {
            for t in [0.5, 1.0, 2.0] {
                let (s, _) = spectral_heat_kernel(t, rho, 8).unwrap();
                assert!(s > 0.0);
            }
        }
    }

    #[test]
    fn point_pair_kernel_properties() {
        let u = SolvPoint::plane(0.4, -0.2);
        let v = SolvPoint::plane(-0.1, 0.7);
        // zero weight kills the kernel
        let z = point_pair_kernel(|_| 0.0, &u, &v, 20.0).unwrap();
        assert_eq!(z, 0.0);
        let h = |l: f64| (-l).exp();
        let kuv = point_pair_kernel(h, &u, &v, 30.0).unwrap();
        let kvu = point_pair_kernel(h, &v, &u, 30.0).unwrap();
        assert_abs_diff_eq!(kuv, kvu, epsilon = 1e-10);
        // invariance under left translation
        let s = SolvPoint::plane(0.9, 1.4);
        let ks = point_pair_kernel(
            h,
            &s.compose(&u).unwrap(),
            &s.compose(&v).unwrap(),
            30.0,
        )
        .unwrap();
        assert_abs_diff_eq!(ks, kuv, epsilon = 1e-9);
    }

    #[test]
    fn diffusion_reproducible_and_concentrated() {
        let origin = SolvPoint::plane(0.0, 0.0);
        let a = diffusion_simulate(&origin, 0.01, 2000, 42).unwrap();
        let b = diffusion_simulate(&origin, 0.01, 2000, 42).unwrap();
        assert_eq!(a.counts, b.counts);
        assert!(a.mean_displacement < 0.2, "short-time mean near zero");
        let c = diffusion_simulate(&origin, 0.002, 2000, 42).unwrap();
        assert!(c.mean_displacement < a.mean_displacement);
        assert!(diffusion_simulate(&origin, 0.01, 2_000_000, 1).is_err());
    }

    #[test]
    fn diffusion_varadhan_ratio() {
        let origin = SolvPoint::plane(0.0, 0.0);
        let stats = diffusion_simulate(&origin, 0.05, 100_000, 12345).unwrap();
        let ratio = stats.varadhan_ratio(0.5);
        assert!(
            (0.85..=1.15).contains(&ratio),
            "short-time distance ratio {ratio}"
        );
    }
}
