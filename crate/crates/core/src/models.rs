//! Point models of the hyperbolic spaces `H^{2+k}`, conversions between
//! them, the solvable-group norm and distance, and geodesic arcs in the
//! Poincaré disk.
//!
//! A point is interchangeably a solvable-coordinate vector `w`, a disk
//! point, an upper-half-plane point or a hyperboloid point; conversions are
//! exact closed forms. The distance is the norm of the solvable group
//! element connecting the two points.

use crate::{Error, Result};
use serde::Serialize;

/// Solvable coordinates `(w1, w2, ..., w_{2+k})` on `H^{2+k}`, `k >= 0`.
#[derive(Debug, Clone, PartialEq)]
pub struct SolvPoint {
    pub w: Vec<f64>,
}

impl SolvPoint {
    pub fn new(w: Vec<f64>) -> Result<Self> {
        if w.len() < 2 {
            return Err(Error::Domain("SolvPoint needs dimension >= 2".into()));
        }
        if !w.iter().all(|x| x.is_finite()) {
            return Err(Error::Domain("SolvPoint entries must be finite".into()));
        }
        Ok(Self { w })
    }

    pub fn plane(w1: f64, w2: f64) -> Self {
        Self { w: vec![w1, w2] }
    }

    pub fn origin(dim: usize) -> Self {
        Self { w: vec![0.0; dim] }
    }

    pub fn dim(&self) -> usize {
        self.w.len()
    }

    /// Group composition `self * rhs` of the solvable parametrization
    /// `exp(w1 H) exp(w⃗ · E)`: `(u, v) -> (u1 + v1, v⃗ + e^{-v1} u⃗)`.
    pub fn compose(&self, rhs: &SolvPoint) -> Result<SolvPoint> {
        if self.dim() != rhs.dim() {
            return Err(Error::DimensionMismatch(self.dim(), rhs.dim()));
        }
        let mut w = vec![0.0; self.dim()];
        w[0] = self.w[0] + rhs.w[0];
        let s = (-rhs.w[0]).exp();
        for i in 1..self.dim() {
            w[i] = rhs.w[i] + s * self.w[i];
        }
        Ok(SolvPoint { w })
    }

    /// Group inverse: `(w1, w⃗)^{-1} = (-w1, -e^{w1} w⃗)`.
    pub fn inverse(&self) -> SolvPoint {
        let mut w = vec![0.0; self.dim()];
        w[0] = -self.w[0];
        let s = self.w[0].exp();
        for i in 1..self.dim() {
            w[i] = -s * self.w[i];
        }
        SolvPoint { w }
    }
}

/// Cartesian coordinates in the Poincaré disk, `x^2 + y^2 < 1`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct DiskPoint {
    pub x: f64,
    pub y: f64,
}

impl DiskPoint {
    pub fn new(x: f64, y: f64) -> Result<Self> {
        if x * x + y * y >= 1.0 {
            return Err(Error::Domain(format!("({x}, {y}) not inside the unit disk")));
        }
        Ok(Self { x, y })
    }

    pub fn radius(&self) -> f64 {
        (self.x * self.x + self.y * self.y).sqrt()
    }

    pub fn angle(&self) -> f64 {
        self.y.atan2(self.x)
    }

    pub fn polar(rho: f64, phi: f64) -> Self {
        Self {
            x: rho * phi.cos(),
            y: rho * phi.sin(),
        }
    }
}

/// Upper-half-plane point, `im > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UhpPoint {
    pub re: f64,
    pub im: f64,
}

impl UhpPoint {
    pub fn new(re: f64, im: f64) -> Result<Self> {
        if im <= 0.0 {
            return Err(Error::Domain(format!("im = {im} not positive")));
        }
        Ok(Self { re, im })
    }
}

/// Point on the upper sheet of `X1^2 + X2^2 - X3^2 = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HyperboloidPoint {
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
}

impl HyperboloidPoint {
    pub fn new(x1: f64, x2: f64, x3: f64) -> Result<Self> {
        let q = x1 * x1 + x2 * x2 - x3 * x3;
        if (q + 1.0).abs() > 1e-9 * (1.0 + x3 * x3) || x3 <= 0.0 {
            return Err(Error::Domain(format!(
                "({x1}, {x2}, {x3}) not on the upper hyperboloid sheet"
            )));
        }
        Ok(Self { x1, x2, x3 })
    }
}

/// Euler coordinates `(mu1, theta1)` diagonalizing the fundamental harmonic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EulerPoint {
    pub mu1: f64,
    pub theta1: f64,
}

/// Geodesic arc in the disk: either a diameter segment or an arc of a circle
/// orthogonal to the unit circle.
#[derive(Debug, Clone, PartialEq)]
pub enum GeodesicArc {
    /// Straight segment through the origin.
    Diameter { endpoints: [DiskPoint; 2] },
    /// Circular arc with `|center|^2 = radius^2 + 1`.
    Arc {
        endpoints: [DiskPoint; 2],
        center: (f64, f64),
        radius: f64,
    },
}

impl GeodesicArc {
    pub fn endpoints(&self) -> [DiskPoint; 2] {
        match self {
            GeodesicArc::Diameter { endpoints } | GeodesicArc::Arc { endpoints, .. } => *endpoints,
        }
    }

    /// Orthogonality defect `| |c|^2 - r^2 - 1 |`; zero for diameters.
    pub fn orthogonality_residual(&self) -> f64 {
        match self {
            GeodesicArc::Diameter { .. } => 0.0,
            GeodesicArc::Arc { center, radius, .. } => {
                (center.0 * center.0 + center.1 * center.1 - radius * radius - 1.0).abs()
            }
        }
    }

    /// Uniform parametrization of the arc: `t` in `[0, 1]` from the first
    /// endpoint to the second, tracing the minor arc for the circle case.
    pub fn point_at(&self, t: f64) -> DiskPoint {
        match self {
            GeodesicArc::Diameter { endpoints } => DiskPoint {
                x: endpoints[0].x + t * (endpoints[1].x - endpoints[0].x),
                y: endpoints[0].y + t * (endpoints[1].y - endpoints[0].y),
            },
            GeodesicArc::Arc {
                endpoints,
                center,
                radius,
            } => {
                let a0 = (endpoints[0].y - center.1).atan2(endpoints[0].x - center.0);
                let a1 = (endpoints[1].y - center.1).atan2(endpoints[1].x - center.0);
                let mut da = a1 - a0;
                // minor arc
                while da > std::f64::consts::PI {
                    da -= 2.0 * std::f64::consts::PI;
                }
                while da < -std::f64::consts::PI {
                    da += 2.0 * std::f64::consts::PI;
                }
                let a = a0 + t * da;
                DiskPoint {
                    x: center.0 + radius * a.cos(),
                    y: center.1 + radius * a.sin(),
                }
            }
        }
    }
}

/// The scalar `P(w)` whose arc-cosh gives twice the norm:
/// `P = [e^{2w1} (|w⃗|^2 + 4)^2 + 16 e^{-2w1} + 8 |w⃗|^2] / 32` with
/// `|w⃗|^2 = w2^2 + sum w_{2+i}^2`.
pub fn norm_argument(p: &SolvPoint) -> f64 {
    let w1 = p.w[0];
    let s: f64 = p.w[1..].iter().map(|x| x * x).sum();
    ((2.0 * w1).exp() * (s + 4.0) * (s + 4.0) + 16.0 * (-2.0 * w1).exp() + 8.0 * s) / 32.0
}

/// Norm `N(w) = arccosh(P(w)) / 2`; the distance of the point from the
/// origin. Always `>= 0`, zero only at the identity.
pub fn norm(p: &SolvPoint) -> f64 {
    0.5 * norm_argument(p).max(1.0).acosh()
}

/// Distance `d(u, v) = N(u^{-1} v)`, symmetric and nonnegative.
pub fn distance(u: &SolvPoint, v: &SolvPoint) -> Result<f64> {
    Ok(norm(&u.inverse().compose(v)?))
}

/// Disk coordinates of a plane (`k = 0`) solvable point:
/// the closed rational-exponential map.
pub fn solv_to_disk(p: &SolvPoint) -> DiskPoint {
    let (w1, w2) = (p.w[0], p.w[1]);
    let e1 = w1.exp();
    let e2 = (2.0 * w1).exp();
    let den = 4.0 + 8.0 * e1 + e2 * (4.0 + w2 * w2);
    DiskPoint {
        x: (-4.0 + e2 * (4.0 + w2 * w2)) / den,
        y: -4.0 * e1 * w2 / den,
    }
}

/// Inverse of [`solv_to_disk`], via the half-plane model.
pub fn disk_to_solv(p: DiskPoint) -> Result<SolvPoint> {
    uhp_to_solv(disk_to_uhp(p)?)
}

/// Upper-half-plane image `z = e^{w1} w2/2 + i e^{w1}` of a plane point
/// (the triangular coset representative acting on `i`).
pub fn solv_to_uhp(p: &SolvPoint) -> UhpPoint {
    let e1 = p.w[0].exp();
    UhpPoint {
        re: e1 * p.w[1] / 2.0,
        im: e1,
    }
}

/// Inverse of [`solv_to_uhp`]: `w1 = ln im`, `w2 = 2 re / im`.
pub fn uhp_to_solv(z: UhpPoint) -> Result<SolvPoint> {
    if z.im <= 0.0 {
        return Err(Error::Domain("upper half plane requires im > 0".into()));
    }
    Ok(SolvPoint::plane(z.im.ln(), 2.0 * z.re / z.im))
}

/// Cayley transform `w = (z - i) / (z + i)`, fixed by requiring
/// `solv_to_disk = cayley ∘ solv_to_uhp`.
pub fn cayley(z: UhpPoint) -> DiskPoint {
    // (re + i(im-1)) / (re + i(im+1))
    let den = z.re * z.re + (z.im + 1.0) * (z.im + 1.0);
    DiskPoint {
        x: (z.re * z.re + (z.im - 1.0) * (z.im + 1.0)) / den,
        y: (z.re * (z.im + 1.0) - z.re * (z.im - 1.0)) / den * -1.0,
    }
}

/// Inverse Cayley transform `z = i (1 + w) / (1 - w)`.
pub fn cayley_inverse(p: DiskPoint) -> Result<UhpPoint> {
    let den = (1.0 - p.x) * (1.0 - p.x) + p.y * p.y;
    if den == 0.0 {
        return Err(Error::Domain("Cayley inverse at the boundary point 1".into()));
    }
    // i(1+w)(1-conj(w)) / |1-w|^2, w = x + i y
    let re = (-2.0 * p.y) / den;
    let im = (1.0 - p.x * p.x - p.y * p.y) / den;
    UhpPoint::new(re, im)
}

/// Disk image of an upper-half-plane point.
pub fn uhp_to_disk(z: UhpPoint) -> DiskPoint {
    let den = z.re * z.re + (z.im + 1.0) * (z.im + 1.0);
    DiskPoint {
        x: (z.re * z.re + z.im * z.im - 1.0) / den,
        y: -2.0 * z.re / den,
    }
}

/// Disk point of the upper-half-plane point, as [`cayley`]; kept as the
/// single implementation.
pub fn disk_to_uhp(p: DiskPoint) -> Result<UhpPoint> {
    cayley_inverse(p)
}

/// Stereographic projection from the hyperboloid to the disk.
pub fn hyperboloid_to_disk(p: HyperboloidPoint) -> DiskPoint {
    DiskPoint {
        x: p.x1 / (p.x3 + 1.0),
        y: p.x2 / (p.x3 + 1.0),
    }
}

/// Inverse stereographic projection.
pub fn disk_to_hyperboloid(p: DiskPoint) -> Result<HyperboloidPoint> {
    let r2 = p.x * p.x + p.y * p.y;
    if r2 >= 1.0 {
        return Err(Error::Domain("stereographic inverse needs |p| < 1".into()));
    }
    let s = 1.0 - r2;
    HyperboloidPoint::new(2.0 * p.x / s, 2.0 * p.y / s, (1.0 + r2) / s)
}

/// Vertical projection `(X1, X2, X3) -> (X1, X2)` of the hyperboloid onto
/// the plane.
pub fn hyperboloid_to_plane(p: HyperboloidPoint) -> (f64, f64) {
    (p.x1, p.x2)
}

/// Vertical lift `(X, Y) -> (X, Y, sqrt(X^2 + Y^2 + 1))`.
pub fn plane_to_hyperboloid(x: f64, y: f64) -> HyperboloidPoint {
    HyperboloidPoint {
        x1: x,
        x2: y,
        x3: (x * x + y * y + 1.0).sqrt(),
    }
}

/// Result of [`geodesic_between`]: the true geodesic arc plus the
/// equal-radius chord quantities of the tabulated construction (circle
/// center on the unit circle, chord radius `R`, and the bisecting-ray
/// point at `rho* = 1 - R`).
#[derive(Debug, Clone)]
pub struct EqualRadiusArc {
    /// True hyperbolic geodesic between the two points.
    pub arc: GeodesicArc,
    /// Unit-circle center of the chord circle through both points.
    pub chord_center: (f64, f64),
    /// Radius `R = sqrt(1 + rho^2 - 2 rho cos((phi - psi)/2))`.
    pub chord_radius: f64,
    /// Bisecting-ray point at radius `rho* = 1 - R` (the tabulated midpoint).
    pub midpoint: DiskPoint,
}

/// Geodesic between two points at the same disk radius `rho` and angles
/// `phi != psi`, together with the tabulated midpoint recipe.
pub fn geodesic_between(rho: f64, phi: f64, psi: f64) -> Result<EqualRadiusArc> {
    if rho <= 0.0 || rho >= 1.0 {
        return Err(Error::Domain(format!("radius {rho} outside (0, 1)")));
    }
    let dphi = (phi - psi).rem_euclid(2.0 * std::f64::consts::PI);
    if dphi.abs() < 1e-14 || (dphi - 2.0 * std::f64::consts::PI).abs() < 1e-14 {
        return Err(Error::Degenerate("equal angles".into()));
    }
    let p1 = DiskPoint::polar(rho, phi);
    let p2 = DiskPoint::polar(rho, psi);
    let half_sum = 0.5 * (phi + psi);
    let half_diff = 0.5 * (phi - psi);
    let chord_radius = (1.0 + rho * rho - 2.0 * rho * half_diff.cos()).sqrt();
    let rho_star = 1.0 - chord_radius;
    Ok(EqualRadiusArc {
        arc: general_geodesic(p1, p2)?,
        chord_center: (half_sum.cos(), half_sum.sin()),
        chord_radius,
        midpoint: DiskPoint::polar(rho_star, half_sum),
    })
}

/// Geodesic arc through two arbitrary distinct disk points: the circle
/// orthogonal to the unit circle, or the diameter when collinear with the
/// origin.
pub fn general_geodesic(p1: DiskPoint, p2: DiskPoint) -> Result<GeodesicArc> {
    let cross = p1.x * p2.y - p1.y * p2.x;
    let d2 = (p1.x - p2.x) * (p1.x - p2.x) + (p1.y - p2.y) * (p1.y - p2.y);
    if d2 < 1e-28 {
        return Err(Error::Degenerate("coincident points".into()));
    }
    // collinear with the origin (including one endpoint at the origin)
    if cross.abs() < 1e-13 * (1.0 + p1.radius() + p2.radius()) {
        return Ok(GeodesicArc::Diameter {
            endpoints: [p1, p2],
        });
    }
    // center c solves 2 <c, p_i> = |p_i|^2 + 1 for both points
    let b1 = (p1.x * p1.x + p1.y * p1.y + 1.0) / 2.0;
    let b2 = (p2.x * p2.x + p2.y * p2.y + 1.0) / 2.0;
    let det = p1.x * p2.y - p1.y * p2.x;
    let cx = (b1 * p2.y - b2 * p1.y) / det;
    let cy = (p1.x * b2 - p2.x * b1) / det;
    let radius = (cx * cx + cy * cy - 1.0).sqrt();
    Ok(GeodesicArc::Arc {
        endpoints: [p1, p2],
        center: (cx, cy),
        radius,
    })
}
