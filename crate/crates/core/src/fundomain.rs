//! The octagonal fundamental domain of the genus-2 surface group:
//! norm-difference functions, the critical radius and vertex/midpoint
//! tables in radicals, the Dirichlet cell with its exact side pairing,
//! domain tessellations with Euler-characteristic audits, the dual grids
//! of the genus-3 quartic group, and tiling expansion of the disk.
//!
//! Two vertex sets are carried side by side: `vertices` are the tabulated
//! critical-radius points sitting on the bisector circles at angles
//! `phi_0 + n pi/4`, and `corners` are the points where adjacent bisector
//! arcs intersect (radius `2^{-1/4}`, angles `pi/8 + n pi/4`). The latter
//! bound the Dirichlet cell which the generators pair exactly; the former
//! reproduce the tabulated radical coordinates.

use crate::fuchsian::{self, FuchsianGroup, Psl2Element};
use crate::models::{self, DiskPoint, GeodesicArc};
use crate::numerics::{real_roots_in_interval, RadicalExpr};
use crate::{Error, Result};
use std::f64::consts::PI;

fn r2() -> RadicalExpr {
    RadicalExpr::int(2).sqrt()
}

/// Norm difference `Nd_g(p) = N(g p) - N(p)`, computed through the group
/// action in the upper half plane.
pub fn norm_diff(g: &Psl2Element, p: DiskPoint) -> Result<f64> {
    let w = models::disk_to_solv(p)?;
    let gw = g.apply_solv(&w)?;
    Ok(models::norm(&gw) - models::norm(&w))
}

/// Smallest norm difference over the eight generators; nonnegative inside
/// the Dirichlet cell.
pub fn min_norm_diff(group: &FuchsianGroup, p: DiskPoint) -> Result<f64> {
    let mut best = f64::INFINITY;
    for g in &group.generators {
        best = best.min(norm_diff(g, p)?);
    }
    Ok(best)
}

/// Vertex-angle data: the admissible cosine root and the angle ladder
/// `phi_n = phi_0 + n pi/4`.
#[derive(Debug, Clone)]
pub struct VertexAngles {
    /// Rejected root `(-3 - sqrt 2)/4` with `|q| > 1`.
    pub rejected: f64,
    /// Admissible root `1/2 - sqrt 2`.
    pub accepted: f64,
    /// `phi_0 = arccos(1/2 - sqrt 2)`.
    pub phi0: f64,
}

/// The two candidate cosines of the vertex angle and the resulting ladder;
/// only `q = 1/2 - sqrt 2` lies in `[-1, 1]`.
pub fn bolza_vertex_angles() -> VertexAngles {
    let q1 = (RadicalExpr::int(-3) - r2()) / 4;
    let q2 = RadicalExpr::rat(1, 2) - r2();
    let accepted = q2.value();
    VertexAngles {
        rejected: q1.value(),
        accepted,
        phi0: accepted.acos(),
    }
}

/// Coefficients (ascending) of the critical-radius quartic. The polynomial
/// is palindromic: `8 [c0 + c1 r + c2 r^2 + c1 r^3 + c0 r^4]`.
pub fn critical_quartic() -> [RadicalExpr; 5] {
    let big = (7 * (RadicalExpr::int(400559) + 283238 * r2())).sqrt();
    let c0 = 2 * (7 + 5 * r2());
    let c1 = -((2 * (RadicalExpr::int(1598) + 1130 * r2() + big)).sqrt());
    let c2 = 2 * (28 + 20 * r2() + (7 * (RadicalExpr::int(31) + 22 * r2())).sqrt());
    [
        8 * c0.clone(),
        8 * c1.clone(),
        8 * c2,
        8 * c1,
        8 * c0,
    ]
}

/// Nested-radical closed form of the critical radius.
pub fn critical_radius_radical() -> RadicalExpr {
    let big = (7 * (RadicalExpr::int(400559) + 283238 * r2())).sqrt();
    let root31 = (7 * (RadicalExpr::int(31) + 22 * r2())).sqrt();
    let root434 = (RadicalExpr::int(434) + 308 * r2()).sqrt();
    let zu = (2 * (RadicalExpr::int(1598) + 1130 * r2() + big.clone())).sqrt()
        + (2 * (RadicalExpr::int(14) + 10 * r2() - 56 * root31.clone() - 40 * root434.clone()
            + big.clone()))
        .sqrt();
    let tu = RadicalExpr::int(-778) - 550 * r2() - 28 * root31.clone() - 20 * root434.clone()
        + big.clone();
    let xu = RadicalExpr::int(14) + 10 * r2() - 56 * root31 - 40 * root434 + big.clone();
    let yu = RadicalExpr::int(1598) + 1130 * r2() + big;
    (5 * r2() - 7) / 8 * (zu - 2 * (tu + (xu * yu).sqrt()).sqrt())
}

/// Critical radius: the unique root of the quartic in `(0, 1)`,
/// cross-checked against the nested-radical closed form and against the
/// independent zero of the norm-difference function along the next vertex
/// ray.
pub fn bolza_critical_radius(group: &FuchsianGroup) -> Result<f64> {
    let coeffs: Vec<f64> = critical_quartic().iter().map(|c| c.value()).collect();
    let roots = real_roots_in_interval(&coeffs, 0.0, 1.0, 1e-14)?;
    if roots.len() != 1 {
        return Err(Error::RootCount {
            lo: 0.0,
            hi: 1.0,
            found: roots.len(),
        });
    }
    let rc = roots[0];
    let closed = critical_radius_radical().value();
    if (rc - closed).abs() > 1e-9 {
        return Err(Error::TableMismatch {
            what: "critical radius closed form".into(),
            residual: (rc - closed).abs(),
        });
    }
    // independent oracle: zero of Nd along the ray phi_0 + pi/4 for the
    // diagonal generator
    let phi = bolza_vertex_angles().phi0 + PI / 4.0;
    let g0 = &group.generators[0];
    let f = |rho: f64| norm_diff(g0, DiskPoint::polar(rho, phi)).unwrap();
    let (mut lo, mut hi) = (0.7, 0.9);
    let (mut flo, fhi) = (f(lo), f(hi));
    if flo.signum() == fhi.signum() {
        return Err(Error::Domain("no bracket for the norm-difference zero".into()));
    }
    for _ in 0..90 {
        let mid = 0.5 * (lo + hi);
        let fm = f(mid);
        if fm.signum() == flo.signum() {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    let nd_zero = 0.5 * (lo + hi);
    if (rc - nd_zero).abs() > 1e-7 {
        return Err(Error::TableMismatch {
            what: "independent norm-difference zero".into(),
            residual: (rc - nd_zero).abs(),
        });
    }
    Ok(rc)
}

/// Tabulated radical coordinates of the eight critical-radius vertices,
/// as unit directions (the factor `R_c` multiplies each entry).
pub fn vertex_direction_radical(n: usize) -> [RadicalExpr; 2] {
    let half = RadicalExpr::rat(1, 2);
    let sy = (4 * r2() - 5).sqrt() / 2; // sin(phi_0)
    let cx = half.clone() - r2(); // cos(phi_0)
    // components of (cos, sin)(phi_0 + n pi/4) in radicals
    let root = (8 * r2() - 10).sqrt(); // sqrt 2 * sin(phi_0) * 2
    let a = (4 - r2() + root.clone()) / 4; // -cos(phi_0 + pi/4)
    let b = (RadicalExpr::int(-4) + r2() + root) / 4; // sin(phi_0 + pi/4)
    match n {
        0 => [cx, sy],
        1 => [-a, b],
        2 => [-sy, cx],
        3 => [-b, -a],
        4 => [-cx, -sy],
        5 => [a, -b],
        6 => [sy, -cx],
        7 => [b, a],
        _ => panic!("vertex index out of range"),
    }
}

/// Tabulated radical coordinates of the eight edge midpoints, as unit
/// directions (the factor `rho*` multiplies each entry); index `i = 1..=8`.
pub fn midpoint_direction_radical(i: usize) -> [RadicalExpr; 2] {
    // building blocks of the table
    let big = (28 * r2() - RadicalExpr::rat(77, 2)).sqrt();
    let u = (big.clone() + 7 / r2() - 2).sqrt() / 2;
    let v = (big - 7 / r2() + 6).sqrt() / 2;
    let w = ((RadicalExpr::int(3) * r2() - 2).sqrt() - (RadicalExpr::int(26) - 17 * r2()).sqrt()) / 4;
    let x = (14 * r2() - 8 - 2 * (14 * (8 * r2() - 11)).sqrt()).sqrt() / 4;
    let y = ((RadicalExpr::int(10) + r2()).sqrt() + (13 * r2() - 18).sqrt()) / 4;
    match i {
        1 => [-u, w],
        2 => [-v.clone(), -x.clone()],
        3 => [-w.clone() * 1, -u], // -w = (sqrt(26-17r2)-sqrt(3r2-2))/4
        4 => [x, -v],
        5 => [y, -w.clone() * 1],
        6 => [v.clone(), x],
        7 => [w, y],
        8 => [-x, v],
        _ => panic!("midpoint index out of range"),
    }
}

/// A single tile of the disk tessellation: the word, the mapped cell
/// corners, and the mapped boundary arcs.
#[derive(Debug, Clone)]
pub struct DomainCopy {
    pub word: Vec<(String, i32)>,
    pub corners: Vec<DiskPoint>,
    pub arcs: Vec<GeodesicArc>,
}

/// The constructed octagonal fundamental domain.
#[derive(Debug, Clone)]
pub struct FundamentalDomain {
    pub group: FuchsianGroup,
    /// Critical radius of the tabulated vertices.
    pub critical_radius: f64,
    /// First vertex angle `arccos(1/2 - sqrt 2)`.
    pub phi0: f64,
    /// Tabulated vertices at `(R_c, phi_0 + n pi/4)`.
    pub vertices: [DiskPoint; 8],
    /// Tabulated edge midpoints at radius `rho*`, angles
    /// `phi_0 + pi/8 + (i-1) pi/4`.
    pub midpoints: [DiskPoint; 8],
    /// Radius of the generator images of the origin.
    pub dual_radius: f64,
    /// Generator images of the origin, `dual_vertices[i] = KF_i(0)` at
    /// angle `i pi/4`.
    pub dual_vertices: [DiskPoint; 8],
    /// Radius `rho* = 1 - sqrt(R_c^2 - sqrt(2 + sqrt 2) R_c + 1)`.
    pub midpoint_radius: f64,
    /// Dirichlet-cell corners at radius `2^{-1/4}`, angles `pi/8 + n pi/4`.
    pub corners: [DiskPoint; 8],
    /// Dirichlet boundary arcs; `arcs[i]` faces direction `i pi/4`, joins
    /// `corners[i-1]` to `corners[i]`, and is shared with the tile of
    /// generator `i`.
    pub arcs: [GeodesicArc; 8],
}

impl FundamentalDomain {
    /// The arc shared between the base cell and the tile of generator `i`.
    pub fn shared_arc(&self, i: usize) -> &GeodesicArc {
        &self.arcs[i % 8]
    }
}

/// Builds the full domain record and verifies every tabulated coordinate.
pub fn build_bolza_domain() -> Result<FundamentalDomain> {
    let group = fuchsian::build_gamma8()?;
    let rc = bolza_critical_radius(&group)?;
    let va = bolza_vertex_angles();
    let phi0 = va.phi0;
    // rho* from the chord construction at half-angle pi/8
    let rho_star = 1.0 - (rc * rc - (2.0 + 2.0_f64.sqrt()).sqrt() * rc + 1.0).sqrt();
    let dual_radius = (2.0 * (2.0_f64.sqrt() - 1.0)).sqrt();

    let mut vertices = [DiskPoint { x: 0.0, y: 0.0 }; 8];
    for (n, v) in vertices.iter_mut().enumerate() {
        let computed = DiskPoint::polar(rc, phi0 + n as f64 * PI / 4.0);
        let table = vertex_direction_radical(n);
        let tx = table[0].value() * rc;
        let ty = table[1].value() * rc;
        let residual = (computed.x - tx).abs().max((computed.y - ty).abs());
        if residual > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("vertex {n}"),
                residual,
            });
        }
        *v = computed;
    }

    let mut midpoints = [DiskPoint { x: 0.0, y: 0.0 }; 8];
    for (idx, q) in midpoints.iter_mut().enumerate() {
        let i = idx + 1;
        let ang = phi0 + PI / 8.0 + idx as f64 * PI / 4.0;
        let computed = DiskPoint::polar(rho_star, ang);
        let table = midpoint_direction_radical(i);
        let tx = table[0].value() * rho_star;
        let ty = table[1].value() * rho_star;
        let residual = (computed.x - tx).abs().max((computed.y - ty).abs());
        if residual > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("midpoint {i}"),
                residual,
            });
        }
        *q = computed;
    }

    let mut dual_vertices = [DiskPoint { x: 0.0, y: 0.0 }; 8];
    for (i, d) in dual_vertices.iter_mut().enumerate() {
        let img = group.generators[i].apply_disk(DiskPoint { x: 0.0, y: 0.0 })?;
        let residual = (img.radius() - dual_radius).abs();
        if residual > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("dual vertex {i} radius"),
                residual,
            });
        }
        *d = img;
    }

    // Dirichlet corners: adjacent bisector arcs cross at radius 2^{-1/4}
    let corner_radius = 2.0_f64.powf(-0.25);
    let mut corners = [DiskPoint { x: 0.0, y: 0.0 }; 8];
    for (n, c) in corners.iter_mut().enumerate() {
        *c = DiskPoint::polar(corner_radius, PI / 8.0 + n as f64 * PI / 4.0);
    }
    // both adjacent norm differences must vanish at each corner
    for (n, c) in corners.iter().enumerate() {
        // corner n lies between arcs facing n pi/4 and (n+1) pi/4, i.e. the
        // zero sets of the generators opposite those directions
        for k in [(n + 4) % 8, (n + 5) % 8] {
            let nd = norm_diff(&group.generators[k], *c)?;
            if nd.abs() > 1e-10 {
                return Err(Error::TableMismatch {
                    what: format!("corner {n} on bisector of generator {k}"),
                    residual: nd.abs(),
                });
            }
        }
    }
    let arcs: [GeodesicArc; 8] = std::array::from_fn(|i| {
        models::general_geodesic(corners[(i + 7) % 8], corners[i]).expect("corner arc")
    });

    Ok(FundamentalDomain {
        group,
        critical_radius: rc,
        phi0,
        vertices,
        midpoints,
        dual_radius,
        dual_vertices,
        midpoint_radius: rho_star,
        corners,
        arcs,
    })
}

/// Tessellation mode of the octagon.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum TessellationMode {
    Triangular,
    Quadrangular,
}

/// Face/edge/vertex counts of a domain tessellation before and after the
/// boundary identification, with the face polygons as point chains.
#[derive(Debug, Clone, serde::Serialize)]
pub struct DomainTessellation {
    pub mode: TessellationMode,
    pub raw_faces: usize,
    pub raw_edges: usize,
    pub raw_vertices: usize,
    pub faces: usize,
    pub edges: usize,
    pub vertices: usize,
    pub euler_characteristic: i64,
    pub genus: i64,
    /// Face polygons as closed chains of disk points.
    #[serde(skip)]
    pub face_polygons: Vec<Vec<DiskPoint>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
enum Label {
    Center,
    Vertex(usize),
    Midpoint(usize), // 1..=8
}

struct UnionFind<T: std::hash::Hash + Eq + Clone + Ord> {
    parent: std::collections::HashMap<T, T>,
}

impl<T: std::hash::Hash + Eq + Clone + Ord> UnionFind<T> {
    fn new() -> Self {
        Self {
            parent: std::collections::HashMap::new(),
        }
    }
    fn find(&mut self, x: &T) -> T {
        let p = self.parent.get(x).cloned().unwrap_or_else(|| x.clone());
        if &p == x {
            p
        } else {
            let root = self.find(&p);
            self.parent.insert(x.clone(), root.clone());
            root
        }
    }
    fn union(&mut self, a: &T, b: &T) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent.insert(hi, lo);
        }
    }
    fn classes(&mut self, all: &[T]) -> usize {
        let mut roots = std::collections::HashSet::new();
        for x in all {
            roots.insert(self.find(x));
        }
        roots.len()
    }
}

type EdgeKey = (Label, Label);

fn edge_key(a: Label, b: Label) -> EdgeKey {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Tessellates the octagon by triangles (all midpoints as extra vertices)
/// or quadrangles (alternating midpoints), then applies the opposite-edge
/// identification `edge_n ~ edge_{n+4}` (orientation reversed, midpoints
/// matched) and counts the quotient complex.
pub fn tessellate_domain(
    domain: &FundamentalDomain,
    mode: TessellationMode,
) -> DomainTessellation {
    use Label::*;
    // boundary edge n runs p_n -> q_{n+1} -> p_{n+1}
    let mut faces: Vec<Vec<Label>> = Vec::new();
    match mode {
        TessellationMode::Triangular => {
            for i in 1..=8usize {
                let j = i % 8 + 1;
                faces.push(vec![Center, Midpoint(i), Midpoint(j)]);
                // outer triangle around vertex i (between midpoints i, i+1)
                faces.push(vec![Midpoint(i), Vertex(i % 8), Midpoint(j)]);
            }
        }
        TessellationMode::Quadrangular => {
            faces.push(vec![Midpoint(2), Midpoint(4), Midpoint(6), Midpoint(8)]);
            for k in [2usize, 4, 6, 8] {
                let next = if k == 8 { 2 } else { k + 2 };
                // q_k -> p_k -> p_{k+1} -> q_{k+2}
                faces.push(vec![
                    Midpoint(k),
                    Vertex(k % 8),
                    Vertex((k + 1) % 8),
                    Midpoint(next),
                ]);
            }
        }
    }
    // raw counts
    let mut edge_set: std::collections::HashSet<EdgeKey> = std::collections::HashSet::new();
    let mut vertex_set: std::collections::HashSet<Label> = std::collections::HashSet::new();
    for f in &faces {
        for i in 0..f.len() {
            let a = f[i];
            let b = f[(i + 1) % f.len()];
            edge_set.insert(edge_key(a, b));
            vertex_set.insert(a);
        }
    }
    let raw_faces = faces.len();
    let raw_edges = edge_set.len();
    let raw_vertices = vertex_set.len();

    // identification: edge_n (p_n, q_{n+1}, p_{n+1}) ~ edge_{n+4} reversed
    let mut vuf: UnionFind<Label> = UnionFind::new();
    let mut euf: UnionFind<EdgeKey> = UnionFind::new();
    for n in 0..8usize {
        let m = (n + 4) % 8;
        let (pa, qa, pb) = (Vertex(n), Midpoint(n + 1), Vertex((n + 1) % 8));
        let (pc, qc, pd) = (Vertex((m + 1) % 8), Midpoint(m + 1), Vertex(m));
        // reversed traversal: p_n -> p_{m+1}, q_{n+1} -> q_{m+1}, p_{n+1} -> p_m
        vuf.union(&pa, &pc);
        vuf.union(&qa, &qc);
        vuf.union(&pb, &pd);
        if mode == TessellationMode::Triangular || n % 2 == 1 {
            // split boundary edge: the two halves pair crosswise
            euf.union(&edge_key(pa, qa), &edge_key(pc, qc));
            euf.union(&edge_key(qa, pb), &edge_key(qc, pd));
        } else {
            // unsplit boundary edge in the quadrangular mode
            euf.union(&edge_key(pa, pb), &edge_key(pc, pd));
        }
    }
    let verts: Vec<Label> = vertex_set.iter().cloned().collect();
    let vertices = vuf.classes(&verts);
    let edges_list: Vec<EdgeKey> = edge_set.iter().cloned().collect();
    let edges = euf.classes(&edges_list);
    let euler_characteristic = raw_faces as i64 - edges as i64 + vertices as i64;
    let genus = 1 - euler_characteristic / 2;

    let point_of = |l: &Label| match l {
        Center => DiskPoint { x: 0.0, y: 0.0 },
        Vertex(n) => domain.vertices[*n],
        Midpoint(i) => domain.midpoints[i - 1],
    };
    let face_polygons = faces
        .iter()
        .map(|f| f.iter().map(point_of).collect())
        .collect();

    DomainTessellation {
        mode,
        raw_faces,
        raw_edges,
        raw_vertices,
        faces: raw_faces,
        edges,
        vertices,
        euler_characteristic,
        genus,
        face_polygons,
    }
}

/// Images of the Dirichlet cell under all words of length at most
/// `max_word_len` (capped at 6): tiles of the disk tessellation.
pub fn expand_tiling(domain: &FundamentalDomain, max_word_len: usize) -> Result<Vec<DomainCopy>> {
    if max_word_len > 6 {
        return Err(Error::EnumerationCap(6));
    }
    let words = fuchsian::enumerate_words(&domain.group, max_word_len)?;
    let mut out = Vec::with_capacity(words.len());
    for g in words {
        let corners: Vec<DiskPoint> = domain
            .corners
            .iter()
            .map(|c| g.apply_disk(*c))
            .collect::<Result<_>>()?;
        let arcs: Vec<GeodesicArc> = (0..8)
            .map(|i| models::general_geodesic(corners[(i + 7) % 8], corners[i]))
            .collect::<Result<_>>()?;
        out.push(DomainCopy {
            word: g.word.clone(),
            corners,
            arcs,
        });
    }
    Ok(out)
}

/// Symmetric Hausdorff distance between two arcs, estimated on `n` samples.
pub fn arc_hausdorff(a: &GeodesicArc, b: &GeodesicArc, n: usize) -> f64 {
    let sample = |arc: &GeodesicArc| -> Vec<DiskPoint> {
        (0..=n)
            .map(|k| arc.point_at(k as f64 / n as f64))
            .collect()
    };
    let pa = sample(a);
    let pb = sample(b);
    let dir = |xs: &[DiskPoint], ys: &[DiskPoint]| -> f64 {
        xs.iter()
            .map(|x| {
                ys.iter()
                    .map(|y| ((x.x - y.x).powi(2) + (x.y - y.y).powi(2)).sqrt())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max)
    };
    dir(&pa, &pb).max(dir(&pb, &pa))
}

/// The sixteen tile-center grid points of the genus-3 quartic group
/// (generator images of the origin) and the inner octagon, all verified
/// against their radical tables.
#[derive(Debug, Clone)]
pub struct FermatGrids {
    /// Odd-generator images, radius `sqrt(2 sqrt 2 / 3)`.
    pub p_points: [DiskPoint; 8],
    /// Even-generator images, same radius.
    pub q_points: [DiskPoint; 8],
    /// Images of the origin under first-power conjugates, radius
    /// `sqrt(sqrt 2 - 1)`.
    pub inner_octagon: [DiskPoint; 8],
    pub outer_radius: f64,
    pub inner_radius: f64,
}

/// Radical tables of the sixteen outer grid points.
fn fermat_p_radical(a: usize) -> [RadicalExpr; 2] {
    let u = (1 + r2()).sqrt() / 3;
    let v = (5 * r2() - 1).sqrt() / 3;
    let w = (r2() - 1).sqrt() / 3;
    let x = (1 + 5 * r2()).sqrt() / 3;
    match a {
        1 => [u, v],
        2 => [-w, x],
        3 => [-v, u],
        4 => [-x, -w],
        5 => [-u, -v],
        6 => [w, -x],
        7 => [v, -u],
        8 => [x, w],
        _ => panic!("index"),
    }
}

fn fermat_q_radical(a: usize) -> [RadicalExpr; 2] {
    let u = (1 + r2()).sqrt() / 3;
    let v = (5 * r2() - 1).sqrt() / 3;
    let w = (r2() - 1).sqrt() / 3;
    let x = (1 + 5 * r2()).sqrt() / 3;
    match a {
        1 => [w, x],
        2 => [-u, v],
        3 => [-x, w],
        4 => [-v, -u],
        5 => [-w, -x],
        6 => [u, -v],
        7 => [x, -w],
        8 => [v, u],
        _ => panic!("index"),
    }
}

fn inner_octagon_radical(m: usize) -> [RadicalExpr; 2] {
    let h = (1 / r2() - RadicalExpr::rat(1, 2)).sqrt();
    let f = (r2() - 1).sqrt();
    let z = RadicalExpr::int(0);
    match m {
        1 => [h.clone(), h],
        2 => [z, f],
        3 => [-h.clone(), h],
        4 => [-f, z],
        5 => [-h.clone(), -h],
        6 => [z, -f],
        7 => [h.clone(), -h],
        8 => [f, z],
        _ => panic!("index"),
    }
}

/// Builds the dual grids of the sixteen-generator group and verifies every
/// point against its radical table (1e-10) and the two radii.
pub fn fermat_dual_grids() -> Result<FermatGrids> {
    let tg = fuchsian::build_delta832()?;
    let g16 = fuchsian::build_gamma16()?;
    let origin = DiskPoint { x: 0.0, y: 0.0 };
    let outer_radius = (2.0 * 2.0_f64.sqrt() / 3.0).sqrt();
    let inner_radius = (2.0_f64.sqrt() - 1.0).sqrt();

    let mut p_points = [origin; 8];
    let mut q_points = [origin; 8];
    for a in 1..=8usize {
        let p = g16.generators[2 * a - 2].apply_disk(origin)?;
        let table = fermat_p_radical(a);
        let residual = (p.x - table[0].value()).abs().max((p.y - table[1].value()).abs());
        if residual > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("outer grid point P{a}"),
                residual,
            });
        }
        if (p.radius() - outer_radius).abs() > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("radius of P{a}"),
                residual: (p.radius() - outer_radius).abs(),
            });
        }
        p_points[a - 1] = p;
        let q = g16.generators[2 * a - 1].apply_disk(origin)?;
        let table = fermat_q_radical(a);
        let residual = (q.x - table[0].value()).abs().max((q.y - table[1].value()).abs());
        if residual > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("outer grid point Q{a}"),
                residual,
            });
        }
        q_points[a - 1] = q;
    }

    let mut inner_octagon = [origin; 8];
    for m in 0..8usize {
        let conj = fuchsian::power(&tg.t, -(m as i32))
            .mul(&tg.u)
            .mul(&fuchsian::power(&tg.t, m as i32));
        let p = conj.apply_disk(origin)?;
        let table = inner_octagon_radical(m + 1);
        let residual = (p.x - table[0].value()).abs().max((p.y - table[1].value()).abs());
        if residual > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("inner octagon point {}", m + 1),
                residual,
            });
        }
        if (p.radius() - inner_radius).abs() > 1e-10 {
            return Err(Error::TableMismatch {
                what: format!("inner octagon radius {}", m + 1),
                residual: (p.radius() - inner_radius).abs(),
            });
        }
        inner_octagon[m] = p;
    }

    Ok(FermatGrids {
        p_points,
        q_points,
        inner_octagon,
        outer_radius,
        inner_radius,
    })
}
