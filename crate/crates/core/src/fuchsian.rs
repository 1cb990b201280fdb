//! The octagonal tiling group and its Fuchsian subgroups as explicit
//! `2x2` matrix groups: generators in nested radicals, normality
//! verification against the conjugation tables, the isometry length
//! spectrum, and breadth-first word enumeration.

use crate::models::{self, DiskPoint, SolvPoint, UhpPoint};
use crate::numerics::RadicalExpr;
use crate::{Error, Result, Tolerances};
use nalgebra::Matrix2;
use std::collections::HashMap;

/// A `2x2` unit-determinant matrix identified up to global sign, optionally
/// carrying a word in named generators.
#[derive(Debug, Clone)]
pub struct Psl2Element {
    pub m: Matrix2<f64>,
    /// Generator symbols with exponents, e.g. `[("T", -1), ("W", 1), ("T", 1)]`.
    pub word: Vec<(String, i32)>,
}

impl Psl2Element {
    pub fn new(m: Matrix2<f64>) -> Self {
        Self { m, word: vec![] }
    }

    pub fn with_word(m: Matrix2<f64>, word: Vec<(String, i32)>) -> Self {
        Self { m, word }
    }

    pub fn identity() -> Self {
        Self::new(Matrix2::identity())
    }

    pub fn det(&self) -> f64 {
        self.m[(0, 0)] * self.m[(1, 1)] - self.m[(0, 1)] * self.m[(1, 0)]
    }

    pub fn trace(&self) -> f64 {
        self.m[(0, 0)] + self.m[(1, 1)]
    }

    /// Unit-determinant inverse `[[d, -b], [-c, a]]`.
    pub fn inverse(&self) -> Self {
        let m = self.m;
        let inv = Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]);
        let word: Vec<(String, i32)> = self
            .word
            .iter()
            .rev()
            .map(|(s, e)| (s.clone(), -e))
            .collect();
        Self { m: inv, word }
    }

    pub fn mul(&self, rhs: &Psl2Element) -> Self {
        let mut word = self.word.clone();
        word.extend(rhs.word.iter().cloned());
        Self {
            m: self.m * rhs.m,
            word,
        }
    }

    /// Sign-canonical matrix: the entry of largest magnitude is positive.
    pub fn canonical(&self) -> Matrix2<f64> {
        let m = self.m;
        let vals = [m[(0, 0)], m[(0, 1)], m[(1, 0)], m[(1, 1)]];
        let mut best = 0usize;
        for (i, v) in vals.iter().enumerate() {
            if v.abs() > vals[best].abs() {
                best = i;
            }
        }
        if vals[best] < 0.0 {
            -m
        } else {
            m
        }
    }

    /// Sign-insensitive equality within `tol` (max-entry norm).
    pub fn approx_eq(&self, rhs: &Psl2Element, tol: f64) -> bool {
        sign_free_residual(&self.m, &rhs.m) < tol
    }

    /// Möbius action on the upper half plane.
    pub fn apply_uhp(&self, z: UhpPoint) -> Result<UhpPoint> {
        let (a, b, c, d) = (
            self.m[(0, 0)],
            self.m[(0, 1)],
            self.m[(1, 0)],
            self.m[(1, 1)],
        );
        let den_re = c * z.re + d;
        let den_im = c * z.im;
        let num_re = a * z.re + b;
        let num_im = a * z.im;
        let den2 = den_re * den_re + den_im * den_im;
        if den2 == 0.0 {
            return Err(Error::Singular("Moebius action".into()));
        }
        UhpPoint::new(
            (num_re * den_re + num_im * den_im) / den2,
            (num_im * den_re - num_re * den_im) / den2,
        )
    }

    /// Action transported to the Poincaré disk.
    pub fn apply_disk(&self, p: DiskPoint) -> Result<DiskPoint> {
        Ok(models::uhp_to_disk(self.apply_uhp(models::disk_to_uhp(p)?)?))
    }

    /// Action transported to solvable coordinates of the plane.
    pub fn apply_solv(&self, p: &SolvPoint) -> Result<SolvPoint> {
        models::uhp_to_solv(self.apply_uhp(models::solv_to_uhp(p))?)
    }
}

/// `min(|A - B|, |A + B|)` in the max-entry norm.
pub fn sign_free_residual(a: &Matrix2<f64>, b: &Matrix2<f64>) -> f64 {
    let d1 = (a - b).iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let d2 = (a + b).iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    d1.min(d2)
}

/// Integer power of a group element.
pub fn power(g: &Psl2Element, k: i32) -> Psl2Element {
    let base = if k < 0 { g.inverse() } else { g.clone() };
    let mut out = Psl2Element::identity();
    for _ in 0..k.unsigned_abs() {
        out = out.mul(&base);
    }
    out
}

// ---------------------------------------------------------------------------
// radical generator tables
// ---------------------------------------------------------------------------

fn r2() -> RadicalExpr {
    RadicalExpr::int(2).sqrt()
}

/// `sqrt(1 + sqrt 2)`
fn rad_a() -> RadicalExpr {
    (1 + r2()).sqrt()
}

/// `sqrt(2 (1 + sqrt 2))`
fn rad_b() -> RadicalExpr {
    (2 * (1 + r2())).sqrt()
}

fn eval2(rows: [[RadicalExpr; 2]; 2]) -> Matrix2<f64> {
    Matrix2::new(
        rows[0][0].value(),
        rows[0][1].value(),
        rows[1][0].value(),
        rows[1][1].value(),
    )
}

/// Radical entries of the order-8 elliptic generator.
pub fn t_radical() -> [[RadicalExpr; 2]; 2] {
    let c = (r2() + 2).sqrt() / 2;
    let s = (2 - r2()).sqrt() / 2;
    [[c.clone(), -s.clone()], [s, c]]
}

/// Radical entries of the order-3 elliptic generator.
pub fn s_radical() -> [[RadicalExpr; 2]; 2] {
    [
        [
            (RadicalExpr::int(-1) + (r2() - 1).sqrt()) / 2,
            RadicalExpr::int(1) / (r2() + (2 * (r2() - 1)).sqrt()),
        ],
        [
            (RadicalExpr::int(-1) - r2() - rad_a()) / 2,
            (RadicalExpr::int(-1) - (r2() - 1).sqrt()) / 2,
        ],
    ]
}

/// Radical entries of the order-2 generator.
pub fn r_radical() -> [[RadicalExpr; 2]; 2] {
    let q = RadicalExpr::int(1) / (2 * r2()).sqrt(); // 2^{-3/4}
    [
        [
            q.clone(),
            (RadicalExpr::int(1) + RadicalExpr::rat(3, 2) / r2() - rad_a()).sqrt(),
        ],
        [
            -((RadicalExpr::int(1) + RadicalExpr::rat(3, 2) / r2() + rad_a()).sqrt()),
            -q,
        ],
    ]
}

/// Radical entries of the hyperbolic element `U = T R S = T^2 S^2`.
pub fn u_radical() -> [[RadicalExpr; 2]; 2] {
    [
        [
            (RadicalExpr::int(-1) - r2() - rad_a()) / 2,
            (RadicalExpr::int(-1) + (r2() - 1).sqrt()) / 2,
        ],
        [
            (RadicalExpr::int(1) + (r2() - 1).sqrt()) / 2,
            (RadicalExpr::int(-1) - r2() + rad_a()) / 2,
        ],
    ]
}

/// Radical entries of the word `QU = U^3`.
pub fn qu_radical() -> [[RadicalExpr; 2]; 2] {
    [
        [
            RadicalExpr::int(-2) - r2() - (7 + 5 * r2()).sqrt(),
            RadicalExpr::int(-1) - r2() + rad_a(),
        ],
        [
            RadicalExpr::int(1) + r2() + rad_a(),
            RadicalExpr::int(-2) - r2() + (1 + r2()) * rad_a(),
        ],
    ]
}

/// Radical entries of the diagonal translation `W = T^4 S T^4 S^2`.
pub fn w_radical() -> [[RadicalExpr; 2]; 2] {
    [
        [RadicalExpr::int(-1) - r2() - rad_b(), RadicalExpr::int(0)],
        [RadicalExpr::int(0), RadicalExpr::int(-1) - r2() + rad_b()],
    ]
}

/// Radical entries of the eight octagon-group generators, index `m = 0..8`.
pub fn kf_radical(m: usize) -> [[RadicalExpr; 2]; 2] {
    let c = RadicalExpr::int(-1) - r2();
    let a = rad_a();
    let b = rad_b();
    match m {
        0 => [
            [c.clone() - b.clone(), RadicalExpr::int(0)],
            [RadicalExpr::int(0), c + b],
        ],
        1 => [[c.clone() - a.clone(), a.clone()], [a, c + rad_a()]],
        2 => [[c.clone(), b.clone()], [b, c]],
        3 => [[c.clone() + a.clone(), a.clone()], [a, c - rad_a()]],
        4 => [
            [c.clone() + b.clone(), RadicalExpr::int(0)],
            [RadicalExpr::int(0), c - b],
        ],
        5 => [[c.clone() + a.clone(), -a.clone()], [-a, c - rad_a()]],
        6 => [[c.clone(), -b.clone()], [-b, c]],
        7 => [[c.clone() - a.clone(), -a.clone()], [-a, c + rad_a()]],
        _ => panic!("generator index out of range"),
    }
}

// ---------------------------------------------------------------------------
// groups
// ---------------------------------------------------------------------------

/// The three tiling-group generators with their relations verified.
#[derive(Debug, Clone)]
pub struct TilingGroup {
    pub t: Psl2Element,
    pub s: Psl2Element,
    pub r: Psl2Element,
    pub u: Psl2Element,
}

/// Builds the order-8/3/2 triple `(T, S, R)` from the radical tables and
/// verifies `T^8 = S^3 = R^2 = T S R = 1` up to sign, plus `U = T R S =
/// T^2 S^2` against its own table.
pub fn build_delta832() -> Result<TilingGroup> {
    let tol = Tolerances::default();
    let t = Psl2Element::with_word(eval2(t_radical()), vec![("T".into(), 1)]);
    let s = Psl2Element::with_word(eval2(s_radical()), vec![("S".into(), 1)]);
    let r = Psl2Element::with_word(eval2(r_radical()), vec![("R".into(), 1)]);
    let id = Matrix2::identity();
    let checks = [
        ("T^8", sign_free_residual(&power(&t, 8).m, &id)),
        ("S^3", sign_free_residual(&power(&s, 3).m, &id)),
        ("R^2", sign_free_residual(&(r.m * r.m), &id)),
        ("T S R", sign_free_residual(&(t.m * s.m * r.m), &id)),
        (
            "T R S = T^2 S^2",
            sign_free_residual(&(t.m * r.m * s.m), &(t.m * t.m * s.m * s.m)),
        ),
        (
            "U table",
            sign_free_residual(&(t.m * t.m * s.m * s.m), &eval2(u_radical())),
        ),
    ];
    for (relation, residual) in checks {
        if residual > tol.relation_tol {
            return Err(Error::RelationFailure {
                relation: relation.into(),
                residual,
            });
        }
    }
    let u = Psl2Element::with_word(eval2(u_radical()), vec![("U".into(), 1)]);
    Ok(TilingGroup { t, s, r, u })
}

/// A finitely generated Fuchsian group: generators, the involution pairing
/// each generator with its inverse, and a name tag.
#[derive(Debug, Clone)]
pub struct FuchsianGroup {
    pub name: String,
    pub generators: Vec<Psl2Element>,
    /// `inverse_pairing[i] = j` with `generators[i] * generators[j] = 1`.
    pub inverse_pairing: Vec<usize>,
}

impl FuchsianGroup {
    fn validate(&self, tol: &Tolerances) -> Result<()> {
        let id = Matrix2::identity();
        for (i, g) in self.generators.iter().enumerate() {
            if (g.det() - 1.0).abs() > tol.relation_tol {
                return Err(Error::RelationFailure {
                    relation: format!("det {}[{i}]", self.name),
                    residual: (g.det() - 1.0).abs(),
                });
            }
            if g.trace().abs() <= 2.0 + 1e-9 {
                return Err(Error::RelationFailure {
                    relation: format!("{}[{i}] hyperbolic", self.name),
                    residual: 2.0 - g.trace().abs(),
                });
            }
            let j = self.inverse_pairing[i];
            let residual = sign_free_residual(&(g.m * self.generators[j].m), &id);
            if residual > tol.relation_tol {
                return Err(Error::RelationFailure {
                    relation: format!("{}[{i}] * {}[{j}] = 1", self.name, self.name),
                    residual,
                });
            }
        }
        Ok(())
    }
}

/// The sixteen quartic-surface generators, assembled as conjugates of
/// `QU = U^3` (odd slots) and of its `R`-conjugate (even slots) by powers
/// of `T`. Verifies the eight tabulated inverse pairs and hyperbolicity.
pub fn build_gamma16() -> Result<FuchsianGroup> {
    let tg = build_delta832()?;
    let qu = Psl2Element::with_word(eval2(qu_radical()), vec![("QU".into(), 1)]);
    let residual = sign_free_residual(&power(&tg.u, 3).m, &qu.m);
    if residual > 1e-10 {
        return Err(Error::TableMismatch {
            what: "QU = U^3".into(),
            residual,
        });
    }
    let uq = Psl2Element::with_word(tg.r.m * qu.m * tg.r.m, vec![("UQ".into(), 1)]);
    let mut slots: Vec<(usize, Psl2Element)> = Vec::with_capacity(16);
    for m in 0..8i32 {
        let fp = power(&tg.t, -m).mul(&qu).mul(&power(&tg.t, m));
        let fm = power(&tg.t, -m - 6).mul(&uq).mul(&power(&tg.t, m + 6));
        slots.push((2 * m as usize + 1, fp));
        slots.push((2 * (m as usize + 1), fm));
    }
    slots.sort_by_key(|(p, _)| *p);
    let generators: Vec<Psl2Element> = slots
        .into_iter()
        .map(|(p, mut g)| {
            g.word = vec![(format!("O{p}"), 1)];
            g
        })
        .collect();
    let pairs = [
        (1, 6),
        (2, 13),
        (3, 8),
        (4, 15),
        (5, 10),
        (7, 12),
        (9, 14),
        (11, 16),
    ];
    let mut inverse_pairing = vec![usize::MAX; 16];
    for (a, b) in pairs {
        inverse_pairing[a - 1] = b - 1;
        inverse_pairing[b - 1] = a - 1;
    }
    let group = FuchsianGroup {
        name: "Gamma16".into(),
        generators,
        inverse_pairing,
    };
    group.validate(&Tolerances::default())?;
    Ok(group)
}

/// The eight octagon-group generators `KF_m = T^{-m} W T^m` against their
/// radical tables; inverses pair opposite indices `m <-> m + 4`.
pub fn build_gamma8() -> Result<FuchsianGroup> {
    let tg = build_delta832()?;
    let w = eval2(w_radical());
    let t4 = power(&tg.t, 4);
    let word_w = t4.m * tg.s.m * t4.m * tg.s.m * tg.s.m;
    let residual = sign_free_residual(&word_w, &w);
    if residual > 1e-10 {
        return Err(Error::TableMismatch {
            what: "W = T^4 S T^4 S^2".into(),
            residual,
        });
    }
    let mut generators = Vec::with_capacity(8);
    for m in 0..8 {
        let conj = power(&tg.t, -(m as i32)).m * w * power(&tg.t, m as i32).m;
        let table = eval2(kf_radical(m));
        let residual = sign_free_residual(&conj, &table);
        if residual > 1e-12 {
            return Err(Error::TableMismatch {
                what: format!("KF_{m} = T^-{m} W T^{m}"),
                residual,
            });
        }
        generators.push(Psl2Element::with_word(table, vec![(format!("KF{m}"), 1)]));
    }
    let inverse_pairing = (0..8).map(|i| (i + 4) % 8).collect();
    let group = FuchsianGroup {
        name: "Gamma8".into(),
        generators,
        inverse_pairing,
    };
    group.validate(&Tolerances::default())?;
    Ok(group)
}

// ---------------------------------------------------------------------------
// normality verification
// ---------------------------------------------------------------------------

/// One verified conjugation identity.
#[derive(Debug, Clone, serde::Serialize)]
pub struct IdentityCheck {
    pub lhs: String,
    pub rhs: String,
    pub residual: f64,
}

/// Report of a conjugation-table verification run.
#[derive(Debug, Clone, serde::Serialize)]
pub struct NormalityReport {
    pub group: String,
    pub ambient: String,
    pub identities: Vec<IdentityCheck>,
    pub max_residual: f64,
}

impl NormalityReport {
    pub fn all_within(&self, tol: f64) -> bool {
        self.max_residual < tol
    }
}

fn word_of(group: &FuchsianGroup, indices: &[usize]) -> Psl2Element {
    indices.iter().fold(Psl2Element::identity(), |acc, &i| {
        acc.mul(&group.generators[i - 1])
    })
}

/// Verifies the `T`-conjugation table of the sixteen-generator group:
/// `T^{-1} O_p T = O_{p+2 mod 16}`.
pub fn verify_gamma16_under_t(tg: &TilingGroup, g16: &FuchsianGroup) -> NormalityReport {
    let mut identities = Vec::new();
    for p in 1..=16usize {
        let q = (p + 1) % 16 + 1; // p + 2 in 1-based cyclic numbering
        let lhs = tg.t.inverse().mul(&g16.generators[p - 1]).mul(&tg.t);
        let residual = sign_free_residual(&lhs.m, &g16.generators[q - 1].m);
        identities.push(IdentityCheck {
            lhs: format!("T^-1 O{p} T"),
            rhs: format!("O{q}"),
            residual,
        });
    }
    let max_residual = identities.iter().fold(0.0_f64, |m, c| m.max(c.residual));
    NormalityReport {
        group: "Gamma16".into(),
        ambient: "T".into(),
        identities,
        max_residual,
    }
}

/// The sixteen `S`-conjugation identities of the sixteen-generator group.
///
/// The tabulated right-hand words record the inverse of the conjugate:
/// `S^2 O_p S = (word)^{-1}` holds for all rows, while the word itself
/// does not; this report checks the inverse reading.
pub fn verify_gamma16_under_s(tg: &TilingGroup, g16: &FuchsianGroup) -> NormalityReport {
    let triples: [(usize, [usize; 3]); 8] = [
        (2, [4, 13, 1]),
        (4, [5, 11, 1]),
        (9, [4, 14, 8]),
        (11, [5, 11, 15]),
        (13, [5, 9, 15]),
        (14, [3, 9, 15]),
        (15, [6, 16, 10]),
        (16, [3, 7, 10]),
    ];
    let singles: [(usize, usize); 8] = [
        (1, 10),
        (3, 1),
        (5, 3),
        (6, 5),
        (7, 4),
        (8, 6),
        (10, 8),
        (12, 15),
    ];
    let s2 = tg.s.mul(&tg.s);
    let mut identities = Vec::new();
    for (p, word) in triples {
        let lhs = s2.mul(&g16.generators[p - 1]).mul(&tg.s);
        let rhs = word_of(g16, &word).inverse();
        identities.push(IdentityCheck {
            lhs: format!("S^2 O{p} S"),
            rhs: format!("(O{} O{} O{})^-1", word[0], word[1], word[2]),
            residual: sign_free_residual(&lhs.m, &rhs.m),
        });
    }
    for (p, q) in singles {
        let lhs = s2.mul(&g16.generators[p - 1]).mul(&tg.s);
        let rhs = g16.generators[q - 1].inverse();
        identities.push(IdentityCheck {
            lhs: format!("S^2 O{p} S"),
            rhs: format!("O{q}^-1"),
            residual: sign_free_residual(&lhs.m, &rhs.m),
        });
    }
    let max_residual = identities.iter().fold(0.0_f64, |m, c| m.max(c.residual));
    NormalityReport {
        group: "Gamma16".into(),
        ambient: "S".into(),
        identities,
        max_residual,
    }
}

/// `T`-conjugation of the octagon group: `T^{-1} KF_i T = KF_{i+1 mod 8}`.
pub fn verify_gamma8_under_t(tg: &TilingGroup, g8: &FuchsianGroup) -> NormalityReport {
    let mut identities = Vec::new();
    for i in 0..8usize {
        let lhs = tg.t.inverse().mul(&g8.generators[i]).mul(&tg.t);
        let residual = sign_free_residual(&lhs.m, &g8.generators[(i + 1) % 8].m);
        identities.push(IdentityCheck {
            lhs: format!("T^-1 KF{i} T"),
            rhs: format!("KF{}", (i + 1) % 8),
            residual,
        });
    }
    let max_residual = identities.iter().fold(0.0_f64, |m, c| m.max(c.residual));
    NormalityReport {
        group: "Gamma8".into(),
        ambient: "T".into(),
        identities,
        max_residual,
    }
}

/// The eight `S`-conjugation identities of the octagon group, as tabulated
/// (1-based names `KF_1..KF_8` refer to the matrices `KF_0..KF_7`).
pub fn verify_gamma8_under_s(tg: &TilingGroup, g8: &FuchsianGroup) -> NormalityReport {
    let odd: [(usize, [usize; 3]); 4] = [
        (1, [1, 5, 4]),
        (3, [5, 2, 7]),
        (5, [1, 5, 8]),
        (7, [3, 6, 1]),
    ];
    let even: [(usize, [usize; 2]); 4] = [(2, [4, 7]), (4, [5, 8]), (6, [3, 8]), (8, [4, 1])];
    let s2 = tg.s.mul(&tg.s);
    let gen = |i: usize| &g8.generators[i - 1];
    let mut identities = Vec::new();
    for (p, w) in odd {
        let lhs = s2.mul(gen(p)).mul(&tg.s);
        let rhs = gen(w[0]).mul(gen(w[1])).mul(gen(w[2]));
        identities.push(IdentityCheck {
            lhs: format!("S^2 KF_{p} S"),
            rhs: format!("KF_{} KF_{} KF_{}", w[0], w[1], w[2]),
            residual: sign_free_residual(&lhs.m, &rhs.m),
        });
    }
    for (p, w) in even {
        let lhs = s2.mul(gen(p)).mul(&tg.s);
        let rhs = gen(w[0]).mul(gen(w[1]));
        identities.push(IdentityCheck {
            lhs: format!("S^2 KF_{p} S"),
            rhs: format!("KF_{} KF_{}", w[0], w[1]),
            residual: sign_free_residual(&lhs.m, &rhs.m),
        });
    }
    let max_residual = identities.iter().fold(0.0_f64, |m, c| m.max(c.residual));
    NormalityReport {
        group: "Gamma8".into(),
        ambient: "S".into(),
        identities,
        max_residual,
    }
}

/// Every conjugation table relevant to normality of both subgroups.
pub fn verify_normality() -> Result<Vec<NormalityReport>> {
    let tg = build_delta832()?;
    let g16 = build_gamma16()?;
    let g8 = build_gamma8()?;
    Ok(vec![
        verify_gamma16_under_t(&tg, &g16),
        verify_gamma16_under_s(&tg, &g16),
        verify_gamma8_under_t(&tg, &g8),
        verify_gamma8_under_s(&tg, &g8),
    ])
}

// ---------------------------------------------------------------------------
// length spectrum and word enumeration
// ---------------------------------------------------------------------------

/// Length of the isometry: `2 arccosh(|tr|/2)` for hyperbolic elements,
/// zero for parabolic and elliptic ones.
pub fn isometry_length(g: &Psl2Element) -> f64 {
    let half_tr = g.trace().abs() / 2.0;
    if half_tr <= 1.0 {
        0.0
    } else {
        2.0 * half_tr.acosh()
    }
}

/// Quantized sign-canonical keys with neighbor probing: robust
/// deduplication of matrices on a 1e-6 grid with 1e-7 matching tolerance.
struct DedupSet {
    buckets: HashMap<[i64; 4], Vec<usize>>,
    mats: Vec<Matrix2<f64>>,
    scale: f64,
    tol: f64,
}

impl DedupSet {
    fn new() -> Self {
        Self {
            buckets: HashMap::new(),
            mats: Vec::new(),
            scale: 1e6,
            tol: 1e-7,
        }
    }

    fn key_of(&self, m: &Matrix2<f64>) -> [i64; 4] {
        [
            (m[(0, 0)] * self.scale).round() as i64,
            (m[(0, 1)] * self.scale).round() as i64,
            (m[(1, 0)] * self.scale).round() as i64,
            (m[(1, 1)] * self.scale).round() as i64,
        ]
    }

    fn contains(&self, g: &Psl2Element) -> bool {
        let c = g.canonical();
        let base = self.key_of(&c);
        for d0 in -1..=1i64 {
            for d1 in -1..=1i64 {
                for d2 in -1..=1i64 {
                    for d3 in -1..=1i64 {
                        let k = [base[0] + d0, base[1] + d1, base[2] + d2, base[3] + d3];
                        if let Some(ids) = self.buckets.get(&k) {
                            for &i in ids {
                                if (self.mats[i] - c)
                                    .iter()
                                    .fold(0.0_f64, |m, x| m.max(x.abs()))
                                    < self.tol
                                {
                                    return true;
                                }
                            }
                        }
                    }
                }
            }
        }
        false
    }

    fn insert(&mut self, g: &Psl2Element) -> bool {
        if self.contains(g) {
            return false;
        }
        let c = g.canonical();
        let key = self.key_of(&c);
        let idx = self.mats.len();
        self.mats.push(c);
        self.buckets.entry(key).or_default().push(idx);
        true
    }
}

/// Breadth-first enumeration of all products of at most `max_len`
/// generators, deduplicated up to sign; each element retains a shortest
/// word. The hard cap on `max_len` is 8.
pub fn enumerate_words(group: &FuchsianGroup, max_len: usize) -> Result<Vec<Psl2Element>> {
    if max_len > 8 {
        return Err(Error::EnumerationCap(8));
    }
    let mut set = DedupSet::new();
    let id = Psl2Element::identity();
    set.insert(&id);
    let mut out = vec![id];
    let mut frontier: Vec<Psl2Element> = vec![Psl2Element::identity()];
    for _ in 0..max_len {
        let mut next = Vec::new();
        for g in &frontier {
            for h in &group.generators {
                let prod = g.mul(h);
                if set.insert(&prod) {
                    out.push(prod.clone());
                    next.push(prod);
                }
            }
        }
        frontier = next;
    }
    Ok(out)
}

/// Membership test (up to sign and tolerance) of a matrix inside an
/// enumerated element list.
pub fn contains_element(elements: &[Psl2Element], g: &Psl2Element, tol: f64) -> bool {
    elements.iter().any(|e| e.approx_eq(g, tol))
}

/// Builds the order 4/3/3 triple as words in the tiling group
/// (`A = T^2`, `B = S`, `C = T^2 S`) and checks the element orders
/// `A^4 = B^3 = C^3 = 1` up to sign. The tabulated matrix for the third
/// generator is its `T^2`-conjugate `S T^2` and is verified as such.
pub fn build_delta433(tg: &TilingGroup) -> Result<(Psl2Element, Psl2Element, Psl2Element)> {
    let a = power(&tg.t, 2);
    let b = tg.s.clone();
    let c = power(&tg.t, 2).mul(&tg.s);
    let id = Matrix2::identity();
    for (name, m, k) in [("A^4", &a, 4), ("B^3", &b, 3), ("C^3", &c, 3)] {
        let residual = sign_free_residual(&power(m, k).m, &id);
        if residual > 1e-10 {
            return Err(Error::RelationFailure {
                relation: name.into(),
                residual,
            });
        }
    }
    let printed_c = {
        let a_ = rad_a();
        eval2([
            [
                (RadicalExpr::int(1) - (r2() - 1).sqrt()) / 2,
                RadicalExpr::rat(1, 2) + 1 / r2() - a_.clone() / 2,
            ],
            [
                (RadicalExpr::int(-1) - r2() - a_) / 2,
                (RadicalExpr::int(1) + (r2() - 1).sqrt()) / 2,
            ],
        ])
    };
    let conj = power(&tg.t, -2).mul(&c).mul(&power(&tg.t, 2));
    let residual = sign_free_residual(&conj.m, &printed_c);
    if residual > 1e-10 {
        return Err(Error::TableMismatch {
            what: "third 4/3/3 generator table".into(),
            residual,
        });
    }
    Ok((a, b, c))
}
