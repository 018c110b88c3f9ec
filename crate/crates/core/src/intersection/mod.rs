//! Topological intersection theory of discs and its holomorphic
//! specialisation.
//!
//! Discs are maps (𝔻, ∂𝔻) → (W, Σ) — here W = D⁴ and Σ a surface in S³ —
//! or local models (ℍ, ℝ) → (ℍ×ℂ, ℝ×ℝ) on a truncated upper half-plane.
//! Intersection points of a pair are located by a bucketed grid scan with
//! Gauss–Newton polish; each isolated record carries a multiplicity:
//!
//! * interior records: the topological degree of (z₁,z₂) ↦ u₁(z₁) − u₂(z₂)
//!   on a small sphere around the record;
//! * transverse boundary records: the sign of the Whitney-sum orientation;
//! * tangential boundary records: the interior multiplicity of the Schwarz
//!   reflections through the real boundary condition.
//!
//! The intersection number u₁•u₂ doubles interior contributions. The
//! embedding defect D(A) = A•A − μ(A) + 2 vanishes exactly for embedded
//! simple holomorphic discs.

#[allow(unused_imports)]
use num_traits::Float;

mod degree;
mod maslov;

pub use degree::degree_on_cube;
pub use maslov::{maslov_index_frame, maslov_rank1, maslov_rank1_with_frame, TOTALLY_REAL_TOL};

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use nalgebra::{Matrix4, Matrix4x2, Vector4};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::standard::StandardDiscParams;

pub(crate) use maslov::wrap_angle;

/// Domain of a disc map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum DiscDomain {
    /// The closed unit disc with boundary |z| = 1.
    Unit,
    /// The closed upper half-plane truncated to |z| ≤ radius, with boundary
    /// Im z = 0 (the truncation arc is not part of the boundary).
    HalfPlane { radius: f64 },
}

impl DiscDomain {
    pub fn contains(&self, z: Complex64, slack: f64) -> bool {
        match self {
            DiscDomain::Unit => z.norm() <= 1.0 + slack,
            DiscDomain::HalfPlane { radius } => z.im >= -slack && z.norm() <= radius + slack,
        }
    }

    pub fn on_boundary(&self, z: Complex64, tol: f64) -> bool {
        match self {
            DiscDomain::Unit => (z.norm() - 1.0).abs() <= tol,
            DiscDomain::HalfPlane { .. } => z.im.abs() <= tol,
        }
    }

    fn grid(&self, n: usize) -> Vec<Complex64> {
        let mut points = Vec::new();
        match self {
            DiscDomain::Unit => {
                for i in 0..=n {
                    for j in 0..=n {
                        let z = Complex64::new(
                            2.0 * i as f64 / n as f64 - 1.0,
                            2.0 * j as f64 / n as f64 - 1.0,
                        );
                        if z.norm() <= 1.0 {
                            points.push(z);
                        }
                    }
                }
                for k in 0..2 * n {
                    points.push(Complex64::from_polar(
                        1.0,
                        core::f64::consts::TAU * k as f64 / (2 * n) as f64,
                    ));
                }
            }
            DiscDomain::HalfPlane { radius } => {
                for i in 0..=n {
                    for j in 0..=(n / 2) {
                        let z = Complex64::new(
                            radius * (2.0 * i as f64 / n as f64 - 1.0),
                            radius * j as f64 / (n / 2) as f64,
                        );
                        if z.norm() <= *radius {
                            points.push(z);
                        }
                    }
                }
                for i in 0..=2 * n {
                    points.push(Complex64::new(
                        radius * (2.0 * i as f64 / (2 * n) as f64 - 1.0),
                        0.0,
                    ));
                }
            }
        }
        points
    }

    fn spacing(&self, n: usize) -> f64 {
        match self {
            DiscDomain::Unit => 2.0 / n as f64,
            DiscDomain::HalfPlane { radius } => 2.0 * radius / n as f64,
        }
    }
}

/// A disc-evaluable map into ℂ² ≅ ℝ⁴.
pub trait DiscMap {
    /// Value at z; must tolerate arguments slightly outside the domain.
    fn eval(&self, z: Complex64) -> Vector4<f64>;

    fn domain(&self) -> DiscDomain;

    /// Whether the boundary lands in ℝ × ℝ of the local model, so that
    /// Schwarz reflection z ↦ conj(u(z̄)) doubles the disc.
    fn has_real_boundary(&self) -> bool {
        false
    }

    /// Real differential, columns ∂/∂x and ∂/∂y, central differences by
    /// default.
    fn d_eval(&self, z: Complex64) -> Matrix4x2<f64> {
        let h = 1e-6;
        let dx = (self.eval(z + Complex64::new(h, 0.0)) - self.eval(z - Complex64::new(h, 0.0)))
            / (2.0 * h);
        let dy = (self.eval(z + Complex64::new(0.0, h)) - self.eval(z - Complex64::new(0.0, h)))
            / (2.0 * h);
        Matrix4x2::from_columns(&[dx, dy])
    }
}

/// A closure-backed disc map.
pub struct FnDisc<F: Fn(Complex64) -> [Complex64; 2]> {
    pub f: F,
    pub domain: DiscDomain,
    pub real_boundary: bool,
}

impl<F: Fn(Complex64) -> [Complex64; 2]> DiscMap for FnDisc<F> {
    fn eval(&self, z: Complex64) -> Vector4<f64> {
        let [a, b] = (self.f)(z);
        Vector4::new(a.re, a.im, b.re, b.im)
    }

    fn domain(&self) -> DiscDomain {
        self.domain
    }

    fn has_real_boundary(&self) -> bool {
        self.real_boundary
    }
}

/// Local model (ℍ, ℝ) → (ℍ×ℂ, ℝ×ℝ): two real-coefficient polynomials
/// (a(z), b(z)) on a truncated half-plane.
#[derive(Clone, Debug)]
pub struct LocalDisc {
    pub a: Vec<f64>,
    pub b: Vec<f64>,
    pub radius: f64,
}

impl LocalDisc {
    pub fn new(a: Vec<f64>, b: Vec<f64>, radius: f64) -> Self {
        Self { a, b, radius }
    }

    /// The reference sheet u(z) = (z, 0).
    pub fn flat(radius: f64) -> Self {
        Self::new(alloc::vec![0.0, 1.0], alloc::vec![], radius)
    }

    /// A graph u(z) = (z, b(z)).
    pub fn graph(b: Vec<f64>, radius: f64) -> Self {
        Self::new(alloc::vec![0.0, 1.0], b, radius)
    }

    fn poly(coeffs: &[f64], z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for &c in coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    fn poly_deriv(coeffs: &[f64], z: Complex64) -> Complex64 {
        let mut acc = Complex64::new(0.0, 0.0);
        for (k, &c) in coeffs.iter().enumerate().skip(1).rev() {
            acc = acc * z + c * k as f64;
        }
        acc
    }

    pub fn components(&self, z: Complex64) -> [Complex64; 2] {
        [Self::poly(&self.a, z), Self::poly(&self.b, z)]
    }

    pub fn deriv(&self, z: Complex64) -> [Complex64; 2] {
        [Self::poly_deriv(&self.a, z), Self::poly_deriv(&self.b, z)]
    }
}

impl DiscMap for LocalDisc {
    fn eval(&self, z: Complex64) -> Vector4<f64> {
        let [a, b] = self.components(z);
        Vector4::new(a.re, a.im, b.re, b.im)
    }

    fn domain(&self) -> DiscDomain {
        DiscDomain::HalfPlane { radius: self.radius }
    }

    fn has_real_boundary(&self) -> bool {
        true
    }

    fn d_eval(&self, z: Complex64) -> Matrix4x2<f64> {
        let [da, db] = self.deriv(z);
        holomorphic_differential(da, db)
    }
}

impl DiscMap for StandardDiscParams {
    fn eval(&self, z: Complex64) -> Vector4<f64> {
        let w = Complex64::from_polar(self.radius(), self.twist()) * z;
        Vector4::new(w.re, w.im, self.s(), self.t())
    }

    fn domain(&self) -> DiscDomain {
        DiscDomain::Unit
    }

    fn d_eval(&self, _z: Complex64) -> Matrix4x2<f64> {
        holomorphic_differential(
            Complex64::from_polar(self.radius(), self.twist()),
            Complex64::new(0.0, 0.0),
        )
    }
}

/// Differential of a holomorphic map with derivative (a′, b′): columns are
/// (a′, b′) and i·(a′, b′) in real coordinates.
pub fn holomorphic_differential(da: Complex64, db: Complex64) -> Matrix4x2<f64> {
    Matrix4x2::from_columns(&[
        Vector4::new(da.re, da.im, db.re, db.im),
        Vector4::new(-da.im, da.re, -db.im, db.re),
    ])
}

/// Componentwise complex conjugation of a point of ℂ².
fn conj4(v: Vector4<f64>) -> Vector4<f64> {
    Vector4::new(v[0], -v[1], v[2], -v[3])
}

/// Schwarz-doubled evaluation through the real boundary condition.
fn eval_doubled(u: &dyn DiscMap, z: Complex64) -> Vector4<f64> {
    if z.im >= 0.0 {
        u.eval(z)
    } else {
        conj4(u.eval(z.conj()))
    }
}

/// Interior or boundary intersection point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum IntersectionKind {
    Interior,
    Boundary,
}

/// One isolated intersection point of a disc pair.
#[derive(Clone, Copy, Debug)]
pub struct IntersectionRecord {
    pub z1: Complex64,
    pub z2: Complex64,
    pub kind: IntersectionKind,
    pub tangential: bool,
    pub multiplicity: i64,
}

/// Search parameters for intersection scans.
#[derive(Clone, Copy, Debug)]
pub struct FindConfig {
    /// Grid resolution per domain axis.
    pub grid: usize,
    /// Records closer than this merge into one.
    pub merge_radius: f64,
    /// Chordal tolerance for classifying a record as boundary.
    pub boundary_tol: f64,
    /// More records than this means the images share a component.
    pub max_records: usize,
    /// Cube subdivision for degree counts.
    pub degree_subdiv: usize,
}

impl Default for FindConfig {
    fn default() -> Self {
        Self {
            grid: 128,
            merge_radius: 1e-7,
            boundary_tol: 1e-4,
            max_records: 64,
            degree_subdiv: 10,
        }
    }
}

/// All isolated intersection points of the pair, with multiplicities.
pub fn find_intersections(
    u1: &dyn DiscMap,
    u2: &dyn DiscMap,
    cfg: &FindConfig,
) -> Result<Vec<IntersectionRecord>> {
    let roots = locate_roots(u1, u2, cfg, None)?;
    let mut records = Vec::with_capacity(roots.len());
    for (z1, z2) in &roots {
        records.push(classify_and_grade(u1, u2, *z1, *z2, &roots, cfg)?);
    }
    Ok(records)
}

/// Ordered self-intersection pairs (z₁, z₂), z₁ ≠ z₂, of one disc; both
/// orders of each geometric crossing are reported.
pub fn self_intersections(u: &dyn DiscMap, cfg: &FindConfig) -> Result<Vec<IntersectionRecord>> {
    // Below the local injectivity radius m/M the disc cannot self-intersect.
    let (min_d, max_d2) = derivative_bounds(u, 48);
    let exclusion = (min_d / max_d2.max(1e-9)).clamp(1e-3, 0.5);
    let roots = locate_roots(u, u, cfg, Some(exclusion))?;
    let mut records = Vec::with_capacity(roots.len());
    for (z1, z2) in &roots {
        records.push(classify_and_grade(u, u, *z1, *z2, &roots, cfg)?);
    }
    Ok(records)
}

/// (min smallest singular value of du, max second-difference bound).
fn derivative_bounds(u: &dyn DiscMap, n: usize) -> (f64, f64) {
    let points = u.domain().grid(n);
    let h = u.domain().spacing(n);
    let mut min_d = f64::INFINITY;
    let mut max_d2 = 0.0_f64;
    let mut prev: Option<Matrix4x2<f64>> = None;
    for z in points {
        let d = u.d_eval(z);
        let sv = d.svd(false, false).singular_values;
        min_d = min_d.min(sv[1]);
        if let Some(p) = prev {
            max_d2 = max_d2.max((d - p).norm() / h);
        }
        prev = Some(d);
    }
    (min_d, max_d2)
}

/// Grid scan + Gauss–Newton polish + clustering. With `exclusion` set, pairs
/// with |z₁ − z₂| below it are skipped (self-intersection mode).
fn locate_roots(
    u1: &dyn DiscMap,
    u2: &dyn DiscMap,
    cfg: &FindConfig,
    exclusion: Option<f64>,
) -> Result<Vec<(Complex64, Complex64)>> {
    let n = cfg.grid;
    let pts1 = u1.domain().grid(n);
    let pts2 = u2.domain().grid(n);
    let h1 = u1.domain().spacing(n);
    let h2 = u2.domain().spacing(n);

    let im1: Vec<Vector4<f64>> = pts1.iter().map(|&z| u1.eval(z)).collect();
    let im2: Vec<Vector4<f64>> = pts2.iter().map(|&z| u2.eval(z)).collect();

    let lip = |u: &dyn DiscMap, pts: &[Complex64]| {
        let mut l: f64 = 0.0;
        for (k, &z) in pts.iter().enumerate() {
            if k % 7 == 0 {
                l = l.max(u.d_eval(z).norm());
            }
        }
        l
    };
    let capture = 3.0 * (lip(u1, &pts1) * h1 + lip(u2, &pts2) * h2);
    let cell = capture.max(1e-12);

    let key = |w: &Vector4<f64>| -> [i64; 4] {
        [
            (w[0] / cell).floor() as i64,
            (w[1] / cell).floor() as i64,
            (w[2] / cell).floor() as i64,
            (w[3] / cell).floor() as i64,
        ]
    };
    let mut buckets: BTreeMap<[i64; 4], Vec<u32>> = BTreeMap::new();
    for (idx, w) in im2.iter().enumerate() {
        buckets.entry(key(w)).or_default().push(idx as u32);
    }

    // Candidate (z1, z2) seeds, deduplicated on a coarse domain lattice.
    let coarse = 2.0 * h1.max(h2);
    let mut seeds: BTreeMap<[i64; 4], (Complex64, Complex64, f64)> = BTreeMap::new();
    for (i, w1) in im1.iter().enumerate() {
        let k0 = key(w1);
        for d0 in -1..=1i64 {
            for d1 in -1..=1i64 {
                for d2 in -1..=1i64 {
                    for d3 in -1..=1i64 {
                        let Some(list) =
                            buckets.get(&[k0[0] + d0, k0[1] + d1, k0[2] + d2, k0[3] + d3])
                        else {
                            continue;
                        };
                        for &j in list {
                            let z1 = pts1[i];
                            let z2 = pts2[j as usize];
                            if let Some(excl) = exclusion {
                                if (z1 - z2).norm() < excl {
                                    continue;
                                }
                            }
                            let gap = (w1 - im2[j as usize]).norm();
                            if gap <= capture {
                                let ck = [
                                    (z1.re / coarse).round() as i64,
                                    (z1.im / coarse).round() as i64,
                                    (z2.re / coarse).round() as i64,
                                    (z2.im / coarse).round() as i64,
                                ];
                                let entry = seeds.entry(ck).or_insert((z1, z2, gap));
                                if gap < entry.2 {
                                    *entry = (z1, z2, gap);
                                }
                            }
                        }
                    }
                }
            }
        }
    }

    // Levenberg-damped Gauss–Newton polish of each seed.
    let scale: f64 = im1
        .iter()
        .chain(im2.iter())
        .fold(1.0_f64, |m, w| m.max(w.norm()));
    let mut roots: Vec<(Complex64, Complex64, f64)> = Vec::new();
    'seed: for (_, &(s1, s2, _)) in seeds.iter() {
        let Some((z1, z2, fnorm)) = polish_pair(u1, u2, s1, s2, scale) else {
            continue;
        };
        if !u1.domain().contains(z1, cfg.boundary_tol) || !u2.domain().contains(z2, cfg.boundary_tol)
        {
            continue;
        }
        if let Some(excl) = exclusion {
            if (z1 - z2).norm() < 0.5 * excl {
                continue;
            }
        }
        if fnorm > 1e-8 * scale {
            continue;
        }
        // merge into an existing cluster?
        for root in &mut roots {
            let dist = (root.0 - z1).norm().hypot((root.1 - z2).norm());
            if dist <= cfg.merge_radius {
                continue 'seed;
            }
            // degenerate (multiplicity > 1) roots polish to a small cloud;
            // merge when the pair midpoint is itself a root
            if dist <= 1e-3 {
                let mid1 = (root.0 + z1) / 2.0;
                let mid2 = (root.1 + z2) / 2.0;
                let fm = (u1.eval(mid1) - u2.eval(mid2)).norm();
                if fm <= 100.0 * (root.2.max(fnorm)).max(1e-13 * scale) {
                    if fnorm < root.2 {
                        *root = (z1, z2, fnorm);
                    }
                    continue 'seed;
                }
            }
        }
        roots.push((z1, z2, fnorm));
        if roots.len() > cfg.max_records {
            return Err(Error::NotNicelyIntersecting);
        }
    }
    Ok(roots.into_iter().map(|(a, b, _)| (a, b)).collect())
}

fn polish_pair(
    u1: &dyn DiscMap,
    u2: &dyn DiscMap,
    mut z1: Complex64,
    mut z2: Complex64,
    scale: f64,
) -> Option<(Complex64, Complex64, f64)> {
    let mut lambda = 1e-10;
    let mut f = u1.eval(z1) - u2.eval(z2);
    for _ in 0..80 {
        if f.norm() <= 1e-14 * scale {
            break;
        }
        let d1 = u1.d_eval(z1);
        let d2 = u2.d_eval(z2);
        let j = Matrix4::from_columns(&[
            d1.column(0).into_owned(),
            d1.column(1).into_owned(),
            -d2.column(0).into_owned(),
            -d2.column(1).into_owned(),
        ]);
        let jtj = j.transpose() * j;
        let rhs = -j.transpose() * f;
        let mut improved = false;
        for _ in 0..12 {
            let damped = jtj + Matrix4::identity() * (lambda * (1.0 + jtj.trace()));
            let Some(step) = damped.lu().solve(&rhs) else {
                lambda *= 10.0;
                continue;
            };
            let c1 = z1 + Complex64::new(step[0], step[1]);
            let c2 = z2 + Complex64::new(step[2], step[3]);
            let fc = u1.eval(c1) - u2.eval(c2);
            if fc.norm() < f.norm() {
                z1 = c1;
                z2 = c2;
                f = fc;
                lambda = (lambda * 0.25).max(1e-14);
                improved = true;
                break;
            }
            lambda *= 10.0;
        }
        if !improved {
            break;
        }
    }
    Some((z1, z2, f.norm()))
}

fn classify_and_grade(
    u1: &dyn DiscMap,
    u2: &dyn DiscMap,
    z1: Complex64,
    z2: Complex64,
    all_roots: &[(Complex64, Complex64)],
    cfg: &FindConfig,
) -> Result<IntersectionRecord> {
    let on_b1 = u1.domain().on_boundary(z1, cfg.boundary_tol);
    let on_b2 = u2.domain().on_boundary(z2, cfg.boundary_tol);
    let kind = if on_b1 && on_b2 {
        IntersectionKind::Boundary
    } else {
        IntersectionKind::Interior
    };

    // tangential ⟺ the image planes fail to span ℝ⁴
    let d1 = u1.d_eval(z1);
    let d2 = u2.d_eval(z2);
    let span = Matrix4::from_columns(&[
        d1.column(0).into_owned(),
        d1.column(1).into_owned(),
        d2.column(0).into_owned(),
        d2.column(1).into_owned(),
    ]);
    let sv = span.svd(false, false).singular_values;
    let tangential = sv[3] <= 1e-6 * sv[0];

    let mut record = IntersectionRecord {
        z1,
        z2,
        kind,
        tangential,
        multiplicity: 0,
    };
    record.multiplicity = match (kind, tangential) {
        (IntersectionKind::Interior, _) => interior_multiplicity(u1, u2, &record, all_roots, cfg)?,
        (IntersectionKind::Boundary, false) => {
            let det = span.determinant();
            if det > 0.0 {
                1
            } else {
                -1
            }
        }
        (IntersectionKind::Boundary, true) => boundary_multiplicity(u1, u2, &record, cfg)?,
    };
    Ok(record)
}

/// Isolation radius: stay below half the gap to the nearest other record and
/// inside the domains.
fn isolation_radius(
    z1: Complex64,
    z2: Complex64,
    all_roots: &[(Complex64, Complex64)],
    interior: bool,
    u1: &dyn DiscMap,
    u2: &dyn DiscMap,
) -> f64 {
    let mut r: f64 = 0.05;
    for &(w1, w2) in all_roots {
        let d = (w1 - z1).norm().max((w2 - z2).norm());
        if d > 1e-9 {
            r = r.min(0.4 * d.max((w1 - z1).norm() + (w2 - z2).norm()));
        }
    }
    if interior {
        let edge = |u: &dyn DiscMap, z: Complex64| match u.domain() {
            DiscDomain::Unit => 1.0 - z.norm(),
            DiscDomain::HalfPlane { .. } => z.im,
        };
        r = r.min(0.9 * edge(u1, z1).max(1e-6)).min(0.9 * edge(u2, z2).max(1e-6));
    }
    r.max(degree::MIN_RADIUS * 2.0)
}

/// Multiplicity of an interior record: topological degree of
/// (z₁,z₂) ↦ u₁(z₁) − u₂(z₂) around the record.
pub fn interior_multiplicity(
    u1: &dyn DiscMap,
    u2: &dyn DiscMap,
    record: &IntersectionRecord,
    all_roots: &[(Complex64, Complex64)],
    cfg: &FindConfig,
) -> Result<i64> {
    if record.kind != IntersectionKind::Interior {
        return Err(Error::Precondition("record is not interior"));
    }
    let center = Vector4::new(record.z1.re, record.z1.im, record.z2.re, record.z2.im);
    let radius = isolation_radius(record.z1, record.z2, all_roots, true, u1, u2);
    let f = |x: &Vector4<f64>| {
        u1.eval(Complex64::new(x[0], x[1])) - u2.eval(Complex64::new(x[2], x[3]))
    };
    degree_on_cube(&f, &center, radius, cfg.degree_subdiv)
}

/// Multiplicity of a boundary record by Schwarz doubling: both discs are
/// extended by reflection through the real boundary condition and the
/// interior multiplicity of the doubled pair is returned.
pub fn boundary_multiplicity(
    u1: &dyn DiscMap,
    u2: &dyn DiscMap,
    record: &IntersectionRecord,
    cfg: &FindConfig,
) -> Result<i64> {
    if record.kind != IntersectionKind::Boundary {
        return Err(Error::Precondition("record is not on the boundary"));
    }
    if !(u1.has_real_boundary() && u2.has_real_boundary()) {
        return Err(Error::Precondition(
            "boundary doubling requires the real-boundary local model",
        ));
    }
    let center = Vector4::new(record.z1.re, 0.0, record.z2.re, 0.0);
    let f = |x: &Vector4<f64>| {
        eval_doubled(u1, Complex64::new(x[0], x[1])) - eval_doubled(u2, Complex64::new(x[2], x[3]))
    };
    degree_on_cube(&f, &center, 0.05, cfg.degree_subdiv)
}

/// u₁ • u₂ = 2 Σ interior multiplicities + Σ boundary multiplicities.
pub fn intersection_number(u1: &dyn DiscMap, u2: &dyn DiscMap, cfg: &FindConfig) -> Result<i64> {
    Ok(records_pairing(&find_intersections(u1, u2, cfg)?))
}

/// The 2·interior + boundary pairing of a record list.
pub fn records_pairing(records: &[IntersectionRecord]) -> i64 {
    records
        .iter()
        .map(|r| match r.kind {
            IntersectionKind::Interior => 2 * r.multiplicity,
            IntersectionKind::Boundary => r.multiplicity,
        })
        .sum()
}

/// Embedding defect D(A) = A•A − μ(A) + 2.
pub fn embedding_defect(self_intersection_number: i64, maslov: i64) -> i64 {
    self_intersection_number - maslov + 2
}

/// D for a disc with a same-class partner: A•A is realised as the
/// intersection number with the partner.
pub fn adjunction_defect(
    u: &dyn DiscMap,
    partner: &dyn DiscMap,
    maslov: i64,
    cfg: &FindConfig,
) -> Result<i64> {
    Ok(embedding_defect(
        intersection_number(u, partner, cfg)?,
        maslov,
    ))
}

/// Minimum of the smallest singular value of du over an interior sample
/// grid, refined around the minimiser; near-zero values signal critical
/// points.
pub fn min_derivative(u: &dyn DiscMap, n: usize) -> (f64, Complex64) {
    let mut best = (f64::INFINITY, Complex64::new(0.0, 0.0));
    for z in u.domain().grid(n) {
        let sv = u.d_eval(z).svd(false, false).singular_values;
        if sv[1] < best.0 {
            best = (sv[1], z);
        }
    }
    // local refinement
    let mut window = u.domain().spacing(n);
    for _ in 0..8 {
        let center = best.1;
        for i in -3..=3 {
            for j in -3..=3 {
                let z = center + Complex64::new(i as f64, j as f64) * (window / 3.0);
                if !u.domain().contains(z, 0.0) {
                    continue;
                }
                let sv = u.d_eval(z).svd(false, false).singular_values;
                if sv[1] < best.0 {
                    best = (sv[1], z);
                }
            }
        }
        window /= 3.0;
    }
    best
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn flat() -> LocalDisc {
        LocalDisc::flat(1.0)
    }

    #[test]
    fn transverse_boundary_model() {
        // u₂(z) = (z, z): one transverse boundary record at (0,0), mult 1
        let u2 = LocalDisc::graph(alloc::vec![0.0, 1.0], 1.0);
        let recs = find_intersections(&flat(), &u2, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.kind, IntersectionKind::Boundary);
        assert!(!r.tangential);
        assert_eq!(r.multiplicity, 1);
        assert!(r.z1.norm() < 1e-6 && r.z2.norm() < 1e-6);
        assert_eq!(records_pairing(&recs), 1);

        // the mirror model (z, −z) has the same multiplicity
        let u2m = LocalDisc::graph(alloc::vec![0.0, -1.0], 1.0);
        let recs = find_intersections(&flat(), &u2m, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].multiplicity, 1);
    }

    #[test]
    fn tangential_boundary_cubic_model() {
        // u₂(z) = (z, z³): tangential boundary intersection of multiplicity 3
        let u2 = LocalDisc::graph(alloc::vec![0.0, 0.0, 0.0, 1.0], 1.0);
        let recs = find_intersections(&flat(), &u2, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        let r = &recs[0];
        assert_eq!(r.kind, IntersectionKind::Boundary);
        assert!(r.tangential);
        assert_eq!(r.multiplicity, 3);
        assert_eq!(records_pairing(&recs), 3);
    }

    #[test]
    fn perturbed_cubic_splits_but_keeps_the_number() {
        // u₂(z) = (z, z³ − ε³): one transverse boundary point at ε and one
        // interior point at ε e^{2πi/3}; the third root reflects outside.
        let eps = 0.3_f64;
        let u2 = LocalDisc::graph(alloc::vec![-eps * eps * eps, 0.0, 0.0, 1.0], 1.0);
        let recs = find_intersections(&flat(), &u2, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 2);
        let boundary: Vec<_> = recs
            .iter()
            .filter(|r| r.kind == IntersectionKind::Boundary)
            .collect();
        let interior: Vec<_> = recs
            .iter()
            .filter(|r| r.kind == IntersectionKind::Interior)
            .collect();
        assert_eq!(boundary.len(), 1);
        assert_eq!(interior.len(), 1);
        assert!((boundary[0].z1.re - eps).abs() < 1e-6);
        assert_eq!(boundary[0].multiplicity, 1);
        let expect = Complex64::from_polar(eps, 2.0 * core::f64::consts::PI / 3.0);
        assert!((interior[0].z1 - expect).norm() < 1e-6);
        assert_eq!(interior[0].multiplicity, 1);
        assert_eq!(records_pairing(&recs), 3);
    }

    #[test]
    fn quadratic_boundary_tangency_has_multiplicity_two() {
        let u2 = LocalDisc::graph(alloc::vec![0.0, 0.0, 1.0], 1.0);
        let recs = find_intersections(&flat(), &u2, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert!(recs[0].tangential);
        assert_eq!(recs[0].multiplicity, 2);
    }

    #[test]
    fn interior_transverse_and_double_points() {
        // graph of z − c: one interior transverse point at z = c
        let c = Complex64::new(0.1, 0.4);
        let u2 = FnDisc {
            f: move |z: Complex64| [z, z - c],
            domain: DiscDomain::HalfPlane { radius: 1.0 },
            real_boundary: false,
        };
        let recs = find_intersections(&flat(), &u2, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].kind, IntersectionKind::Interior);
        assert_eq!(recs[0].multiplicity, 1);

        // graph of (z − i/2)²: one interior point of multiplicity 2 at i/2
        let w = Complex64::new(0.0, 0.5);
        let u2 = FnDisc {
            f: move |z: Complex64| [z, (z - w) * (z - w)],
            domain: DiscDomain::HalfPlane { radius: 1.0 },
            real_boundary: false,
        };
        let recs = find_intersections(&flat(), &u2, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].kind, IntersectionKind::Interior);
        assert!((recs[0].z1 - w).norm() < 1e-4);
        assert_eq!(recs[0].multiplicity, 2);

        // oracle: a small perturbation splits it into two simple points with
        // the same total pairing
        let u2e = FnDisc {
            f: move |z: Complex64| [z, (z - w) * (z - w) - Complex64::new(0.01, 0.0)],
            domain: DiscDomain::HalfPlane { radius: 1.0 },
            real_boundary: false,
        };
        let recs_e = find_intersections(&flat(), &u2e, &FindConfig::default()).unwrap();
        assert_eq!(recs_e.len(), 2);
        assert!(recs_e.iter().all(|r| r.multiplicity == 1));
        assert_eq!(records_pairing(&recs_e), records_pairing(&recs));
    }

    #[test]
    fn orientation_reversed_pair_counts_negative() {
        // u₂(z) = (z̄, z̄ − a): isolated interior intersection with the flat
        // disc at z₁ = a, z₂ = ā; orientation reversed, multiplicity −1.
        let a = Complex64::new(0.3, 0.2);
        let u1 = FnDisc {
            f: |z: Complex64| [z, Complex64::new(0.0, 0.0)],
            domain: DiscDomain::Unit,
            real_boundary: false,
        };
        let u2 = FnDisc {
            f: move |z: Complex64| [z.conj(), z.conj() - a],
            domain: DiscDomain::Unit,
            real_boundary: false,
        };
        let recs = find_intersections(&u1, &u2, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 1);
        assert_eq!(recs[0].kind, IntersectionKind::Interior);
        assert_eq!(recs[0].multiplicity, -1);
    }

    #[test]
    fn disjoint_standard_discs_do_not_intersect() {
        let u1 = StandardDiscParams::new(0.3, 0.0).unwrap();
        let u2 = StandardDiscParams::new(0.6, 0.0).unwrap();
        let recs = find_intersections(&u1, &u2, &FindConfig::default()).unwrap();
        assert!(recs.is_empty());
        assert_eq!(intersection_number(&u1, &u2, &FindConfig::default()).unwrap(), 0);
    }

    /// Distinct-level standard discs have linking number zero.
    #[test]
    fn distinct_levels_link_trivially() {
        let u1 = StandardDiscParams::new(0.2, -0.3).unwrap();
        let u2 = StandardDiscParams::new(-0.1, 0.4).unwrap();
        assert_eq!(intersection_number(&u1, &u2, &FindConfig::default()).unwrap(), 0);
    }

    /// Positivity: holomorphic pairs have multiplicities ≥ 1 and the pairing
    /// bound 2|S_int| + |S_∂| with equality iff transverse.
    #[test]
    fn positivity_for_holomorphic_pairs() {
        let cases: alloc::vec::Vec<LocalDisc> = alloc::vec![
            LocalDisc::graph(alloc::vec![0.0, 1.0], 1.0),
            LocalDisc::graph(alloc::vec![0.0, 0.0, 0.0, 1.0], 1.0),
            LocalDisc::graph(alloc::vec![-0.027, 0.0, 0.0, 1.0], 1.0),
            LocalDisc::graph(alloc::vec![0.01, -0.3, 0.0, 1.0], 1.0),
        ];
        for u2 in &cases {
            let recs = find_intersections(&flat(), u2, &FindConfig::default()).unwrap();
            assert!(recs.iter().all(|r| r.multiplicity >= 1));
            let bound: i64 = recs
                .iter()
                .map(|r| match r.kind {
                    IntersectionKind::Interior => 2,
                    IntersectionKind::Boundary => 1,
                })
                .sum();
            let pairing = records_pairing(&recs);
            assert!(pairing >= bound);
            let any_tangential = recs.iter().any(|r| r.tangential);
            assert_eq!(pairing == bound, !any_tangential);
        }
    }

    /// The intersection number is constant under admissible perturbations
    /// fixing the boundary homotopy class.
    #[test]
    fn homotopy_invariance_sample() {
        let mut rng = ChaCha8Rng::seed_from_u64(71);
        let u2 = LocalDisc::graph(alloc::vec![0.0, 0.0, 0.0, 1.0], 1.0);
        let base = intersection_number(&flat(), &u2, &FindConfig::default()).unwrap();
        assert_eq!(base, 3);
        for _ in 0..25 {
            let mut a = alloc::vec![0.0, 1.0, 0.0, 0.0];
            let mut b = alloc::vec![0.0, 0.0, 0.0, 1.0];
            for k in 0..4 {
                a[k] += rng.random_range(-0.02..0.02);
                b[k] += rng.random_range(-0.02..0.02);
            }
            a[1] = 1.0; // keep the first component a graph-like chart
            let pert = LocalDisc::new(a, b, 1.0);
            let n = intersection_number(&flat(), &pert, &FindConfig::default()).unwrap();
            assert_eq!(n, base);
        }
    }

    #[test]
    fn embedded_disc_has_no_self_intersections() {
        let u = StandardDiscParams::new(0.25, 0.35).unwrap();
        let recs = self_intersections(&u, &FindConfig::default()).unwrap();
        assert!(recs.is_empty());
        let (min_d, _) = min_derivative(&u, 48);
        assert!(min_d > 1e-6);
    }

    /// An immersed model with one transverse interior double point yields the
    /// two ordered records and defect contribution 4.
    #[test]
    fn immersed_model_double_point_contribution() {
        // u = (z³ + 1.04 z, z⁴ + 0.64 z²): self-intersection at the
        // conjugate-symmetric pair z = ±0.2 + 0.6i
        let u = LocalDisc::new(
            alloc::vec![0.0, 1.04, 0.0, 1.0],
            alloc::vec![0.0, 0.0, 0.64, 0.0, 1.0],
            1.5,
        );
        let recs = self_intersections(&u, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 2, "expected both ordered records");
        for r in &recs {
            assert_eq!(r.kind, IntersectionKind::Interior);
            assert_eq!(r.multiplicity, 1);
            assert!((r.z1.im - 0.6).abs() < 1e-5);
        }
        assert_eq!(records_pairing(&recs), 4);
        // one transverse interior double point, μ = 2 ⇒ D = A•A − μ + 2 = 4
        assert_eq!(embedding_defect(records_pairing(&recs), 2), 4);
    }

    /// Desingularising an order-1 interior critical point produces the
    /// k(k+1) = 2 ordered intersection points, contributing 4 to the defect.
    #[test]
    fn critical_point_desingularisation_count() {
        // u = (z³/3 + z, z⁴/4 + z²/2) has du = 0 exactly at z = i
        let u = LocalDisc::new(
            alloc::vec![0.0, 1.0, 0.0, 1.0 / 3.0],
            alloc::vec![0.0, 0.0, 0.5, 0.0, 0.25],
            2.0,
        );
        let (min_d, at) = min_derivative(&u, 64);
        assert!(min_d < 1e-6, "critical point not found, min |du| = {min_d}");
        assert!((at - Complex64::new(0.0, 1.0)).norm() < 1e-2);

        let eps = 0.01;
        let pert = LocalDisc::new(
            alloc::vec![0.0, 1.0 + eps, 0.0, 1.0 / 3.0],
            alloc::vec![0.0, 0.0, 0.5, 0.0, 0.25],
            2.0,
        );
        let (min_d, _) = min_derivative(&pert, 64);
        assert!(min_d > 1e-4, "perturbation failed to remove the critical point");
        let recs = self_intersections(&pert, &FindConfig::default()).unwrap();
        assert_eq!(recs.len(), 2);
        assert!(recs.iter().all(|r| r.kind == IntersectionKind::Interior));
        assert_eq!(records_pairing(&recs), 4);
    }

    #[test]
    fn identical_images_are_rejected() {
        let u = LocalDisc::graph(alloc::vec![0.0, 0.5], 1.0);
        let v = LocalDisc::graph(alloc::vec![0.0, 0.5], 1.0);
        assert!(matches!(
            find_intersections(&u, &v, &FindConfig::default()),
            Err(Error::NotNicelyIntersecting)
        ));
    }

    /// Boundary doubling agrees with the Whitney-sum sign rule at transverse
    /// boundary records.
    #[test]
    fn doubling_matches_frame_rule_when_transverse() {
        let u2 = LocalDisc::graph(alloc::vec![0.0, 1.0], 1.0);
        let recs = find_intersections(&flat(), &u2, &FindConfig::default()).unwrap();
        let rec = recs[0];
        let via_double = boundary_multiplicity(&flat(), &u2, &rec, &FindConfig::default()).unwrap();
        assert_eq!(via_double, rec.multiplicity);
    }
}
