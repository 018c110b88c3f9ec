//! Contact geometry of the unit 3-sphere in ℂ².
//!
//! S³ carries the contact form α = λ|_{TS³} with
//! λ = ½(x₁dy₁ − y₁dx₁ + x₂dy₂ − y₂dx₂), the restriction of the standard
//! primitive of ω = dλ. The height function H = y₂ slices S³ into level
//! spheres Sᵗ = H⁻¹(t) whose characteristic foliation T Sᵗ ∩ ξ is singular
//! exactly at the poles q±ᵗ = (0, 0, ±√(1−t²), t). The poles sweep out the
//! unknot K.

#[allow(unused_imports)]
use num_traits::Float;

use nalgebra::Vector4;
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Tolerance for all on-manifold predicates.
pub const TOL_GEO: f64 = 1e-9;

/// Chordal distance below which the characteristic foliation counts as
/// singular; the direction field degenerates continuously at the poles.
pub const POLE_CUTOFF: f64 = 1e-6;

/// A point of ℂ² ≅ ℝ⁴ with coordinates (z₁, z₂) = (x₁+iy₁, x₂+iy₂).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PointC2 {
    pub x1: f64,
    pub y1: f64,
    pub x2: f64,
    pub y2: f64,
}

impl PointC2 {
    pub const fn new(x1: f64, y1: f64, x2: f64, y2: f64) -> Self {
        Self { x1, y1, x2, y2 }
    }

    pub fn from_z(z1: Complex64, z2: Complex64) -> Self {
        Self::new(z1.re, z1.im, z2.re, z2.im)
    }

    pub fn z1(&self) -> Complex64 {
        Complex64::new(self.x1, self.y1)
    }

    pub fn z2(&self) -> Complex64 {
        Complex64::new(self.x2, self.y2)
    }

    pub fn coords(&self) -> Vector4<f64> {
        Vector4::new(self.x1, self.y1, self.x2, self.y2)
    }

    pub fn from_coords(v: &Vector4<f64>) -> Self {
        Self::new(v[0], v[1], v[2], v[3])
    }

    pub fn norm_sq(&self) -> f64 {
        self.x1 * self.x1 + self.y1 * self.y1 + self.x2 * self.x2 + self.y2 * self.y2
    }

    pub fn norm(&self) -> f64 {
        self.norm_sq().sqrt()
    }

    /// |ρ(p) − 1| ≤ tol with ρ = |z₁|² + |z₂|².
    pub fn on_sphere(&self) -> bool {
        (self.norm_sq() - 1.0).abs() <= TOL_GEO
    }

    /// Height H(p) = y₂; only meaningful on S³.
    pub fn level(&self) -> f64 {
        self.y2
    }

    pub fn on_level_sphere(&self, t: f64) -> bool {
        self.on_sphere() && (self.y2 - t).abs() <= TOL_GEO
    }

    pub fn dist(&self, other: &Self) -> f64 {
        (self.coords() - other.coords()).norm()
    }

    /// Radial projection onto S³.
    pub fn normalized(&self) -> Self {
        let n = self.norm();
        Self::new(self.x1 / n, self.y1 / n, self.x2 / n, self.y2 / n)
    }
}

/// A tangent vector of ℝ⁴ attached at a base point.
#[derive(Clone, Copy, Debug)]
pub struct TangentR4 {
    pub base: PointC2,
    pub v: Vector4<f64>,
}

impl TangentR4 {
    pub fn new(base: PointC2, v: Vector4<f64>) -> Self {
        Self { base, v }
    }

    /// ⟨p, v⟩ = 0 within tolerance, scaled by |v|.
    pub fn is_tangent_to_sphere(&self) -> bool {
        let pairing = self.base.coords().dot(&self.v);
        pairing.abs() <= TOL_GEO * self.v.norm().max(1.0)
    }
}

/// The primitive λ = ½(x₁dy₁ − y₁dx₁ + x₂dy₂ − y₂dx₂) evaluated on any
/// ambient vector.
pub fn lambda_form(p: &PointC2, v: &Vector4<f64>) -> f64 {
    0.5 * (p.x1 * v[1] - p.y1 * v[0] + p.x2 * v[3] - p.y2 * v[2])
}

/// ω = dλ = dx₁∧dy₁ + dx₂∧dy₂ as a constant 2-form on ℝ⁴.
pub fn d_lambda(v: &Vector4<f64>, w: &Vector4<f64>) -> f64 {
    v[0] * w[1] - v[1] * w[0] + v[2] * w[3] - v[3] * w[2]
}

/// The standard complex structure J₀ (multiplication by i on both factors).
pub fn complex_structure(v: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(-v[1], v[0], -v[3], v[2])
}

/// α(v) for v tangent to S³ at p; checks both preconditions.
pub fn contact_form(p: &PointC2, v: &TangentR4) -> Result<f64> {
    ensure_on_sphere(p)?;
    let pairing = p.coords().dot(&v.v);
    if pairing.abs() > TOL_GEO * v.v.norm().max(1.0) {
        return Err(Error::NonTangent { pairing });
    }
    Ok(lambda_form(p, &v.v))
}

/// The Reeb field R = 2(−y₁, x₁, −y₂, x₂) = 2 J₀ p of α: α(R) = 1 and
/// ι_R dα vanishes on TS³.
pub fn reeb_field(p: &PointC2) -> Result<TangentR4> {
    ensure_on_sphere(p)?;
    Ok(TangentR4::new(*p, 2.0 * complex_structure(&p.coords())))
}

/// An orthonormal frame (e₁, e₂ = J₀e₁) of the contact plane
/// ξ_p = {v : ⟨v, p⟩ = ⟨v, J₀p⟩ = 0}; by construction dα(e₁, e₂) = 1.
pub fn contact_frame(p: &PointC2) -> (Vector4<f64>, Vector4<f64>) {
    let n = p.coords().normalize();
    let jn = complex_structure(&n);
    // Seed with whichever axis is least aligned with span{n, Jn}; the
    // projection residual of axis k is 1 − n_k² − (Jn)_k².
    let mut k_best = 0;
    let mut best_res = -1.0;
    for k in 0..4 {
        let res = 1.0 - n[k] * n[k] - jn[k] * jn[k];
        if res > best_res {
            best_res = res;
            k_best = k;
        }
    }
    let mut e1 = -(n * n[k_best] + jn * jn[k_best]);
    e1[k_best] += 1.0;
    let e1 = e1.normalize();
    (e1, complex_structure(&e1))
}

/// Generalised cross product in ℝ⁴: the unique w with
/// ⟨w, d⟩ = det[d, a, b, c] (rows) for all d.
pub fn cross4(a: &Vector4<f64>, b: &Vector4<f64>, c: &Vector4<f64>) -> Vector4<f64> {
    let m = |i: usize, j: usize, k: usize| -> f64 {
        a[i] * (b[j] * c[k] - b[k] * c[j]) - a[j] * (b[i] * c[k] - b[k] * c[i])
            + a[k] * (b[i] * c[j] - b[j] * c[i])
    };
    Vector4::new(m(1, 2, 3), -m(0, 2, 3), m(0, 1, 3), -m(0, 1, 2))
}

/// Features of S³ tied to a collar width δ around the unknot K.
#[derive(Clone, Copy, Debug)]
pub struct SphereFeatures {
    pub delta: f64,
}

impl SphereFeatures {
    pub fn new(delta: f64) -> Result<Self> {
        if !(delta > 0.0 && delta < 1.0) {
            return Err(Error::Domain("collar width delta must lie in (0,1)"));
        }
        Ok(Self { delta })
    }

    /// The pole q±ᵗ = (0, 0, ±√(1−t²), t) of the level sphere Sᵗ.
    pub fn pole(t: f64, positive: bool) -> PointC2 {
        let x2 = (1.0 - t * t).max(0.0).sqrt();
        PointC2::new(0.0, 0.0, if positive { x2 } else { -x2 }, t)
    }

    /// Chordal distance from p to the nearer pole of its level sphere.
    pub fn pole_distance(p: &PointC2, t: f64) -> f64 {
        let plus = Self::pole(t, true);
        let minus = Self::pole(t, false);
        p.dist(&plus).min(p.dist(&minus))
    }

    /// Membership in the unknot K = {z₁ = 0} ∩ S³ within tolerance.
    pub fn on_unknot(p: &PointC2, tol: f64) -> bool {
        p.on_sphere() && p.z1().norm() <= tol
    }

    /// Membership in the collar neighbourhood U^δ ⊂ S³ of K:
    /// 1 − δ < x₂² + y₂² ≤ 1 for on-sphere points.
    pub fn in_collar_u(&self, p: &PointC2) -> bool {
        p.on_sphere() && p.x2 * p.x2 + p.y2 * p.y2 > 1.0 - self.delta
    }

    /// Membership in the region V^δ ⊂ D⁴ over the collar:
    /// x₂² + y₂² > 1 − δ for points of the closed ball.
    pub fn in_collar_v(&self, p: &PointC2) -> bool {
        p.norm_sq() <= 1.0 + TOL_GEO && p.x2 * p.x2 + p.y2 * p.y2 > 1.0 - self.delta
    }
}

/// Unit direction spanning T_p Sᵗ ∩ ξ_p, oriented so that its x₂-component is
/// positive (the direction of increasing leaf parameter s).
pub fn char_foliation_dir(p: &PointC2, t: f64) -> Result<TangentR4> {
    ensure_on_sphere(p)?;
    if (p.level() - t).abs() > TOL_GEO {
        return Err(Error::Domain("point does not lie on the requested level sphere"));
    }
    let dist = SphereFeatures::pole_distance(p, t);
    if dist <= POLE_CUTOFF {
        return Err(Error::SingularPoint { dist });
    }
    // T_pSᵗ ∩ ξ_p is the orthogonal complement of span{p, e_{y₂}, J₀p}.
    let e4 = Vector4::new(0.0, 0.0, 0.0, 1.0);
    let jp = complex_structure(&p.coords());
    let mut v = cross4(&p.coords(), &e4, &jp);
    let n = v.norm();
    if n <= TOL_GEO {
        return Err(Error::SingularPoint { dist });
    }
    v /= n;
    if v[2] < 0.0 {
        v = -v;
    }
    Ok(TangentR4::new(*p, v))
}

fn ensure_on_sphere(p: &PointC2) -> Result<()> {
    let excess = (p.norm_sq() - 1.0).abs();
    if excess > TOL_GEO {
        return Err(Error::OffSphere { excess });
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::standard::StandardDiscParams;
    use approx::assert_abs_diff_eq;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_sphere_point(rng: &mut ChaCha8Rng) -> PointC2 {
        loop {
            let v = Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0));
            let n = v.norm();
            if n > 0.1 {
                return PointC2::from_coords(&(v / n));
            }
        }
    }

    fn random_tangent(rng: &mut ChaCha8Rng, p: &PointC2) -> Vector4<f64> {
        let v = Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0));
        let n = p.coords();
        v - n * n.dot(&v)
    }

    #[test]
    fn contact_form_direct_substitution() {
        let p = PointC2::new(1.0, 0.0, 0.0, 0.0);
        let v = TangentR4::new(p, Vector4::new(0.0, 1.0, 0.0, 0.0));
        assert_abs_diff_eq!(contact_form(&p, &v).unwrap(), 0.5);

        let p = PointC2::new(0.0, 0.0, 1.0, 0.0);
        let v = TangentR4::new(p, Vector4::new(0.0, 0.0, 0.0, 1.0));
        assert_abs_diff_eq!(contact_form(&p, &v).unwrap(), 0.5);
    }

    #[test]
    fn contact_form_rejects_non_tangent() {
        let p = PointC2::new(1.0, 0.0, 0.0, 0.0);
        let v = TangentR4::new(p, Vector4::new(1.0, 0.0, 0.0, 0.0));
        assert!(matches!(
            contact_form(&p, &v),
            Err(Error::NonTangent { .. })
        ));
    }

    #[test]
    fn reeb_field_examples() {
        let r = reeb_field(&PointC2::new(1.0, 0.0, 0.0, 0.0)).unwrap();
        assert_eq!(r.v, Vector4::new(0.0, 2.0, 0.0, 0.0));
        let r = reeb_field(&PointC2::new(0.0, 0.0, 0.0, 1.0)).unwrap();
        assert_eq!(r.v, Vector4::new(0.0, 0.0, -2.0, 0.0));
    }

    /// α(R) = 1 and ι_R dα = 0 on TS³ at random points; also ⟨p, R⟩ = 0.
    #[test]
    fn reeb_field_defining_identities() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let p = random_sphere_point(&mut rng);
            let r = reeb_field(&p).unwrap();
            assert!(p.coords().dot(&r.v).abs() < 1e-14);
            assert_abs_diff_eq!(contact_form(&p, &r).unwrap(), 1.0, epsilon = 1e-12);
            let (e1, e2) = contact_frame(&p);
            assert!(d_lambda(&r.v, &e1).abs() < 1e-12);
            assert!(d_lambda(&r.v, &e2).abs() < 1e-12);
        }
    }

    /// λ via the component formula against the pairing 2α(v) = ⟨v, J₀p⟩.
    #[test]
    fn lambda_two_routes_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let p = random_sphere_point(&mut rng);
            let v = random_tangent(&mut rng, &p);
            let direct = lambda_form(&p, &v);
            let pairing = 0.5 * v.dot(&complex_structure(&p.coords()));
            assert!((direct - pairing).abs() < 1e-12);
        }
    }

    /// α ∧ dα is positive on positively oriented frames of TS³.
    #[test]
    fn contact_condition_holds() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..500 {
            let p = random_sphere_point(&mut rng);
            // Build a frame of T_pS³ positively oriented as boundary of D⁴
            // (outward normal first).
            let (e1, e2) = contact_frame(&p);
            let r = reeb_field(&p).unwrap().v;
            let mut f = [r, e1, e2];
            let det = nalgebra::Matrix4::from_columns(&[p.coords(), f[0], f[1], f[2]])
                .determinant();
            if det < 0.0 {
                f.swap(1, 2);
            }
            let vol = contact_form(&p, &TangentR4::new(p, f[0])).unwrap() * d_lambda(&f[1], &f[2])
                - contact_form(&p, &TangentR4::new(p, f[1])).unwrap() * d_lambda(&f[0], &f[2])
                + contact_form(&p, &TangentR4::new(p, f[2])).unwrap() * d_lambda(&f[0], &f[1]);
            assert!(vol > 1e-6, "α∧dα = {vol} not positive");
        }
    }

    #[test]
    fn char_foliation_at_pole_is_singular() {
        let q = SphereFeatures::pole(0.0, true);
        assert!(matches!(
            char_foliation_dir(&q, 0.0),
            Err(Error::SingularPoint { .. })
        ));
    }

    /// The direction is annihilated by α and by the pullback form
    /// x₁dy₁ − y₁dx₁ − t dx₂, lies in TSᵗ, and is positively proportional to
    /// ∂_s of the standard disc family.
    #[test]
    fn char_foliation_direction_properties() {
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..300 {
            let t = rng.random_range(-0.9..0.9);
            let smax = (1.0 - t * t).sqrt();
            let s = rng.random_range(-0.95 * smax..0.95 * smax);
            let phase = rng.random_range(0.0..core::f64::consts::TAU);
            let params = StandardDiscParams::new(s, t).unwrap();
            let p = params.eval(Complex64::from_polar(1.0, phase)).unwrap();

            let dir = char_foliation_dir(&p, t).unwrap();
            let v = dir.v;
            assert_abs_diff_eq!(v.norm(), 1.0, epsilon = 1e-12);
            // tangent to the level sphere: ⟨p, v⟩ = 0 and v_{y₂} = 0
            assert!(p.coords().dot(&v).abs() < 1e-10);
            assert!(v[3].abs() < 1e-10);
            // in ξ
            assert!(contact_form(&p, &dir).unwrap().abs() < 1e-10);
            // kernel of the pullback of 2α to Sᵗ
            let pullback = p.x1 * v[1] - p.y1 * v[0] - t * v[2];
            assert!(pullback.abs() < 1e-10);
            // positively proportional to ∂_s u^t_s
            let ds = params.d_s(Complex64::from_polar(1.0, phase));
            let cosine = ds.dot(&v) / ds.norm();
            assert!(cosine > 0.999, "cosine {cosine}");
        }
    }

    #[test]
    fn collar_membership_matches_parameter_radius() {
        let feats = SphereFeatures::new(0.2).unwrap();
        let inside = StandardDiscParams::new(0.5, 0.78).unwrap(); // s²+t² ≈ 0.858 > 0.8
        let outside = StandardDiscParams::new(0.5, 0.5).unwrap(); // 0.5 < 0.8
        let z = Complex64::from_polar(1.0, 0.3);
        assert!(feats.in_collar_u(&inside.eval(z).unwrap()));
        assert!(!feats.in_collar_u(&outside.eval(z).unwrap()));
        // interior points of the matching discs land in V^δ
        let z_int = Complex64::from_polar(0.4, 1.2);
        assert!(feats.in_collar_v(&inside.eval(z_int).unwrap()));
        assert!(!feats.in_collar_v(&outside.eval(z_int).unwrap()));
    }

    #[test]
    fn poles_lie_on_their_level_spheres() {
        for &t in &[-0.9, -0.3, 0.0, 0.4, 0.99] {
            for &sign in &[true, false] {
                let q = SphereFeatures::pole(t, sign);
                assert!(q.on_sphere());
                assert_abs_diff_eq!(q.level(), t);
            }
        }
    }
}
