//! The standard holomorphic filling of D⁴ ∖ K by round discs.
//!
//! For |t| < 1 and |s| < √(1−t²) the twist function
//!
//! θ(s,t) = t/(2√(1−t²)) · ln( (√(1−t²)+s) / (√(1−t²)−s) )
//!
//! rotates the parametrisations
//!
//! uᵗₛ(z) = ( √(1−s²−t²) · e^{iθ(s,t)} · z , s + it ),  z ∈ 𝔻,
//!
//! so that s ↦ uᵗₛ(z) traces the leaves of the characteristic foliation of Sᵗ
//! for fixed z ∈ ∂𝔻. Taken together the uᵗₛ form the diffeomorphism
//! F_st(z,s,t) onto D⁴ ∖ K, inverted explicitly by [`f_st_inverse`].

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::Vector4;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::geometry::{PointC2, TOL_GEO};

/// Twist angle θ(s,t); strictly increasing in s for t ≠ 0 and odd in s.
pub fn theta(s: f64, t: f64) -> Result<f64> {
    let c = level_radius(t)?;
    if s.abs() >= c {
        return Err(Error::Domain("|s| must be smaller than sqrt(1 - t^2)"));
    }
    Ok(t / (2.0 * c) * ((c + s) / (c - s)).ln())
}

/// ∂θ/∂s = t / (1 − s² − t²).
pub fn theta_s(s: f64, t: f64) -> Result<f64> {
    let c = level_radius(t)?;
    if s.abs() >= c {
        return Err(Error::Domain("|s| must be smaller than sqrt(1 - t^2)"));
    }
    Ok(t / (1.0 - s * s - t * t))
}

fn level_radius(t: f64) -> Result<f64> {
    if t.abs() >= 1.0 {
        return Err(Error::Domain("|t| must be smaller than 1"));
    }
    Ok((1.0 - t * t).sqrt())
}

/// Parameters (s, t) of a standard disc, with s² + t² < 1.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StandardDiscParams {
    s: f64,
    t: f64,
}

impl StandardDiscParams {
    pub fn new(s: f64, t: f64) -> Result<Self> {
        if t.abs() >= 1.0 || s * s + t * t >= 1.0 {
            return Err(Error::Domain("parameters must satisfy s^2 + t^2 < 1"));
        }
        Ok(Self { s, t })
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    /// Disc radius √(1 − s² − t²).
    pub fn radius(&self) -> f64 {
        (1.0 - self.s * self.s - self.t * self.t).sqrt()
    }

    pub fn twist(&self) -> f64 {
        theta(self.s, self.t).expect("parameters validated on construction")
    }

    /// uᵗₛ(z) = (√(1−s²−t²) e^{iθ(s,t)} z, s + it).
    pub fn eval(&self, z: Complex64) -> Result<PointC2> {
        if z.norm() > 1.0 + TOL_GEO {
            return Err(Error::Domain("|z| must not exceed 1"));
        }
        let w = Complex64::from_polar(self.radius(), self.twist()) * z;
        Ok(PointC2::from_z(w, Complex64::new(self.s, self.t)))
    }

    /// Boundary point uᵗₛ(e^{iϑ}).
    pub fn boundary(&self, angle: f64) -> PointC2 {
        let w = Complex64::from_polar(self.radius(), self.twist() + angle);
        PointC2::from_z(w, Complex64::new(self.s, self.t))
    }

    /// Closed-form leaf velocity ∂ₛ uᵗₛ(z).
    pub fn d_s(&self, z: Complex64) -> Vector4<f64> {
        let c = self.radius();
        let ts = theta_s(self.s, self.t).expect("parameters validated on construction");
        let w = Complex64::from_polar(1.0, self.twist())
            * z
            * Complex64::new(-self.s / c, c * ts);
        Vector4::new(w.re, w.im, 1.0, 0.0)
    }

    /// Taylor coefficients of uᵗₛ in ℂ², padded to the requested length:
    /// a₀ = (0, s+it), a₁ = (√(1−s²−t²)e^{iθ}, 0), all higher terms zero.
    pub fn taylor_coeffs(&self, len: usize) -> Vec<[Complex64; 2]> {
        let zero = Complex64::new(0.0, 0.0);
        let mut coeffs = vec![[zero, zero]; len.max(2)];
        coeffs[0] = [zero, Complex64::new(self.s, self.t)];
        coeffs[1] = [Complex64::from_polar(self.radius(), self.twist()), zero];
        coeffs
    }
}

/// Convenience wrapper around [`StandardDiscParams::eval`].
pub fn standard_disc_eval(s: f64, t: f64, z: Complex64) -> Result<PointC2> {
    StandardDiscParams::new(s, t)?.eval(z)
}

/// Inverse of F_st on the region s² + t² ≤ 1 − δ (with s = x₂, t = y₂):
/// returns (z, s, t) with standard_disc_eval(s, t, z) = p.
pub fn f_st_inverse(p: &PointC2, delta: f64) -> Result<(Complex64, f64, f64)> {
    let s = p.x2;
    let t = p.y2;
    if s * s + t * t > 1.0 - delta + TOL_GEO {
        return Err(Error::OutOfChart);
    }
    if p.norm_sq() > 1.0 + 16.0 * TOL_GEO {
        return Err(Error::Domain("point must lie in the closed 4-ball"));
    }
    let params = StandardDiscParams::new(s, t)?;
    let z = p.z1() / Complex64::from_polar(params.radius(), params.twist());
    Ok((z, s, t))
}

/// F_st⁻¹ on all of D⁴ ∖ K.
pub fn f_st_inverse_full(p: &PointC2) -> Result<(Complex64, f64, f64)> {
    f_st_inverse(p, 0.0)
}

/// Symplectic energy E(uᵗₛ) = π(1 − s² − t²).
pub fn standard_energy(s: f64, t: f64) -> Result<f64> {
    let params = StandardDiscParams::new(s, t)?;
    Ok(PI * params.radius() * params.radius())
}

/// α(∂_ϑ uᵗₛ(e^{iϑ})) = (1 − s² − t²)/2, independent of ϑ.
pub fn boundary_pairing(s: f64, t: f64) -> Result<f64> {
    let params = StandardDiscParams::new(s, t)?;
    Ok(0.5 * params.radius() * params.radius())
}

/// The three marked leaves ℓᵗₖ = {F_st(iᵏ, s, t)} of the characteristic
/// foliation of Sᵗ, k = 0, 1, 2, at leaf-space angles kπ/2.
#[derive(Clone, Copy, Debug)]
pub struct MarkedLeaves {
    pub t: f64,
}

impl MarkedLeaves {
    pub fn new(t: f64) -> Result<Self> {
        level_radius(t)?;
        Ok(Self { t })
    }

    /// Leaf-space angle of ℓᵗₖ.
    pub fn leaf_angle(k: usize) -> f64 {
        k as f64 * PI / 2.0
    }

    /// The point of ℓᵗₖ with leaf parameter s.
    pub fn leaf_point(&self, k: usize, s: f64) -> Result<PointC2> {
        let z = Complex64::from_polar(1.0, Self::leaf_angle(k));
        standard_disc_eval(s, self.t, z)
    }

    /// Whether p lies on ℓᵗₖ within the given chordal tolerance.
    pub fn on_leaf(&self, k: usize, p: &PointC2, tol: f64) -> bool {
        match f_st_inverse_full(p) {
            Ok((z, _, t)) => {
                (t - self.t).abs() <= tol
                    && (z.norm() - 1.0).abs() <= tol
                    && (z - Complex64::from_polar(1.0, Self::leaf_angle(k))).norm() <= tol
            }
            Err(_) => false,
        }
    }
}
