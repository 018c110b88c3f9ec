//! Maslov indices: the det²-winding of a loop of totally real frames, and the
//! zero-count formula μ = 2·Σ interior orders + Σ boundary orders for
//! rank-1 bundle pairs over (𝔻, ∂𝔻).

#[allow(unused_imports)]
use num_traits::Float;

use core::f64::consts::{PI, TAU};
use num_complex::Complex64;

use crate::error::{Error, Result};

/// Minimum |det_ℂ| for a frame to count as totally real.
pub const TOTALLY_REAL_TOL: f64 = 1e-8;

/// Maslov index of a loop ϑ ↦ (e₁(ϑ), e₂(ϑ)) of totally real frames of ℂ²:
/// the winding number of det_ℂ[e₁ e₂]² / |det|² over one period.
pub fn maslov_index_frame<F>(frame: F, samples: usize) -> Result<i64>
where
    F: Fn(f64) -> ([Complex64; 2], [Complex64; 2]),
{
    let n = samples.max(512);
    let det = |angle: f64| -> Result<Complex64> {
        let (e1, e2) = frame(angle);
        let d = e1[0] * e2[1] - e1[1] * e2[0];
        if d.norm() <= TOTALLY_REAL_TOL {
            return Err(Error::TotallyRealViolation { det: d.norm() });
        }
        Ok(d * d)
    };
    let mut total = 0.0;
    let mut prev = det(0.0)?.arg();
    for k in 1..=n {
        let arg = det(TAU * k as f64 / n as f64)?.arg();
        total += wrap_angle(arg - prev);
        prev = arg;
    }
    let winding = total / TAU;
    let rounded = round_to_integer(winding, 0.05, "frame loop undersampled for winding")?;
    Ok(rounded)
}

/// Maslov index of a rank-1 bundle pair from a section with isolated zeros,
/// for the trivial boundary real structure F = ℝ ⊂ ℂ (section real-valued on
/// ∂𝔻).
pub fn maslov_rank1<S>(section: S) -> Result<i64>
where
    S: Fn(Complex64) -> Complex64,
{
    maslov_rank1_with_frame(section, |_| Complex64::new(1.0, 0.0))
}

/// Maslov index of a rank-1 bundle pair (ℂ, F) with F_ϑ = ℝ·g(ϑ), from a
/// section s with s(e^{iϑ}) ∈ F_ϑ and isolated zeros.
///
/// The count 2·Σ_int ord + Σ_∂ ord is evaluated without locating zeros: it
/// equals the winding of s on |z| = 1−m plus the winding of the doubled
/// section σ on |z| = 1/(1−m), where σ(z) = g²/|g|² · conj(s(1/z̄)) reflects
/// s through F. Mirrors of zeros in the annulus (1−m, 1) compensate exactly.
pub fn maslov_rank1_with_frame<S, G>(section: S, frame: G) -> Result<i64>
where
    S: Fn(Complex64) -> Complex64,
    G: Fn(f64) -> Complex64,
{
    // Totally real boundary condition: s/g real along ∂𝔻.
    let n_check = 1024;
    let mut max_ratio = 0.0_f64;
    let mut max_im = 0.0_f64;
    for k in 0..n_check {
        let angle = TAU * k as f64 / n_check as f64;
        let g = frame(angle);
        if g.norm() <= TOTALLY_REAL_TOL {
            return Err(Error::TotallyRealViolation { det: g.norm() });
        }
        let ratio = section(Complex64::from_polar(1.0, angle)) / g;
        max_ratio = max_ratio.max(ratio.norm());
        max_im = max_im.max(ratio.im.abs());
    }
    if max_im > 1e-7 * max_ratio.max(1e-12) {
        return Err(Error::TotallyRealViolation { det: max_im });
    }

    let doubled = |z: Complex64| -> Complex64 {
        let g = frame(z.arg());
        let reflected = section(Complex64::new(1.0, 0.0) / z.conj()).conj();
        g * g / g.norm_sqr() * reflected
    };

    for margin in [1e-3, 2.3e-3, 5.1e-3, 1.1e-2, 2.3e-2] {
        let r_in = 1.0 - margin;
        let r_out = 1.0 / r_in;
        let inner = winding_on_circle(|z| section(z), r_in, 4096);
        let outer = winding_on_circle(&doubled, r_out, 4096);
        if let (Ok(w_in), Ok(w_out)) = (inner, outer) {
            return Ok(w_in + w_out);
        }
    }
    Err(Error::NonIsolatedZero)
}

fn winding_on_circle<F>(f: F, radius: f64, samples: usize) -> Result<i64>
where
    F: Fn(Complex64) -> Complex64,
{
    let mut max_norm = 0.0_f64;
    let mut min_norm = f64::INFINITY;
    let mut total = 0.0;
    let mut prev = f(Complex64::from_polar(radius, 0.0));
    max_norm = max_norm.max(prev.norm());
    min_norm = min_norm.min(prev.norm());
    let mut accum_prev = prev.arg();
    for k in 1..=samples {
        let z = Complex64::from_polar(radius, TAU * k as f64 / samples as f64);
        let val = f(z);
        max_norm = max_norm.max(val.norm());
        min_norm = min_norm.min(val.norm());
        let arg = val.arg();
        total += wrap_angle(arg - accum_prev);
        accum_prev = arg;
        prev = val;
    }
    let _ = prev;
    if min_norm <= 1e-9 * max_norm.max(1e-300) {
        return Err(Error::NonIsolatedZero);
    }
    let winding = total / TAU;
    round_to_integer(winding, 0.05, "contour undersampled for winding")
}

pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut x = a;
    while x > PI {
        x -= TAU;
    }
    while x <= -PI {
        x += TAU;
    }
    x
}

fn round_to_integer(x: f64, tol: f64, message: &'static str) -> Result<i64> {
    let rounded = x.round();
    if (x - rounded).abs() > tol {
        return Err(Error::Precondition(message));
    }
    Ok(rounded as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn standard_boundary_frame_has_index_two() {
        // frame (i e^{iϑ}·(1,0), (0,1)) along the round disc boundary
        let frame = |angle: f64| {
            (
                [
                    Complex64::from_polar(1.0, angle + PI / 2.0),
                    Complex64::new(0.0, 0.0),
                ],
                [Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            )
        };
        assert_eq!(maslov_index_frame(frame, 512).unwrap(), 2);
    }

    #[test]
    fn constant_frame_has_index_zero() {
        let frame = |_: f64| {
            (
                [Complex64::new(1.0, 0.3), Complex64::new(0.2, 0.0)],
                [Complex64::new(0.0, 0.1), Complex64::new(0.9, -0.2)],
            )
        };
        assert_eq!(maslov_index_frame(frame, 512).unwrap(), 0);
    }

    #[test]
    fn complex_degenerate_frame_is_rejected() {
        let frame = |_: f64| {
            (
                [Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
                [Complex64::new(0.0, 1.0), Complex64::new(-1.0, 0.0)],
            )
        };
        assert!(matches!(
            maslov_index_frame(frame, 512),
            Err(Error::TotallyRealViolation { .. })
        ));
    }

    #[test]
    fn interior_simple_zero_counts_twice() {
        let z0 = Complex64::new(0.3, -0.2);
        // s real on the boundary is only needed up to the frame; use the
        // section's own boundary values as frame.
        let s = move |z: Complex64| z - z0;
        let g = move |angle: f64| Complex64::from_polar(1.0, angle) - z0;
        assert_eq!(maslov_rank1_with_frame(s, g).unwrap(), 2);
    }

    #[test]
    fn boundary_pair_of_simple_zeros_counts_once_each() {
        // s(z) = z² − 1 with the Maslov-2 real structure F_ϑ = ℝ·ie^{iϑ}
        let s = |z: Complex64| z * z - Complex64::new(1.0, 0.0);
        let g = |angle: f64| Complex64::from_polar(1.0, angle + PI / 2.0);
        assert_eq!(maslov_rank1_with_frame(s, g).unwrap(), 2);
    }

    #[test]
    fn nonvanishing_section_has_index_zero() {
        let s = |_: Complex64| Complex64::new(1.0, 0.0);
        assert_eq!(maslov_rank1(s).unwrap(), 0);
    }

    #[test]
    fn higher_order_interior_zeros_add_up() {
        let z0 = Complex64::new(0.25, 0.1);
        let z1 = Complex64::new(-0.4, 0.3);
        let s = move |z: Complex64| (z - z0) * (z - z0) * (z - z1);
        let g = move |angle: f64| {
            let z = Complex64::from_polar(1.0, angle);
            (z - z0) * (z - z0) * (z - z1)
        };
        assert_eq!(maslov_rank1_with_frame(s, g).unwrap(), 6);
    }

    #[test]
    fn real_valued_section_with_degree_zero_boundary_zero() {
        // s = Re(z) − 1 is real on all of 𝔻, vanishing only at z = 1; a real
        // section misses the open half-planes, so the boundary order is 0 —
        // consistent with the trivial pair (ℂ, ℝ) having index 0.
        let s = |z: Complex64| Complex64::new(z.re - 1.0, 0.0);
        assert_eq!(maslov_rank1(s).unwrap(), 0);
    }

    #[test]
    fn non_real_boundary_without_frame_is_rejected() {
        let s = |z: Complex64| z * z - Complex64::new(1.0, 0.0);
        assert!(matches!(
            maslov_rank1(s),
            Err(Error::TotallyRealViolation { .. })
        ));
    }
}
