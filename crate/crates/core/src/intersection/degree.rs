//! Topological degree of a map ℝ⁴ ∖ {0}-valued on a small cube boundary,
//! by signed counting of preimages of a regular direction over a simplicial
//! approximation.
//!
//! The boundary of the cube around the isolated zero is split into 8 facets,
//! each facet cube into k³ cells, each cell into 6 tetrahedra. For a generic
//! unit direction y, the degree is Σ over tetrahedra of
//! sign(det V) · sign(det W) · [y ∈ cone(W)], where V holds the domain
//! vertices relative to the centre and W the normalised image vertices.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;
use nalgebra::{Matrix4, Vector4};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

/// Smallest isolation radius before giving up.
pub const MIN_RADIUS: f64 = 1e-9;

const CONE_TOL: f64 = 1e-9;

/// Degree of `f` around `center` on the boundary of the cube with the given
/// half-width. Shrinks the cube when `f` nearly vanishes on it, refines the
/// triangulation when different probe directions disagree.
pub fn degree_on_cube<F>(f: &F, center: &Vector4<f64>, half_width: f64, subdiv: usize) -> Result<i64>
where
    F: Fn(&Vector4<f64>) -> Vector4<f64>,
{
    let mut hw = half_width;
    while hw >= MIN_RADIUS {
        match try_degree(f, center, hw, subdiv) {
            Ok(d) => return Ok(d),
            Err(Retry::Shrink) => hw *= 0.5,
            Err(Retry::Refine) => {
                return match try_degree(f, center, hw, subdiv * 2) {
                    Ok(d) => Ok(d),
                    Err(Retry::Shrink) => degree_on_cube(f, center, hw * 0.5, subdiv),
                    Err(Retry::Refine) => Err(Error::NotNicelyIntersecting),
                }
            }
        }
    }
    Err(Error::DegenerateRadius { min: MIN_RADIUS })
}

enum Retry {
    Shrink,
    Refine,
}

fn try_degree<F>(
    f: &F,
    center: &Vector4<f64>,
    hw: f64,
    subdiv: usize,
) -> core::result::Result<i64, Retry>
where
    F: Fn(&Vector4<f64>) -> Vector4<f64>,
{
    let k = subdiv;
    let n = k + 1;
    // Vertex positions (relative to centre) and normalised images, facet by
    // facet. Facet (axis, side): coordinate `axis` pinned to ±hw.
    let mut verts: Vec<Vector4<f64>> = Vec::with_capacity(8 * n * n * n);
    let mut images: Vec<Vector4<f64>> = Vec::with_capacity(verts.capacity());
    let mut scale = 0.0_f64;
    let mut min_norm = f64::INFINITY;
    for axis in 0..4 {
        for side in [-1.0, 1.0] {
            for i in 0..n {
                for j in 0..n {
                    for l in 0..n {
                        let mut v = Vector4::zeros();
                        v[axis] = side * hw;
                        let others: [usize; 3] = match axis {
                            0 => [1, 2, 3],
                            1 => [0, 2, 3],
                            2 => [0, 1, 3],
                            _ => [0, 1, 2],
                        };
                        let frac = |m: usize| 2.0 * m as f64 / k as f64 - 1.0;
                        v[others[0]] = frac(i) * hw;
                        v[others[1]] = frac(j) * hw;
                        v[others[2]] = frac(l) * hw;
                        let w = f(&(center + v));
                        let norm = w.norm();
                        scale = scale.max(norm);
                        min_norm = min_norm.min(norm);
                        verts.push(v);
                        images.push(w);
                    }
                }
            }
        }
    }
    if min_norm <= 1e-9 * scale.max(1e-300) {
        return Err(Retry::Shrink);
    }
    for w in &mut images {
        w.normalize_mut();
    }

    // Freudenthal subdivision of the unit cell into 6 tetrahedra.
    let mut tets: Vec<[usize; 4]> = Vec::with_capacity(6);
    for perm in [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ] {
        let mut corner = [0usize; 3];
        let mut tet = [0usize; 4];
        tet[0] = 0;
        for (step, &ax) in perm.iter().enumerate() {
            corner[ax] = 1;
            tet[step + 1] = corner[0] + 2 * corner[1] + 4 * corner[2];
        }
        tets.push(tet);
    }

    let mut rng = ChaCha8Rng::seed_from_u64(0xD15C_F111);
    'probe: for _ in 0..8 {
        let y = Vector4::from_fn(|_, _| rng.random_range(-1.0..1.0_f64)).normalize();
        let mut total = 0i64;
        let facet_stride = n * n * n;
        for facet in 0..8 {
            for i in 0..k {
                for j in 0..k {
                    for l in 0..k {
                        let idx = |di: usize, dj: usize, dl: usize| {
                            facet * facet_stride + (i + di) * n * n + (j + dj) * n + (l + dl)
                        };
                        let cell = [
                            idx(0, 0, 0),
                            idx(1, 0, 0),
                            idx(0, 1, 0),
                            idx(1, 1, 0),
                            idx(0, 0, 1),
                            idx(1, 0, 1),
                            idx(0, 1, 1),
                            idx(1, 1, 1),
                        ];
                        for tet in &tets {
                            let vm = Matrix4::from_columns(&[
                                verts[cell[tet[0]]],
                                verts[cell[tet[1]]],
                                verts[cell[tet[2]]],
                                verts[cell[tet[3]]],
                            ]);
                            let wm = Matrix4::from_columns(&[
                                images[cell[tet[0]]],
                                images[cell[tet[1]]],
                                images[cell[tet[2]]],
                                images[cell[tet[3]]],
                            ]);
                            let det_v = vm.determinant();
                            let det_w = wm.determinant();
                            if det_v == 0.0 || det_w.abs() < 1e-14 {
                                continue;
                            }
                            let Some(lu) = wm.lu().solve(&y) else {
                                continue;
                            };
                            let min_coord = lu.min();
                            if min_coord > CONE_TOL {
                                total += (det_v.signum() * det_w.signum()) as i64;
                            } else if min_coord > -CONE_TOL {
                                // y grazes a cone face: ambiguous, new probe
                                continue 'probe;
                            }
                        }
                    }
                }
            }
        }
        return Ok(total);
    }
    Err(Retry::Refine)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_has_degree_one() {
        let f = |v: &Vector4<f64>| *v;
        assert_eq!(degree_on_cube(&f, &Vector4::zeros(), 0.5, 6).unwrap(), 1);
    }

    #[test]
    fn conjugation_has_degree_minus_one() {
        let f = |v: &Vector4<f64>| Vector4::new(v[0], -v[1], v[2], v[3]);
        assert_eq!(degree_on_cube(&f, &Vector4::zeros(), 0.5, 6).unwrap(), -1);
    }

    #[test]
    fn squaring_first_factor_has_degree_two() {
        // (z1, z2) ↦ (z1², z2)
        let f = |v: &Vector4<f64>| {
            Vector4::new(v[0] * v[0] - v[1] * v[1], 2.0 * v[0] * v[1], v[2], v[3])
        };
        assert_eq!(degree_on_cube(&f, &Vector4::zeros(), 0.5, 8).unwrap(), 2);
    }

    #[test]
    fn cubing_has_degree_three() {
        let f = |v: &Vector4<f64>| {
            let z = num_complex::Complex64::new(v[0], v[1]);
            let z3 = z * z * z;
            Vector4::new(z3.re, z3.im, v[2], v[3])
        };
        assert_eq!(degree_on_cube(&f, &Vector4::zeros(), 0.5, 8).unwrap(), 3);
    }

    #[test]
    fn shifted_zero_keeps_degree() {
        let c = Vector4::new(0.3, -0.1, 0.2, 0.05);
        let f = move |v: &Vector4<f64>| {
            let w = v - c;
            Vector4::new(w[0] * w[0] - w[1] * w[1], 2.0 * w[0] * w[1], w[2], w[3])
        };
        assert_eq!(degree_on_cube(&f, &c, 0.3, 8).unwrap(), 2);
    }

    #[test]
    fn nonvanishing_map_shrinks_to_failure() {
        // f never vanishes near 0 but is tiny: must shrink until MIN_RADIUS
        let f = |_: &Vector4<f64>| Vector4::new(0.0, 0.0, 0.0, 0.0);
        assert!(matches!(
            degree_on_cube(&f, &Vector4::zeros(), 0.1, 4),
            Err(Error::DegenerateRadius { .. })
        ));
    }
}
