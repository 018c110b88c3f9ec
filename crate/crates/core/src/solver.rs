//! The Bishop-disc boundary value problem.
//!
//! A t-level Bishop disc for φ is a holomorphic disc u with boundary on
//! S̃ᵗ = φ(Sᵗ), in the homotopy class of the standard boundary circle, with
//! marked points u(iᵏ) on the leaves ℓ̃ᵗₖ and evaluation u(1) = φ(uᵗ_{s₀}(1)).
//!
//! The unknowns are boundary chart functions in the leaf-space chart of S̃ᵗ,
//!
//!   thetafun(ϑ) = ϑ + Σ_{n≤N} (aₙ cos nϑ + bₙ sin nϑ),
//!   sfun(ϑ)     = Σ_{n≤N} (cₙ cos nϑ + dₙ sin nϑ),
//!
//! so the boundary condition holds by construction and holomorphy becomes a
//! spectral constraint: the boundary trace γ(ϑ) = Φ̃ₜ(thetafun, sfun) bounds
//! a holomorphic disc exactly when its negative Fourier modes vanish. Those
//! modes, together with the marked-point conditions, form the residual that
//! a damped Gauss–Newton iteration drives to zero. Taylor coefficients of
//! the disc are the non-negative modes of the solved trace.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{PI, TAU};
use nalgebra::{DMatrix, DVector, Vector4};
use num_complex::Complex64;

use crate::contact::ContactMap;
use crate::error::{Error, Result};
use crate::geometry::{lambda_form, PointC2};
use crate::intersection::{
    holomorphic_differential, maslov_index_frame, wrap_angle, DiscDomain, DiscMap,
};
use crate::standard::StandardDiscParams;

/// Discretisation and termination parameters of the disc solver.
#[derive(Clone, Copy, Debug)]
pub struct SolverConfig {
    /// Fourier mode cutoff N of the chart functions.
    pub modes: usize,
    /// Collocation sample count M (≥ 4N).
    pub samples: usize,
    /// Number of stored Taylor coefficients (N_T + 1).
    pub taylor_len: usize,
    /// Acceptance residual (∞-norm).
    pub tol_res: f64,
    /// Internal target; iteration continues below `tol_res` down to this.
    pub tol_target: f64,
    pub max_iter: usize,
    /// Smallest Armijo damping factor.
    pub min_step: f64,
}

impl Default for SolverConfig {
    /// Production resolution. The C^∞ bump cutoff of the contact
    /// Hamiltonians has Fourier tails ~ e^{−c√n} that cross 1e−9 only around
    /// mode 450, so the chart functions carry that many modes.
    fn default() -> Self {
        Self {
            modes: 448,
            samples: 4096,
            taylor_len: 512,
            tol_res: 1e-9,
            tol_target: 1e-12,
            max_iter: 50,
            min_step: 0.00390625, // 2⁻⁸
        }
    }
}

impl SolverConfig {
    /// Low-resolution configuration for rank diagnostics and identity-map
    /// work: N modes, the smallest power-of-two sample count ≥ 8N.
    pub fn diagnostic(modes: usize) -> Self {
        Self {
            modes,
            samples: (8 * modes).next_power_of_two(),
            taylor_len: 2 * modes + 1,
            ..Self::default()
        }
    }

    /// Doubled-resolution configuration, the oracle for golden solves.
    pub fn doubled(&self) -> Self {
        Self {
            modes: 2 * self.modes,
            samples: 2 * self.samples,
            taylor_len: 2 * self.taylor_len - 1,
            ..*self
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.samples.is_power_of_two() || self.samples < 8 * self.modes {
            return Err(Error::Precondition(
                "samples must be a power of two, at least 8 × modes",
            ));
        }
        if self.taylor_len * 2 > self.samples {
            return Err(Error::Precondition("taylor_len must not exceed samples/2"));
        }
        Ok(())
    }
}

/// Truncated Fourier chart functions of a disc boundary on S̃ᵗ.
#[derive(Clone, Debug)]
pub struct BoundaryAnsatz {
    pub level: f64,
    /// [a₀, a₁ᶜ, a₁ˢ, …, a_Nᶜ, a_Nˢ]; thetafun(ϑ) = ϑ + series.
    pub theta_coeffs: Vec<f64>,
    /// Same layout; sfun(ϑ) = series.
    pub s_coeffs: Vec<f64>,
}

fn series(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = coeffs[0];
    let n = (coeffs.len() - 1) / 2;
    for k in 1..=n {
        let (s, c) = (k as f64 * x).sin_cos();
        acc += coeffs[2 * k - 1] * c + coeffs[2 * k] * s;
    }
    acc
}

fn series_deriv(coeffs: &[f64], x: f64) -> f64 {
    let mut acc = 0.0;
    let n = (coeffs.len() - 1) / 2;
    for k in 1..=n {
        let (s, c) = (k as f64 * x).sin_cos();
        acc += k as f64 * (-coeffs[2 * k - 1] * s + coeffs[2 * k] * c);
    }
    acc
}

impl BoundaryAnsatz {
    /// The exact chart functions of the standard disc uᵗ_{s₀}:
    /// thetafun = ϑ, sfun ≡ s₀.
    pub fn standard(level: f64, s0: f64, modes: usize) -> Self {
        let mut s_coeffs = vec![0.0; 2 * modes + 1];
        s_coeffs[0] = s0;
        Self {
            level,
            theta_coeffs: vec![0.0; 2 * modes + 1],
            s_coeffs,
        }
    }

    pub fn modes(&self) -> usize {
        (self.theta_coeffs.len() - 1) / 2
    }

    pub fn theta_at(&self, x: f64) -> f64 {
        x + series(&self.theta_coeffs, x)
    }

    pub fn s_at(&self, x: f64) -> f64 {
        series(&self.s_coeffs, x)
    }

    pub fn d_theta_at(&self, x: f64) -> f64 {
        1.0 + series_deriv(&self.theta_coeffs, x)
    }

    pub fn d_s_at(&self, x: f64) -> f64 {
        series_deriv(&self.s_coeffs, x)
    }

    /// Same functions expressed with a different mode cutoff.
    pub fn resampled(&self, modes: usize) -> Self {
        let mut out = Self::standard(self.level, 0.0, modes);
        let copy = |src: &[f64], dst: &mut [f64]| {
            let n = usize::min((src.len() - 1) / 2, (dst.len() - 1) / 2);
            dst[0] = src[0];
            dst[1..=2 * n].copy_from_slice(&src[1..=2 * n]);
        };
        copy(&self.theta_coeffs, &mut out.theta_coeffs);
        copy(&self.s_coeffs, &mut out.s_coeffs);
        out
    }

    /// thetafun is an increasing degree-1 circle map on the sample grid.
    pub fn is_monotone(&self, samples: usize) -> bool {
        (0..samples).all(|j| self.d_theta_at(TAU * j as f64 / samples as f64) > 0.0)
    }
}

/// A solved Bishop disc: truncated Taylor coefficients in ℂ² plus the chart
/// functions of its boundary.
#[derive(Clone, Debug)]
pub struct BishopDisc {
    pub level: f64,
    pub target_s: f64,
    pub taylor: Vec<[Complex64; 2]>,
    pub ansatz: BoundaryAnsatz,
    pub residual: f64,
    pub iterations: usize,
    pub energy: f64,
    pub maslov: i64,
}

impl BishopDisc {
    /// Horner evaluation of the Taylor series.
    pub fn eval(&self, z: Complex64) -> PointC2 {
        let mut w1 = Complex64::new(0.0, 0.0);
        let mut w2 = Complex64::new(0.0, 0.0);
        for a in self.taylor.iter().rev() {
            w1 = w1 * z + a[0];
            w2 = w2 * z + a[1];
        }
        PointC2::from_z(w1, w2)
    }

    /// Complex derivative of the Taylor series.
    pub fn deriv(&self, z: Complex64) -> [Complex64; 2] {
        let mut w1 = Complex64::new(0.0, 0.0);
        let mut w2 = Complex64::new(0.0, 0.0);
        for (n, a) in self.taylor.iter().enumerate().skip(1).rev() {
            w1 = w1 * z + a[0] * n as f64;
            w2 = w2 * z + a[1] * n as f64;
        }
        [w1, w2]
    }

    pub fn boundary(&self, angle: f64) -> PointC2 {
        self.eval(Complex64::from_polar(1.0, angle))
    }

    /// The exact standard disc uᵗₛ packaged as a solved Bishop disc; used for
    /// rim nodes where φ is the identity on the boundary.
    pub fn standard(params: &StandardDiscParams, cfg: &SolverConfig) -> Self {
        let ansatz = BoundaryAnsatz::standard(params.t(), params.s(), cfg.modes);
        Self {
            level: params.t(),
            target_s: params.s(),
            taylor: params.taylor_coeffs(cfg.taylor_len),
            ansatz,
            residual: 0.0,
            iterations: 0,
            energy: PI * params.radius() * params.radius(),
            maslov: 2,
        }
    }

    /// Boundary energy ∮ α(∂_ϑ u) dϑ by the periodic trapezoid rule.
    pub fn boundary_energy(&self, samples: usize) -> f64 {
        let mut acc = 0.0;
        for j in 0..samples {
            let z = Complex64::from_polar(1.0, TAU * j as f64 / samples as f64);
            let p = self.eval(z);
            let [d1, d2] = self.deriv(z);
            let iz = Complex64::new(0.0, 1.0) * z;
            let v1 = d1 * iz;
            let v2 = d2 * iz;
            acc += lambda_form(&p, &Vector4::new(v1.re, v1.im, v2.re, v2.im));
        }
        acc * TAU / samples as f64
    }
}

impl DiscMap for BishopDisc {
    fn eval(&self, z: Complex64) -> Vector4<f64> {
        BishopDisc::eval(self, z).coords()
    }

    fn domain(&self) -> DiscDomain {
        DiscDomain::Unit
    }

    fn d_eval(&self, z: Complex64) -> nalgebra::Matrix4x2<f64> {
        let [d1, d2] = self.deriv(z);
        holomorphic_differential(d1, d2)
    }
}

/// Boundary trace of the ansatz on S̃ᵗ at the collocation points, optionally
/// with the chart partials needed for the Jacobian.
struct Sweep {
    gamma: Vec<Vector4<f64>>,
    d_theta: Vec<Vector4<f64>>,
    d_s: Vec<Vector4<f64>>,
}

fn sweep(
    map: &ContactMap,
    ansatz: &BoundaryAnsatz,
    level: f64,
    cfg: &SolverConfig,
    with_partials: bool,
) -> Result<Sweep> {
    let m = cfg.samples;
    let s_max = (1.0 - level * level).sqrt() * (1.0 - 1e-12);
    let mut gamma = Vec::with_capacity(m);
    let mut d_theta = Vec::new();
    let mut d_s = Vec::new();
    for j in 0..m {
        let x = TAU * j as f64 / m as f64;
        let th = ansatz.theta_at(x);
        let sv = ansatz.s_at(x);
        if sv.abs() >= s_max {
            return Err(Error::ChartExcursion);
        }
        if with_partials {
            let (value, dt, ds) = map.chart_with_partials(level, th, sv)?;
            gamma.push(value.coords());
            d_theta.push(dt);
            d_s.push(ds);
        } else {
            gamma.push(map.image_sphere_chart(level, th, sv)?.coords());
        }
    }
    Ok(Sweep { gamma, d_theta, d_s })
}

/// Negative Fourier modes −1…−N of both complex components of the trace,
/// interleaved as [Re c¹, Im c¹, Re c², Im c²] per mode.
fn negative_modes(gamma: &[Vector4<f64>], n_modes: usize) -> Vec<f64> {
    let m = gamma.len();
    let mut acc = vec![[Complex64::new(0.0, 0.0); 2]; n_modes];
    for (j, g) in gamma.iter().enumerate() {
        // frequency −mode picks up γ_j e^{+i·mode·ϑ_j}; rotate incrementally
        let base = Complex64::from_polar(1.0, TAU * j as f64 / m as f64);
        let w1 = Complex64::new(g[0], g[1]);
        let w2 = Complex64::new(g[2], g[3]);
        let mut rot = base;
        for slot in acc.iter_mut() {
            slot[0] += w1 * rot;
            slot[1] += w2 * rot;
            rot *= base;
        }
    }
    let mut out = Vec::with_capacity(4 * n_modes);
    for slot in acc {
        let c1 = slot[0] / m as f64;
        let c2 = slot[1] / m as f64;
        out.extend_from_slice(&[c1.re, c1.im, c2.re, c2.im]);
    }
    out
}

/// Values of the coefficient series at the M collocation points.
fn eval_series_on_grid(coeffs: &[f64], m: usize) -> Vec<f64> {
    let n = (coeffs.len() - 1) / 2;
    let mut out = vec![0.0; m];
    for (j, o) in out.iter_mut().enumerate() {
        let base = Complex64::from_polar(1.0, TAU * j as f64 / m as f64);
        let mut rot = base;
        let mut acc = coeffs[0];
        for k in 1..=n {
            acc += coeffs[2 * k - 1] * rot.re + coeffs[2 * k] * rot.im;
            rot *= base;
        }
        *o = acc;
    }
    out
}

/// The linearisation of the residual at the current ansatz, held as chart
/// partials at the collocation points and applied spectrally.
struct LinearizedSystem {
    d_theta: Vec<Vector4<f64>>,
    d_s: Vec<Vector4<f64>>,
    modes: usize,
}

impl LinearizedSystem {
    /// J·δ for a coefficient vector δ = (theta block, s block).
    fn apply(&self, delta: &DVector<f64>) -> DVector<f64> {
        let m = self.d_theta.len();
        let n = self.modes;
        let n_coeff = 2 * n + 1;
        let th = eval_series_on_grid(delta.as_slice()[..n_coeff].as_ref(), m);
        let sv = eval_series_on_grid(delta.as_slice()[n_coeff..].as_ref(), m);
        let gamma: Vec<Vector4<f64>> = (0..m)
            .map(|j| self.d_theta[j] * th[j] + self.d_s[j] * sv[j])
            .collect();
        let mut entries = negative_modes(&gamma, n);
        let theta_c = &delta.as_slice()[..n_coeff];
        let s_c = &delta.as_slice()[n_coeff..];
        entries.push(series(theta_c, 0.0));
        entries.push(series(s_c, 0.0));
        entries.push(series(theta_c, PI / 2.0));
        entries.push(series(theta_c, PI));
        DVector::from_vec(entries)
    }
}

/// GMRES on the square operator A, returning the least-squares minimiser of
/// ‖A y − rhs‖ over the Krylov space (stagnates at the optimum when the
/// system is inconsistent, which is exactly the Gauss–Newton step we want).
fn gmres<F>(apply: F, rhs: &DVector<f64>, max_iter: usize, rel_tol: f64) -> DVector<f64>
where
    F: Fn(&DVector<f64>) -> DVector<f64>,
{
    let beta = rhs.norm();
    if beta == 0.0 {
        return DVector::zeros(rhs.len());
    }
    let mut basis: Vec<DVector<f64>> = vec![rhs / beta];
    let mut h_cols: Vec<Vec<f64>> = Vec::new();
    let mut givens: Vec<(f64, f64)> = Vec::new();
    let mut g = vec![beta];
    let mut last_res = beta;
    let mut iters = 0;
    for j in 0..max_iter {
        iters = j + 1;
        let mut w = apply(&basis[j]);
        let mut col = vec![0.0; j + 2];
        for (i, v) in basis.iter().enumerate() {
            col[i] = w.dot(v);
            w -= v * col[i];
        }
        col[j + 1] = w.norm();
        let happy = col[j + 1] <= 1e-14 * beta;
        if !happy {
            basis.push(&w / col[j + 1]);
        }
        for (i, &(c, s)) in givens.iter().enumerate() {
            let t = c * col[i] + s * col[i + 1];
            col[i + 1] = -s * col[i] + c * col[i + 1];
            col[i] = t;
        }
        let denom = col[j].hypot(col[j + 1]);
        let (c, s) = if denom == 0.0 { (1.0, 0.0) } else { (col[j] / denom, col[j + 1] / denom) };
        givens.push((c, s));
        col[j] = denom;
        col[j + 1] = 0.0;
        g.push(-s * g[j]);
        g[j] *= c;
        h_cols.push(col);
        let res = g[j + 1].abs();
        let stagnated = res > 0.999 * last_res;
        last_res = res;
        if happy || res <= rel_tol * beta || stagnated {
            break;
        }
    }
    // back substitution on the triangularised Hessenberg system
    let k = iters;
    let mut y = vec![0.0; k];
    for i in (0..k).rev() {
        let mut acc = g[i];
        for l in (i + 1)..k {
            acc -= h_cols[l][i] * y[l];
        }
        y[i] = acc / h_cols[i][i];
    }
    let mut out = DVector::zeros(rhs.len());
    for (i, yi) in y.iter().enumerate() {
        out += &basis[i] * *yi;
    }
    out
}

/// The four marked residuals: thetafun(0), sfun(0) − s₀, thetafun(π/2) − π/2,
/// thetafun(π) − π, with wrapped angle differences.
fn marked_block(ansatz: &BoundaryAnsatz, s0: f64) -> [f64; 4] {
    [
        wrap_angle(ansatz.theta_at(0.0)),
        ansatz.s_at(0.0) - s0,
        wrap_angle(ansatz.theta_at(PI / 2.0) - PI / 2.0),
        wrap_angle(ansatz.theta_at(PI) - PI),
    ]
}

/// Residual of the boundary value problem: negative modes plus marked block.
pub fn residual_vector(
    map: &ContactMap,
    ansatz: &BoundaryAnsatz,
    s0: f64,
    cfg: &SolverConfig,
) -> Result<DVector<f64>> {
    let sw = sweep(map, ansatz, ansatz.level, cfg, false)?;
    let mut entries = negative_modes(&sw.gamma, cfg.modes);
    entries.extend_from_slice(&marked_block(ansatz, s0));
    Ok(DVector::from_vec(entries))
}

/// System assembly: residual and Jacobian with respect to the chart
/// coefficients (marked rows and a level-variation column optional).
fn assemble(
    map: &ContactMap,
    ansatz: &BoundaryAnsatz,
    s0: f64,
    cfg: &SolverConfig,
    marked: bool,
    free_level: bool,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    let n = cfg.modes;
    let m = cfg.samples;
    let n_coeff = 2 * n + 1;
    let rows = 4 * n + if marked { 4 } else { 0 };
    let cols = 2 * n_coeff + if free_level { 1 } else { 0 };

    let sw = sweep(map, ansatz, ansatz.level, cfg, true)?;
    let mut residual = negative_modes(&sw.gamma, n);
    if marked {
        residual.extend_from_slice(&marked_block(ansatz, s0));
    }

    let basis = |k: usize, x: f64| -> f64 {
        if k == 0 {
            1.0
        } else {
            let freq = k.div_ceil(2) as f64;
            if k % 2 == 1 {
                (freq * x).cos()
            } else {
                (freq * x).sin()
            }
        }
    };

    let mut jac = DMatrix::zeros(rows, cols);
    // d(negative modes)/d(coefficient): DFT of the chart partial times the
    // basis function
    for (block, partials) in [(0usize, &sw.d_theta), (1usize, &sw.d_s)] {
        for k in 0..n_coeff {
            let col = block * n_coeff + k;
            for mode in 1..=n {
                let mut c1 = Complex64::new(0.0, 0.0);
                let mut c2 = Complex64::new(0.0, 0.0);
                for (j, dp) in partials.iter().enumerate() {
                    let x = TAU * j as f64 / m as f64;
                    let e = Complex64::from_polar(basis(k, x), mode as f64 * x);
                    c1 += Complex64::new(dp[0], dp[1]) * e;
                    c2 += Complex64::new(dp[2], dp[3]) * e;
                }
                c1 /= m as f64;
                c2 /= m as f64;
                let r0 = 4 * (mode - 1);
                jac[(r0, col)] = c1.re;
                jac[(r0 + 1, col)] = c1.im;
                jac[(r0 + 2, col)] = c2.re;
                jac[(r0 + 3, col)] = c2.im;
            }
        }
    }
    if marked {
        let r0 = 4 * n;
        for k in 0..n_coeff {
            jac[(r0, k)] = basis(k, 0.0);
            jac[(r0 + 1, n_coeff + k)] = basis(k, 0.0);
            jac[(r0 + 2, k)] = basis(k, PI / 2.0);
            jac[(r0 + 3, k)] = basis(k, PI);
        }
    }
    if free_level {
        // central difference of the negative-mode block in the level
        let h = 1e-5;
        let up = {
            let mut a = ansatz.clone();
            a.level += h;
            negative_modes(&sweep(map, &a, a.level, cfg, false)?.gamma, n)
        };
        let dn = {
            let mut a = ansatz.clone();
            a.level -= h;
            negative_modes(&sweep(map, &a, a.level, cfg, false)?.gamma, n)
        };
        for r in 0..4 * n {
            jac[(r, cols - 1)] = (up[r] - dn[r]) / (2.0 * h);
        }
    }
    Ok((jac, DVector::from_vec(residual)))
}


/// Debug-only: apply the spectral linearisation at an ansatz to a
/// coefficient direction.
#[doc(hidden)]
pub fn debug_apply_linearization(
    map: &ContactMap,
    ansatz: &BoundaryAnsatz,
    s0: f64,
    cfg: &SolverConfig,
    delta: &[f64],
) -> Result<DVector<f64>> {
    let _ = s0;
    let sw = sweep(map, ansatz, ansatz.level, cfg, true)?;
    let lin = LinearizedSystem {
        d_theta: sw.d_theta,
        d_s: sw.d_s,
        modes: cfg.modes,
    };
    Ok(lin.apply(&DVector::from_vec(delta.to_vec())))
}

/// Debug-only wrapper over the system assembly.
#[doc(hidden)]
pub fn debug_assemble(
    map: &ContactMap,
    ansatz: &BoundaryAnsatz,
    s0: f64,
    cfg: &SolverConfig,
) -> Result<(DMatrix<f64>, DVector<f64>)> {
    assemble(map, ansatz, s0, cfg, true, false)
}

/// Closed-form least-squares solve of the problem linearised at the
/// standard chart of (s₀, t): the chord direction for the damped
/// Gauss–Newton iteration. At the identity map this is the exact inverse;
/// in general it contracts at the size of the chart deformation.
///
/// At the standard disc the trace perturbs as
/// δγ = (e^{i(θ₀+ϑ)}(ic·δθ(ϑ) + κ·δs(ϑ)), δs(ϑ)), κ = −s/c + i c ∂ₛθ,
/// so negative mode −m of component 2 pins δŝ_{m}, and of component 1 pins
/// δθ̂_{m+1}; the marked rows pin δθ̂₀, δθ̂₁ and δŝ₀.
fn standard_chart_correction(
    level: f64,
    s0: f64,
    residual: &DVector<f64>,
    cfg: &SolverConfig,
) -> Result<DVector<f64>> {
    let n = cfg.modes;
    let t = level;
    let params = StandardDiscParams::new(s0, t)?;
    let c = params.radius();
    let theta0 = params.twist();
    let kappa = Complex64::new(-s0 / c, c * crate::standard::theta_s(s0, t)?);
    let ic = Complex64::new(0.0, c);

    let zero = Complex64::new(0.0, 0.0);
    let mut ds_hat = vec![zero; n + 2];
    for m in 1..=n {
        let r2 = Complex64::new(residual[4 * (m - 1) + 2], residual[4 * (m - 1) + 3]);
        ds_hat[m] = -r2.conj();
    }
    let mut dth_hat = vec![zero; n + 1];
    let phase = Complex64::from_polar(1.0, -theta0);
    for m in 1..=n {
        let target = m + 1;
        if target > n {
            break;
        }
        let r1 = Complex64::new(residual[4 * (m - 1)], residual[4 * (m - 1) + 1]);
        let ds_neg = ds_hat[target].conj();
        dth_hat[target] = ((-r1 * phase - kappa * ds_neg) / ic).conj();
    }

    // marked rows: [θf(0), sf(0) − s₀, θf(π/2) − π/2, θf(π) − π]
    let m_theta0 = residual[4 * n];
    let m_s = residual[4 * n + 1];
    let m_theta1 = residual[4 * n + 2];
    let m_theta2 = residual[4 * n + 3];
    let high = |x: f64| -> f64 {
        (2..=n)
            .map(|k| 2.0 * (dth_hat[k] * Complex64::from_polar(1.0, k as f64 * x)).re)
            .sum()
    };
    let t0 = -m_theta0 - high(0.0);
    let tq = -m_theta1 - high(PI / 2.0);
    let tp = -m_theta2 - high(PI);
    let dth0 = 0.5 * (t0 + tp);
    dth_hat[1] = Complex64::new(0.25 * (t0 - tp), 0.5 * (dth0 - tq));
    let ds0 = -m_s - 2.0 * (1..=n).map(|k| ds_hat[k].re).sum::<f64>();

    let n_coeff = 2 * n + 1;
    let mut step = DVector::zeros(2 * n_coeff);
    step[0] = dth0;
    step[n_coeff] = ds0;
    for k in 1..=n {
        step[2 * k - 1] = 2.0 * dth_hat[k].re;
        step[2 * k] = -2.0 * dth_hat[k].im;
        step[n_coeff + 2 * k - 1] = 2.0 * ds_hat[k].re;
        step[n_coeff + 2 * k] = -2.0 * ds_hat[k].im;
    }
    Ok(step)
}

fn apply_step(ansatz: &BoundaryAnsatz, step: &DVector<f64>, scale: f64) -> BoundaryAnsatz {
    let n_coeff = ansatz.theta_coeffs.len();
    let mut out = ansatz.clone();
    for k in 0..n_coeff {
        out.theta_coeffs[k] += scale * step[k];
        out.s_coeffs[k] += scale * step[n_coeff + k];
    }
    out
}

/// Damped Gauss–Newton solve of the Bishop-disc problem at level t with
/// evaluation target uᵗ_{s₀}(1) moved by φ.
pub fn solve_disc(
    map: &ContactMap,
    level: f64,
    s0: f64,
    seed: &BoundaryAnsatz,
    cfg: &SolverConfig,
) -> Result<BishopDisc> {
    cfg.validate()?;
    if s0 * s0 + level * level >= 1.0 {
        return Err(Error::Domain("target parameters must satisfy s² + t² < 1"));
    }
    let mut ansatz = if seed.modes() == cfg.modes {
        seed.clone()
    } else {
        seed.resampled(cfg.modes)
    };
    ansatz.level = level;

    let mut residual = residual_vector(map, &ansatz, s0, cfg)?;
    let mut best_inf = residual.amax();
    let mut iterations = 0;
    while best_inf > cfg.tol_target && iterations < cfg.max_iter {
        iterations += 1;
        // true linearisation at the current ansatz, applied spectrally;
        // the Gauss–Newton step comes from GMRES preconditioned by the
        // closed-form standard-chart inverse
        let sw = sweep(map, &ansatz, level, cfg, true)?;
        let lin = LinearizedSystem {
            d_theta: sw.d_theta,
            d_s: sw.d_s,
            modes: cfg.modes,
        };
        let precond = |v: &DVector<f64>| {
            standard_chart_correction(level, s0, v, cfg).expect("validated parameters")
        };
        let rhs = -&residual;
        let y = gmres(|v| lin.apply(&precond(v)), &rhs, 40, 1e-3);
        let step = precond(&y);
        let current = residual.norm();
        let mut accepted = false;
        let mut tau = 1.0;
        while tau >= cfg.min_step {
            let trial = apply_step(&ansatz, &step, tau);
            match residual_vector(map, &trial, s0, cfg) {
                Ok(tr) if tr.norm() <= (1.0 - 1e-4 * tau) * current => {
                    ansatz = trial;
                    residual = tr;
                    accepted = true;
                    break;
                }
                _ => tau *= 0.5,
            }
        }
        best_inf = residual.amax();
        if !accepted {
            break;
        }
    }
    if best_inf > cfg.tol_res {
        return Err(Error::SolverFailure {
            best_residual: best_inf,
            iterations,
        });
    }

    // Taylor coefficients are the non-negative modes of the solved trace.
    let sw = sweep(map, &ansatz, level, cfg, false)?;
    let m = cfg.samples;
    let mut acc = vec![[Complex64::new(0.0, 0.0); 2]; cfg.taylor_len];
    for (j, g) in sw.gamma.iter().enumerate() {
        let base = Complex64::from_polar(1.0, -TAU * j as f64 / m as f64);
        let w1 = Complex64::new(g[0], g[1]);
        let w2 = Complex64::new(g[2], g[3]);
        let mut rot = Complex64::new(1.0, 0.0);
        for slot in acc.iter_mut() {
            slot[0] += w1 * rot;
            slot[1] += w2 * rot;
            rot *= base;
        }
    }
    let taylor: Vec<[Complex64; 2]> = acc
        .into_iter()
        .map(|s| [s[0] / m as f64, s[1] / m as f64])
        .collect();

    let mut disc = BishopDisc {
        level,
        target_s: s0,
        taylor,
        ansatz,
        residual: best_inf,
        iterations,
        energy: 0.0,
        maslov: 0,
    };
    disc.energy = disc.boundary_energy(cfg.samples);
    disc.maslov = boundary_frame_maslov(map, &disc)?;
    Ok(disc)
}

/// Maslov index of the solved disc from the chart partial frames of S̃ᵗ
/// along its boundary.
pub fn boundary_frame_maslov(map: &ContactMap, disc: &BishopDisc) -> Result<i64> {
    let level = disc.level;
    let ansatz = &disc.ansatz;
    let n = 512;
    let mut frames = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let x = TAU * j as f64 / n as f64;
        let (_, dt, ds) = map.chart_with_partials(level, ansatz.theta_at(x), ansatz.s_at(x))?;
        frames.push((
            [Complex64::new(dt[0], dt[1]), Complex64::new(dt[2], dt[3])],
            [Complex64::new(ds[0], ds[1]), Complex64::new(ds[2], ds[3])],
        ));
    }
    maslov_index_frame(
        move |angle: f64| {
            let idx = ((angle / TAU * n as f64).round() as usize).min(n);
            frames[idx]
        },
        n,
    )
}

/// Singular-value report of the linearised problem at a solved disc.
#[derive(Clone, Debug)]
pub struct RankReport {
    pub rows: usize,
    pub cols: usize,
    pub singular_values: Vec<f64>,
    pub kernel_dim: usize,
    pub threshold: f64,
}

/// Assembles the Jacobian of the residual at the disc and counts the kernel:
/// `free_level` adds the level-variation column, `marked` the four marked
/// rows. Expected kernel dimensions: (false, false) → 4, (true, false) → 5,
/// (false, true) → 0.
pub fn linearization_rank(
    map: &ContactMap,
    disc: &BishopDisc,
    free_level: bool,
    marked: bool,
    cfg: &SolverConfig,
) -> Result<RankReport> {
    if disc.residual > cfg.tol_res {
        return Err(Error::Precondition("disc is not solved to tolerance"));
    }
    let (jac, _) = assemble(map, &disc.ansatz, disc.target_s, cfg, marked, free_level)?;
    let svd = jac.clone().svd(false, false);
    let mut sv: Vec<f64> = svd.singular_values.iter().copied().collect();
    sv.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let threshold = 1e-6 * sv[0];
    let rank = sv.iter().filter(|&&s| s >= threshold).count();
    Ok(RankReport {
        rows: jac.nrows(),
        cols: jac.ncols(),
        kernel_dim: jac.ncols() - rank,
        singular_values: sv,
        threshold,
    })
}

/// Residual of projecting the three discretised Möbius reparametrisation
/// directions onto the numerical kernel of the unmarked fixed-level system.
pub fn mobius_kernel_residual(
    map: &ContactMap,
    disc: &BishopDisc,
    cfg: &SolverConfig,
) -> Result<f64> {
    let (jac, _) = assemble(map, &disc.ansatz, disc.target_s, cfg, false, false)?;
    // null space of J from the eigendecomposition of JᵀJ (the thin SVD of a
    // wide J does not span the cokernel directions)
    let jtj = jac.transpose() * &jac;
    let eig = jtj.symmetric_eigen();
    let lambda_max = eig.eigenvalues.amax();
    let threshold = 1e-12 * lambda_max;
    let mut kernel: Vec<DVector<f64>> = Vec::new();
    for (i, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda < threshold {
            kernel.push(eig.eigenvectors.column(i).into_owned());
        }
    }

    // The Möbius fields a + ibz − āz² restrict on the boundary to
    // reparametrisation speeds δϑ ∈ span{1, cos ϑ, sin ϑ}; they move the
    // chart functions by (thetafun′·δϑ, sfun′·δϑ).
    let n = cfg.modes;
    let m = cfg.samples;
    let n_coeff = 2 * n + 1;
    let mut worst = 0.0_f64;
    for variation in 0..3 {
        let delta = |x: f64| match variation {
            0 => 1.0,
            1 => x.cos(),
            _ => x.sin(),
        };
        let mut coeffs = DVector::zeros(2 * n_coeff);
        for block in 0..2 {
            let deriv_at = |x: f64| -> f64 {
                if block == 0 {
                    disc.ansatz.d_theta_at(x)
                } else {
                    disc.ansatz.d_s_at(x)
                }
            };
            let mut samples_vec = Vec::with_capacity(m);
            for j in 0..m {
                let x = TAU * j as f64 / m as f64;
                samples_vec.push(deriv_at(x) * delta(x));
            }
            let mean = samples_vec.iter().sum::<f64>() / m as f64;
            coeffs[block * n_coeff] = mean;
            for k in 1..=n {
                let mut c = 0.0;
                let mut s = 0.0;
                for (j, &v) in samples_vec.iter().enumerate() {
                    let x = TAU * j as f64 / m as f64;
                    c += v * (k as f64 * x).cos();
                    s += v * (k as f64 * x).sin();
                }
                coeffs[block * n_coeff + 2 * k - 1] = 2.0 * c / m as f64;
                coeffs[block * n_coeff + 2 * k] = 2.0 * s / m as f64;
            }
        }
        let norm = coeffs.norm();
        let mut projected: DVector<f64> = DVector::zeros(2 * n_coeff);
        for b in &kernel {
            projected += b * b.dot(&coeffs);
        }
        worst = worst.max((coeffs - projected).norm() / norm);
    }
    Ok(worst)
}

/// |a_N| / max |a_n| over the Taylor coefficients: the spectral tail that
/// certifies the resolution.
pub fn spectral_tail(disc: &BishopDisc) -> f64 {
    let norm = |a: &[Complex64; 2]| a[0].norm().hypot(a[1].norm());
    let max = disc.taylor.iter().map(|a| norm(a)).fold(0.0_f64, f64::max);
    let tail = disc
        .taylor
        .iter()
        .rev()
        .take(4)
        .map(|a| norm(a))
        .fold(0.0_f64, f64::max);
    tail / max.max(1e-300)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::contact::{reference_hamiltonian, ContactMap};
    use approx::assert_abs_diff_eq;

    fn identity() -> ContactMap {
        ContactMap::identity()
    }

    fn reference() -> ContactMap {
        ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS)
    }

    #[test]
    fn exact_standard_chart_functions_have_tiny_residual() {
        let cfg = SolverConfig::diagnostic(32);
        let ansatz = BoundaryAnsatz::standard(0.3, 0.2, cfg.modes);
        let r = residual_vector(&identity(), &ansatz, 0.2, &cfg).unwrap();
        assert!(r.amax() <= 1e-12, "residual {}", r.amax());
        let mb = marked_block(&ansatz, 0.2);
        assert!(mb.iter().all(|&v| v.abs() < 1e-15));
    }

    #[test]
    fn antiholomorphic_content_is_detected() {
        let cfg = SolverConfig::diagnostic(32);
        let mut ansatz = BoundaryAnsatz::standard(0.0, 0.1, cfg.modes);
        // sfun(ϑ) = 0.1 + ε cos ϑ puts an e^{−iϑ} component into the trace
        let eps = 1e-3;
        ansatz.s_coeffs[1] = eps;
        let r = residual_vector(&identity(), &ansatz, 0.1, &cfg).unwrap();
        assert!(r.amax() >= eps / 4.0, "negative modes missed: {}", r.amax());
    }

    #[test]
    fn identity_solve_recovers_the_standard_disc() {
        let cfg = SolverConfig::diagnostic(32);
        let map = identity();
        let mut seed = BoundaryAnsatz::standard(0.25, -0.3, cfg.modes);
        seed.theta_coeffs[2] = 0.01;
        seed.s_coeffs[1] = -0.02;
        let disc = solve_disc(&map, 0.25, -0.3, &seed, &cfg).unwrap();
        assert!(disc.residual <= cfg.tol_res);

        let params = StandardDiscParams::new(-0.3, 0.25).unwrap();
        let mut sup = 0.0_f64;
        for k in 0..40 {
            for l in 0..10 {
                let z = Complex64::from_polar(l as f64 / 9.0, TAU * k as f64 / 40.0);
                sup = sup.max(disc.eval(z).dist(&params.eval(z).unwrap()));
            }
        }
        assert!(sup <= 1e-8, "sup distance {sup}");
        assert_eq!(disc.maslov, 2);
        assert_abs_diff_eq!(
            disc.energy,
            PI * params.radius() * params.radius(),
            epsilon = 1e-10
        );
        assert!(disc.ansatz.is_monotone(cfg.samples));
        assert!(spectral_tail(&disc) < 1e-8);
    }

    #[test]
    fn evaluation_condition_is_met() {
        let cfg = SolverConfig::default();
        let map = reference();
        let seed = BoundaryAnsatz::standard(0.0, 0.0, cfg.modes);
        let disc = solve_disc(&map, 0.0, 0.0, &seed, &cfg).unwrap();
        // u(1) = φ(uᵗ_{s₀}(1))
        let target = map.forward(
            &StandardDiscParams::new(0.0, 0.0)
                .unwrap()
                .eval(Complex64::new(1.0, 0.0))
                .unwrap(),
        );
        assert!(disc.boundary(0.0).dist(&target) <= 1e-8);
        assert!(disc.eval(Complex64::new(0.0, 0.0)).norm() < 1.0);
        assert!(disc.ansatz.is_monotone(cfg.samples));
        assert!(spectral_tail(&disc) < 1e-8, "tail {}", spectral_tail(&disc));
    }

    #[test]
    fn reference_solve_agrees_with_doubled_resolution() {
        let cfg = SolverConfig::default();
        let map = reference();
        let seed = BoundaryAnsatz::standard(0.0, 0.0, cfg.modes);
        let disc = solve_disc(&map, 0.0, 0.0, &seed, &cfg).unwrap();

        let cfg2 = cfg.doubled();
        let seed2 = disc.ansatz.resampled(cfg2.modes);
        let disc2 = solve_disc(&map, 0.0, 0.0, &seed2, &cfg2).unwrap();

        let mut sup = 0.0_f64;
        for k in 0..48 {
            for l in 0..8 {
                let z = Complex64::from_polar(l as f64 / 7.0, TAU * k as f64 / 48.0);
                sup = sup.max(disc.eval(z).dist(&disc2.eval(z)));
            }
        }
        assert!(sup <= 1e-7, "doubled-resolution discrepancy {sup}");
    }

    #[test]
    fn rim_adjacent_discs_are_standard() {
        // boundary circles with s² + t² near 1 − δ stay in the fixed region
        let cfg = SolverConfig::diagnostic(64);
        let map = reference();
        let (s0, t) = (0.6, 0.6);
        let seed = BoundaryAnsatz::standard(t, s0, cfg.modes);
        let disc = solve_disc(&map, t, s0, &seed, &cfg).unwrap();
        let params = StandardDiscParams::new(s0, t).unwrap();
        let mut sup = 0.0_f64;
        for k in 0..64 {
            let z = Complex64::from_polar(1.0, TAU * k as f64 / 64.0);
            sup = sup.max(disc.eval(z).dist(&params.eval(z).unwrap()));
        }
        assert!(sup <= 1e-9, "rim disc deviates from standard by {sup}");
    }

    #[test]
    fn kernel_dimensions_match_the_index_theory() {
        let cfg = SolverConfig::diagnostic(32);
        let map = identity();
        let seed = BoundaryAnsatz::standard(0.0, 0.0, cfg.modes);
        let disc = solve_disc(&map, 0.0, 0.0, &seed, &cfg).unwrap();

        let fixed = linearization_rank(&map, &disc, false, false, &cfg).unwrap();
        assert_eq!(fixed.kernel_dim, 4);
        let free = linearization_rank(&map, &disc, true, false, &cfg).unwrap();
        assert_eq!(free.kernel_dim, 5);
        let full = linearization_rank(&map, &disc, false, true, &cfg).unwrap();
        assert_eq!(full.kernel_dim, 0);
    }

    #[test]
    fn mobius_directions_lie_in_the_kernel() {
        let cfg = SolverConfig::diagnostic(32);
        let map = identity();
        let seed = BoundaryAnsatz::standard(0.1, 0.2, cfg.modes);
        let disc = solve_disc(&map, 0.1, 0.2, &seed, &cfg).unwrap();
        let residual = mobius_kernel_residual(&map, &disc, &cfg).unwrap();
        assert!(residual <= 1e-5, "projection residual {residual}");
    }

    #[test]
    fn chart_excursion_is_reported() {
        let cfg = SolverConfig::diagnostic(32);
        let mut ansatz = BoundaryAnsatz::standard(0.9, 0.0, cfg.modes);
        ansatz.s_coeffs[0] = 0.43;
        ansatz.s_coeffs[1] = 0.02;
        assert!(matches!(
            residual_vector(&identity(), &ansatz, 0.0, &cfg),
            Err(Error::ChartExcursion)
        ));
    }
}
