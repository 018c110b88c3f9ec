//! Contactomorphisms of (S³, ξ) generated as time-1 flows of contact
//! Hamiltonians vanishing near the unknot K.
//!
//! A Hamiltonian h built from smooth bumps determines the contact vector
//! field X_h = h·R + Y, where Y ∈ ξ solves dα(Y, ·)|_ξ = −dh|_ξ. Its flow
//! preserves ξ and pulls α back to f·α for a positive conformal factor f.
//! Every map produced here fixes a neighbourhood of K pointwise as long as
//! the bump supports stay clear of the collar U^δ.

#[allow(unused_imports)]
use num_traits::Float;

use alloc::vec::Vec;
use core::f64::consts::PI;
use nalgebra::Vector4;

use crate::error::{Error, Result};
use crate::geometry::{
    complex_structure, contact_frame, lambda_form, PointC2, TangentR4,
};
use crate::standard::StandardDiscParams;

/// Finite-difference step for all map differentials.
pub const FD_STEP: f64 = 1e-5;

/// Tolerance on the contactomorphism property φ*α = fα.
pub const TOL_CONTACT: f64 = 1e-6;

/// One C^∞ bump: amplitude · β(chordal distance / radius) with
/// β(r) = exp(1 − 1/(1−r²)) for r < 1 and 0 beyond.
#[derive(Clone, Copy, Debug)]
pub struct Bump {
    pub center: PointC2,
    pub radius: f64,
    pub amplitude: f64,
}

/// β(r), smooth and compactly supported in [0, 1).
pub fn cutoff(r: f64) -> f64 {
    if r.abs() >= 1.0 {
        0.0
    } else {
        (1.0 - 1.0 / (1.0 - r * r)).exp()
    }
}

/// β'(r)/r = −2(1−r²)⁻² β(r), smooth through r = 0.
fn cutoff_slope_over_r(r: f64) -> f64 {
    if r.abs() >= 1.0 {
        0.0
    } else {
        let w = 1.0 - r * r;
        -2.0 / (w * w) * cutoff(r)
    }
}

/// A contact Hamiltonian given as a sum of bumps, flowed for a fixed time.
#[derive(Clone, Debug)]
pub struct ContactHamiltonian {
    pub bumps: Vec<Bump>,
    pub flow_time: f64,
}

impl ContactHamiltonian {
    pub fn new(bumps: Vec<Bump>, flow_time: f64) -> Self {
        Self { bumps, flow_time }
    }

    pub fn identity() -> Self {
        Self::new(Vec::new(), 1.0)
    }

    pub fn value(&self, p: &PointC2) -> f64 {
        self.bumps
            .iter()
            .map(|b| b.amplitude * cutoff(p.dist(&b.center) / b.radius))
            .sum()
    }

    pub fn gradient(&self, p: &PointC2) -> Vector4<f64> {
        self.value_and_gradient(p).1
    }

    /// Value and ambient gradient in one pass (one cutoff evaluation per
    /// bump).
    pub fn value_and_gradient(&self, p: &PointC2) -> (f64, Vector4<f64>) {
        let mut h = 0.0;
        let mut g = Vector4::zeros();
        for b in &self.bumps {
            let d = p.coords() - b.center.coords();
            let r2 = d.norm_squared() / (b.radius * b.radius);
            if r2 < 1.0 {
                let w = 1.0 - r2;
                let beta = (1.0 - 1.0 / w).exp();
                h += b.amplitude * beta;
                g += d * (b.amplitude * (-2.0 / (w * w)) * beta / (b.radius * b.radius));
            }
        }
        (h, g)
    }

    /// Upper bound on |X_h| over S³, used to prune flow evaluations.
    pub fn speed_bound(&self) -> f64 {
        // max |β'| over [0,1), by scan; β itself is bounded by 1.
        let mut beta_slope_max = 0.0_f64;
        for k in 0..10_000 {
            let r = k as f64 / 10_000.0;
            beta_slope_max = beta_slope_max.max((cutoff_slope_over_r(r) * r).abs());
        }
        self.bumps
            .iter()
            .map(|b| b.amplitude.abs() * (2.0 + beta_slope_max / b.radius))
            .sum()
    }

    /// Minimum clearance (chordal distance minus bump radius) between the
    /// bump supports and the closed collar Ū^δ, sampled over the collar.
    pub fn support_clearance(&self, delta: f64) -> f64 {
        let rim_sq = 1.0 - delta;
        let mut clearance = f64::INFINITY;
        let n_ring = 48;
        let n_ang = 96;
        for i in 0..=n_ring {
            let rho_sq = rim_sq + (1.0 - rim_sq) * i as f64 / n_ring as f64;
            let rho = rho_sq.sqrt().min(1.0 - 1e-9);
            for j in 0..n_ang {
                let psi = 2.0 * PI * j as f64 / n_ang as f64;
                let (s, t) = (rho * psi.cos(), rho * psi.sin());
                let Ok(params) = StandardDiscParams::new(s, t) else {
                    continue;
                };
                for k in 0..n_ang {
                    let p = params.boundary(2.0 * PI * k as f64 / n_ang as f64);
                    for b in &self.bumps {
                        clearance = clearance.min(p.dist(&b.center) - b.radius);
                    }
                }
            }
        }
        clearance
    }
}

/// X_h at p from the raw value and ambient gradient of h:
/// X = h·R + Y with Y = −dh(e₂)e₁ + dh(e₁)e₂ in the frame (e₁, e₂ = J₀e₁)
/// of ξ_p, for which dα(e₁, e₂) = 1.
pub fn contact_vector_field_from(h_value: f64, h_gradient: &Vector4<f64>, p: &PointC2) -> TangentR4 {
    let reeb = 2.0 * complex_structure(&p.coords());
    let (e1, e2) = contact_frame(p);
    let y = e1 * (-h_gradient.dot(&e2)) + e2 * h_gradient.dot(&e1);
    TangentR4::new(*p, reeb * h_value + y)
}

/// X_h of a bump Hamiltonian.
pub fn contact_vector_field(h: &ContactHamiltonian, p: &PointC2) -> Result<TangentR4> {
    if !p.on_sphere() {
        return Err(Error::OffSphere {
            excess: (p.norm_sq() - 1.0).abs(),
        });
    }
    Ok(contact_vector_field_from(h.value(p), &h.gradient(p), p))
}

/// Flow direction.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FlowDirection {
    Forward,
    Inverse,
}

/// The time-1 map of a contact Hamiltonian, integrated by the classical
/// 4th-order scheme with projection to S³ after every step.
#[derive(Clone, Debug)]
pub struct ContactMap {
    hamiltonian: ContactHamiltonian,
    steps: usize,
    reach: f64,
    energy_bound: Option<f64>,
}

impl ContactMap {
    pub const DEFAULT_STEPS: usize = 200;

    pub fn new(hamiltonian: ContactHamiltonian, steps: usize) -> Self {
        let reach = hamiltonian.speed_bound() * hamiltonian.flow_time.abs();
        Self {
            hamiltonian,
            steps,
            reach,
            energy_bound: None,
        }
    }

    pub fn identity() -> Self {
        let mut map = Self::new(ContactHamiltonian::identity(), Self::DEFAULT_STEPS);
        map.energy_bound = Some(1.05);
        map
    }

    pub fn hamiltonian(&self) -> &ContactHamiltonian {
        &self.hamiltonian
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn is_identity(&self) -> bool {
        self.hamiltonian.bumps.is_empty()
    }

    /// Points farther than `radius + reach` from every bump centre cannot
    /// enter any support within the flow time; the orbit is constant there.
    fn moves(&self, p: &PointC2) -> bool {
        self.hamiltonian
            .bumps
            .iter()
            .any(|b| p.dist(&b.center) < b.radius + self.reach)
    }

    fn field(&self, q: &Vector4<f64>) -> Vector4<f64> {
        // Constant along rays: evaluate on the radial projection, so the
        // integrator sees a field defined near the sphere.
        let p = PointC2::from_coords(q).normalized();
        let (h, g) = self.hamiltonian.value_and_gradient(&p);
        contact_vector_field_from(h, &g, &p).v
    }

    pub fn apply(&self, p: &PointC2, direction: FlowDirection) -> PointC2 {
        if self.is_identity() || !self.moves(p) {
            return *p;
        }
        let sign = match direction {
            FlowDirection::Forward => 1.0,
            FlowDirection::Inverse => -1.0,
        };
        let dt = sign * self.hamiltonian.flow_time / self.steps as f64;
        let speed = if self.hamiltonian.flow_time == 0.0 {
            0.0
        } else {
            self.reach / self.hamiltonian.flow_time.abs()
        };
        let mut q = p.normalized().coords();
        for step in 0..self.steps {
            // an orbit point that cannot reach any support in the remaining
            // time stays put
            let remaining = dt.abs() * (self.steps - step) as f64;
            let here = PointC2::from_coords(&q);
            if !self
                .hamiltonian
                .bumps
                .iter()
                .any(|b| here.dist(&b.center) < b.radius + speed * remaining)
            {
                break;
            }
            let k1 = self.field(&q);
            let k2 = self.field(&(q + k1 * (dt / 2.0)));
            let k3 = self.field(&(q + k2 * (dt / 2.0)));
            let k4 = self.field(&(q + k3 * dt));
            q += (k1 + k2 * 2.0 + k3 * 2.0 + k4) * (dt / 6.0);
            q.normalize_mut();
        }
        PointC2::from_coords(&q)
    }

    pub fn forward(&self, p: &PointC2) -> PointC2 {
        self.apply(p, FlowDirection::Forward)
    }

    pub fn inverse(&self, p: &PointC2) -> PointC2 {
        self.apply(p, FlowDirection::Inverse)
    }

    /// Tφ·v by central differences along the projected line p + τv.
    pub fn differential(&self, p: &PointC2, v: &Vector4<f64>, direction: FlowDirection) -> Vector4<f64> {
        let scale = v.norm();
        if scale == 0.0 {
            return Vector4::zeros();
        }
        let step = FD_STEP;
        let unit = v / scale;
        let plus = PointC2::from_coords(&(p.coords() + unit * step)).normalized();
        let minus = PointC2::from_coords(&(p.coords() - unit * step)).normalized();
        (self.apply(&plus, direction).coords() - self.apply(&minus, direction).coords())
            * (scale / (2.0 * step))
    }

    /// Conformal factor f(p) = α_{φ(p)}(Tφ·R_p); positive for genuine
    /// contactomorphisms.
    pub fn conformal_factor(&self, p: &PointC2) -> Result<f64> {
        if self.is_identity() || !self.moves(p) {
            return Ok(1.0);
        }
        let reeb = 2.0 * complex_structure(&p.normalized().coords());
        let image = self.forward(p);
        let pushed = self.differential(p, &reeb, FlowDirection::Forward);
        let f = lambda_form(&image, &pushed);
        if f <= 0.0 {
            return Err(Error::InvalidContactomorphism { value: f });
        }
        Ok(f)
    }

    /// Maximum of the conformal factor over one slab i ∈ `rows` of an
    /// n×n×n hyperspherical midpoint grid; exposed so a driver can scan
    /// slabs in parallel.
    pub fn conformal_factor_max_slab(&self, n: usize, rows: core::ops::Range<usize>) -> Result<f64> {
        let mut max = f64::MIN;
        for i in rows {
            let a = PI * (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let b = PI * (j as f64 + 0.5) / n as f64;
                for k in 0..n {
                    let c = 2.0 * PI * (k as f64 + 0.5) / n as f64;
                    let p = PointC2::new(
                        a.cos(),
                        a.sin() * b.cos(),
                        a.sin() * b.sin() * c.cos(),
                        a.sin() * b.sin() * c.sin(),
                    );
                    max = max.max(self.conformal_factor(&p)?);
                }
            }
        }
        Ok(max)
    }

    /// C(φ) = 1.05 · max f over an n³ sample grid of S³ (5% safety pad).
    pub fn compute_energy_constant(&mut self, n: usize) -> Result<f64> {
        if self.is_identity() {
            self.energy_bound = Some(1.05);
            return Ok(1.05);
        }
        let c = 1.05 * self.conformal_factor_max_slab(n, 0..n)?;
        self.energy_bound = Some(c);
        Ok(c)
    }

    pub fn set_energy_bound(&mut self, c: f64) {
        self.energy_bound = Some(c);
    }

    pub fn energy_bound(&self) -> Option<f64> {
        self.energy_bound
    }

    /// Chart of the moved level sphere S̃ᵗ = φ(Sᵗ):
    /// Φ̃ₜ(θ, s) = φ(uᵗₛ(e^{iθ})).
    pub fn image_sphere_chart(&self, t: f64, theta: f64, s: f64) -> Result<PointC2> {
        let params = StandardDiscParams::new(s, t)?;
        Ok(self.forward(&params.boundary(theta)))
    }

    /// Chart value together with its partials ∂_θΦ̃ and ∂_sΦ̃ by central
    /// differences.
    pub fn chart_with_partials(
        &self,
        t: f64,
        theta: f64,
        s: f64,
    ) -> Result<(PointC2, Vector4<f64>, Vector4<f64>)> {
        let value = self.image_sphere_chart(t, theta, s)?;
        let h = FD_STEP;
        let d_theta = (self.image_sphere_chart(t, theta + h, s)?.coords()
            - self.image_sphere_chart(t, theta - h, s)?.coords())
            / (2.0 * h);
        let d_s = (self.image_sphere_chart(t, theta, s + h)?.coords()
            - self.image_sphere_chart(t, theta, s - h)?.coords())
            / (2.0 * h);
        Ok((value, d_theta, d_s))
    }
}

/// The reference nontrivial contactomorphism used throughout the tests and
/// golden runs: one bump of amplitude 0.05 and radius 0.5 centred at
/// (0, 1, 0, 0), flowed for time 1.
pub fn reference_hamiltonian() -> ContactHamiltonian {
    ContactHamiltonian::new(
        alloc::vec![Bump {
            center: PointC2::new(0.0, 1.0, 0.0, 0.0),
            radius: 0.5,
            amplitude: 0.05,
        }],
        1.0,
    )
}
