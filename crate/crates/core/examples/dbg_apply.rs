// debug: spectral Jacobian application vs finite differences
use discfill_core::contact::{reference_hamiltonian, ContactMap};
use discfill_core::solver::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() {
    let cfg = SolverConfig { tol_res: 1.0, ..SolverConfig::diagnostic(32) };
    let map = ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS);
    let mut ansatz = BoundaryAnsatz::standard(0.2, 0.3, cfg.modes);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for k in 1..ansatz.theta_coeffs.len() {
        ansatz.theta_coeffs[k] = rng.random_range(-1e-3..1e-3);
        ansatz.s_coeffs[k] = rng.random_range(-1e-3..1e-3);
    }
    let n_coeff = ansatz.theta_coeffs.len();
    let h = 1e-7;
    for trial in 0..4 {
        let mut delta = vec![0.0; 2 * n_coeff];
        for d in delta.iter_mut() {
            *d = rng.random_range(-1.0..1.0);
        }
        // high-mode-only direction on the last trial
        if trial == 3 {
            for (i, d) in delta.iter_mut().enumerate() {
                if !(i % n_coeff == 0 || i % n_coeff >= n_coeff - 4) {
                    *d = 0.0;
                }
            }
        }
        let jd = debug_apply_linearization(&map, &ansatz, 0.3, &cfg, &delta).unwrap();
        let mut up = ansatz.clone();
        let mut dn = ansatz.clone();
        for k in 0..n_coeff {
            up.theta_coeffs[k] += h * delta[k];
            up.s_coeffs[k] += h * delta[n_coeff + k];
            dn.theta_coeffs[k] -= h * delta[k];
            dn.s_coeffs[k] -= h * delta[n_coeff + k];
        }
        let ru = residual_vector(&map, &up, 0.3, &cfg).unwrap();
        let rd = residual_vector(&map, &dn, 0.3, &cfg).unwrap();
        let fd = (ru - rd) / (2.0 * h);
        let diff = (&fd - &jd).norm();
        println!("trial {trial}: |fd| {:.4e} |apply| {:.4e} |diff| {:.3e}", fd.norm(), jd.norm(), diff);
    }
}
