// debug: achievable residual and coefficient decay vs mode cutoff
use discfill_core::contact::{reference_hamiltonian, ContactMap};
use discfill_core::solver::*;

fn main() {
    let map = ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS);
    let mut seed = BoundaryAnsatz::standard(0.0, 0.0, 32);
    for modes in [32usize, 48, 64, 96] {
        let cfg = SolverConfig {
            modes,
            samples: (8 * modes).max(256),
            taylor_len: modes + 1,
            tol_res: 1.0, // accept whatever we reach; we want the floor
            ..SolverConfig::default()
        };
        let s = seed.resampled(modes);
        match solve_disc(&map, 0.0, 0.0, &s, &cfg) {
            Ok(d) => {
                let tail = |c: &[f64]| -> f64 {
                    let n = (c.len() - 1) / 2;
                    (c[2 * n - 1].abs()).max(c[2 * n].abs())
                };
                println!(
                    "N = {modes:3}: residual {:.3e} iters {} theta-tail {:.2e} s-tail {:.2e}",
                    d.residual,
                    d.iterations,
                    tail(&d.ansatz.theta_coeffs),
                    tail(&d.ansatz.s_coeffs)
                );
                seed = d.ansatz.clone();
            }
            Err(e) => println!("N = {modes:3}: {e:?}"),
        }
    }
}
