// debug: coefficient tails of the stalled iterate
use discfill_core::contact::{reference_hamiltonian, ContactMap};
use discfill_core::solver::*;

fn main() {
    let cfg = SolverConfig { tol_res: 1.0, ..SolverConfig::default() };
    let map = ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS);
    let seed = BoundaryAnsatz::standard(0.2, 0.3, cfg.modes);

    // residual of the pure seed at the top modes
    let r0 = residual_vector(&map, &seed, 0.3, &cfg).unwrap();
    let n = cfg.modes;
    for m in [440usize, 444, 446, 447, 448] {
        println!(
            "seed residual mode -{m}: comp1 ({:.2e},{:.2e}) comp2 ({:.2e},{:.2e})",
            r0[4 * (m - 1)], r0[4 * (m - 1) + 1], r0[4 * (m - 1) + 2], r0[4 * (m - 1) + 3]
        );
    }

    let disc = solve_disc(&map, 0.2, 0.3, &seed, &cfg).unwrap();
    println!("stalled at {:.3e} after {}", disc.residual, disc.iterations);
    let a = &disc.ansatz;
    for k in [430usize, 440, 445, 446, 447, 448] {
        println!(
            "theta mode {k}: ({:.2e},{:.2e})   s mode {k}: ({:.2e},{:.2e})",
            a.theta_coeffs[2 * k - 1], a.theta_coeffs[2 * k],
            a.s_coeffs[2 * k - 1], a.s_coeffs[2 * k]
        );
    }
}
