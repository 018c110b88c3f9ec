// debug: per-node solve cost at production resolution
use discfill_core::contact::{reference_hamiltonian, ContactMap};
use discfill_core::solver::*;
use std::time::Instant;

fn main() {
    let cfg = SolverConfig::default();
    let map = ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS);
    for (s0, t) in [(0.0, 0.0), (0.3, 0.2), (0.0, 0.6), (-0.5, 0.1)] {
        let seed = BoundaryAnsatz::standard(t, s0, cfg.modes);
        let start = Instant::now();
        match solve_disc(&map, t, s0, &seed, &cfg) {
            Ok(d) => println!(
                "({s0:5.2},{t:5.2}): res {:.2e} iters {:2} tail {:.2e} maslov {} energy {:.6}  [{:?}]",
                d.residual, d.iterations, spectral_tail(&d), d.maslov, d.energy, start.elapsed()
            ),
            Err(e) => println!("({s0:5.2},{t:5.2}): {e:?} [{:?}]", start.elapsed()),
        }
    }
    let id = ContactMap::identity();
    let seed = BoundaryAnsatz::standard(0.2, 0.1, cfg.modes);
    let start = Instant::now();
    let d = solve_disc(&id, 0.2, 0.1, &seed, &cfg).unwrap();
    println!("identity: res {:.2e} iters {} [{:?}]", d.residual, d.iterations, start.elapsed());
}
