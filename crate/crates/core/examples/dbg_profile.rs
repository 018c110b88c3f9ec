// debug: residual mode profile at the stall
use discfill_core::contact::{reference_hamiltonian, ContactMap};
use discfill_core::solver::*;

fn main() {
    let cfg = SolverConfig { tol_res: 1.0, ..SolverConfig::default() };
    let map = ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS);
    let seed = BoundaryAnsatz::standard(0.2, 0.3, cfg.modes);
    let disc = solve_disc(&map, 0.2, 0.3, &seed, &cfg).unwrap();
    println!("stalled residual {:.3e} after {} iterations", disc.residual, disc.iterations);
    let r = residual_vector(&map, &disc.ansatz, 0.3, &cfg).unwrap();
    let n = cfg.modes;
    for chunk in [1usize, 2, 4, 8, 16, 32, 64, 128, 256, 448] {
        let lo = chunk.saturating_sub(chunk / 2).max(1);
        let mut max = 0.0f64;
        for m in lo..=chunk.min(n) {
            for k in 0..4 {
                max = max.max(r[4 * (m - 1) + k].abs());
            }
        }
        println!("modes {lo:3}..{chunk:3}: max {max:.3e}");
    }
    println!("marked block: {:.3e} {:.3e} {:.3e} {:.3e}", r[4*n], r[4*n+1], r[4*n+2], r[4*n+3]);
    // where is the max?
    let mut imax = 0; let mut vmax = 0.0;
    for (i, &v) in r.iter().enumerate() { if v.abs() > vmax { vmax = v.abs(); imax = i; } }
    println!("amax {:.3e} at entry {} (mode {})", vmax, imax, imax / 4 + 1);
}
