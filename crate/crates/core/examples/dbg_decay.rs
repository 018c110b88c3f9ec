// debug: Fourier decay of a boundary circle pushed by the reference map
use discfill_core::contact::{reference_hamiltonian, ContactMap};
use discfill_core::standard::StandardDiscParams;
use num_complex::Complex64;

fn main() {
    let map = ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS);
    let params = StandardDiscParams::new(0.0, 0.0).unwrap();
    let m = 8192usize;
    let tau = std::f64::consts::TAU;
    let samples: Vec<[Complex64; 2]> = (0..m)
        .map(|j| {
            let p = map.forward(&params.boundary(tau * j as f64 / m as f64));
            [p.z1(), p.z2()]
        })
        .collect();
    for n in [16i64, 32, 48, 64, 96, 128, 192, 256, 320, 400, 512] {
        let mut c = [Complex64::new(0.0, 0.0); 2];
        for (j, s) in samples.iter().enumerate() {
            let e = Complex64::from_polar(1.0, -(n as f64) * tau * j as f64 / m as f64);
            c[0] += s[0] * e;
            c[1] += s[1] * e;
        }
        let mag = (c[0].norm().max(c[1].norm())) / m as f64;
        println!("mode {n:4}: {mag:.3e}   (sqrt n = {:.2})", (n as f64).sqrt());
    }
}
