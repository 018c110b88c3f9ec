// debug: spectrum of pushed circles at several (s,t)
use discfill_core::contact::{reference_hamiltonian, ContactMap};
use discfill_core::standard::StandardDiscParams;
use num_complex::Complex64;

fn main() {
    let map = ContactMap::new(reference_hamiltonian(), ContactMap::DEFAULT_STEPS);
    let m = 16384usize;
    let tau = std::f64::consts::TAU;
    for (s, t) in [(0.0, 0.0), (0.3, 0.2), (0.2, 0.3), (0.5, 0.3), (0.1, -0.4)] {
        let params = StandardDiscParams::new(s, t).unwrap();
        let samples: Vec<[Complex64; 2]> = (0..m)
            .map(|j| {
                let p = map.forward(&params.boundary(tau * j as f64 / m as f64));
                [p.z1(), p.z2()]
            })
            .collect();
        print!("({s:4.1},{t:4.1}): ");
        for n in [64i64, 128, 256, 448, 640, 896] {
            let mut c = [Complex64::new(0.0, 0.0); 2];
            for (j, smp) in samples.iter().enumerate() {
                let e = Complex64::from_polar(1.0, -(n as f64) * tau * j as f64 / m as f64);
                c[0] += smp[0] * e;
                c[1] += smp[1] * e;
            }
            print!("{n}:{:.1e}  ", (c[0].norm().max(c[1].norm())) / m as f64);
        }
        println!();
    }
}
