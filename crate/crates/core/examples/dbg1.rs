use rotor_mub::special::hermite_seq;
use rotor_mub::mub_fock::*;
use rotor_mub::hilbert::AngularGrid;
use rotor_mub::scalar::dist_to_pi;

fn main() {
    // hermite at extreme args
    for (n, q) in [(1400usize, 50.0f64), (2000, 50.0), (2600, 50.0)] {
        let v = rotor_mub::special::hermite_fn(n, q);
        println!("f_{n}({q}) = {v:e}");
    }
    // overlap series cross-check error
    let a = FockMubLabel::new(0.3f64, 0.3).unwrap();
    let b = FockMubLabel::new(0.5f64, -1.1).unwrap();
    let abel = AbelParams::default_schedule();
    let kernel = overlap_fock(&a, &b).unwrap();
    let series = overlap_fock_series(&a, &b, &abel).unwrap();
    println!("kernel {kernel} series {series} rel {:e}", (kernel - series).norm() / kernel.norm());
    // schedule n_terms
    println!("n_terms = {:?}", abel.n_terms);
    // pole exponent
    let deltas: Vec<f64> = (0..8).map(|k| 0.4 * 0.78f64.powi(k)).collect();
    let slope = psi_pole_exponent(0.0f64, &abel, &deltas).unwrap();
    println!("pole slope = {slope}");
    // grid vs point
    let grid = AngularGrid::new(64).unwrap();
    let (eg, og) = psi_theta0_parts_grid(0.5f64, grid, &abel);
    for k in [3usize, 17, 40] {
        let phi: f64 = grid.phi(k);
        if dist_to_pi(phi) < 0.1 { println!("k={k} skipped"); continue; }
        let (e, o) = psi_theta0_parts(0.5f64, phi, &abel).unwrap();
        println!("k={k} d_even={:e} d_odd={:e}", (eg[k]-e).norm(), (og[k]-o).norm());
    }
}
