use rotor_mub::mub_fock::*;

fn adaptive(dth: f64, dy: f64) -> AbelParams<f64> {
    let s2 = dth.sin().powi(2).min(1.0);
    let scale = s2 / (1.0 + 0.25 * dy * dy);
    let fixed = [1e-2, 1e-3, 1e-4];
    let radii: Vec<f64> = [0.1, 0.03, 0.01]
        .iter()
        .zip(fixed)
        .map(|(&c, f)| 1.0 - (scale * c).min(f))
        .collect();
    let mut p = AbelParams::new(radii, true).unwrap();
    p.settle_tol = 1.0;
    p
}

fn main() {
    let t0 = std::time::Instant::now();
    let mut worst = 0.0f64;
    for (dth, y1, y2) in [
        (0.3047f64, 3.0f64, -3.0f64),
        (0.3047, -3.0, -3.0),
        (2.837, 3.0, 3.0),
        (2.837, 3.0, -3.0),
        (0.7, 1.9, -2.6),
        (1.5708, 0.0, 0.0),
    ] {
        let abel = adaptive(dth, (y1 - y2).abs().max((y1 + y2).abs()));
        let a = FockMubLabel::new(0.01, y1).unwrap();
        let b = FockMubLabel::new(0.01 + dth, y2).unwrap();
        let kernel = overlap_fock(&a, &b).unwrap();
        let series = overlap_fock_series(&a, &b, &abel).unwrap();
        let rel = (kernel - series).norm() / kernel.norm();
        worst = worst.max(rel);
        println!("dth={dth:.4} n_terms={:?} rel={rel:.3e}", abel.n_terms);
    }
    println!("worst {worst:.3e} total {:.2?}", t0.elapsed());
}
