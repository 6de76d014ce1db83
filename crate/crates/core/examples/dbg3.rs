use rotor_mub::hilbert::LTruncation;
use rotor_mub::stereo_ops::*;
use rotor_mub::linalg;
use rotor_mub::scalar::cr;

fn main() {
    for l_max in [24usize, 48, 96, 128] {
        let trunc = LTruncation::new(l_max);
        let t0 = std::time::Instant::now();
        let r = qp_commutator_residual::<f64>(trunc).unwrap();
        println!("l_max={l_max}: [Q,P] residual {r:.3e}  ({:?})", t0.elapsed());
        // [L,E] = E on smooth state with cyclic closure
        let e = cyclic_shift_matrix::<f64>(trunc);
        let mut l = linalg::zeros::<f64>(trunc.dim());
        for (i, lv) in trunc.l_values().enumerate() {
            l[[i, i]] = cr(lv as f64);
        }
        let comm = linalg::commutator(&l, &e);
        let v = smooth_l_state(trunc, 1.0, 2.4);
        let got = linalg::matvec(&comm, &v);
        let want = linalg::matvec(&e, &v);
        let mut dev = 0.0f64;
        for (a, b) in got.iter().zip(&want) { dev = dev.max((a - b).norm()); }
        println!("          [L,E]=E dev {dev:.3e}");
        // spectral content of the smooth state at the edge
        let c_edge = v[0].norm().max(v[trunc.dim()-1].norm());
        println!("          edge coeff {c_edge:.3e}");
    }
}
