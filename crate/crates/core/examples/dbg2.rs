use rotor_mub::mub_fock::*;

fn main() {
    let abel = AbelParams::default_schedule();
    for k in 0..12 {
        let delta = 0.3 * 0.7f64.powi(k);
        let phi = std::f64::consts::PI - delta;
        match psi_theta0_parts(0.0f64, phi, &abel) {
            Ok((e, o)) => {
                let psi = (e + o).norm();
                let pred = 0.6906 * delta.powf(-0.75);
                println!("delta={delta:9.6} |psi|={psi:12.6} pred={pred:12.6}");
            }
            Err(err) => println!("delta={delta:9.6}: {err}"),
        }
    }
    let deltas: Vec<f64> = (0..10).map(|k| 0.3 * 0.7f64.powi(k)).collect();
    match psi_pole_exponent(0.0f64, &abel, &deltas) {
        Ok(s) => println!("fit slope over (0..10): {s}"),
        Err(e) => println!("fit err: {e}"),
    }
    let deltas: Vec<f64> = (2..10).map(|k| 0.3 * 0.7f64.powi(k)).collect();
    match psi_pole_exponent(0.0f64, &abel, &deltas) {
        Ok(s) => println!("fit slope over (2..10): {s}"),
        Err(e) => println!("fit err: {e}"),
    }
}
