use rotor_mub::mub_stereo::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;

fn main() {
    let quad = OverlapQuad::<f64>::default();
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    let t0 = std::time::Instant::now();
    for i in 0..20 {
        let (t1, t2) = loop {
            let t1: f64 = rng.gen_range(0.15..PI - 0.15);
            let t2: f64 = rng.gen_range(0.15..PI - 0.15);
            if (t1 - t2).sin().abs() >= 0.1 { break (t1, t2); }
        };
        let y1 = rng.gen_range(-2.0..2.0);
        let y2 = rng.gen_range(-2.0..2.0);
        let a = StereoMubLabel::new(t1, y1).unwrap();
        let b = StereoMubLabel::new(t2, y2).unwrap();
        match overlap_stereo(&a, &b, &quad) {
            Ok(v) => {
                let want = 1.0 / (2.0 * PI * (t1 - t2).sin().abs());
                let rel = (v.norm_sqr() - want).abs() / want;
                worst = worst.max(rel);
                if rel > 1e-7 { println!("i={i} t1={t1:.3} t2={t2:.3} y1={y1:.2} y2={y2:.2} rel={rel:.3e}"); }
            }
            Err(e) => println!("i={i} t1={t1:.3} t2={t2:.3} y1={y1:.2} y2={y2:.2}: {e}"),
        }
    }
    println!("worst rel err = {worst:.3e}, elapsed {:.2?}", t0.elapsed());
}
