//! Acceptance suite: every machine-checkable identity the library promises,
//! at desk scale (n_max = 400, grid 2048), each criterion printing one
//! pass/fail line with its measured extremes and wall time.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the lines.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use rotor_mub::fock::{
    build_e_fock, build_l_from_n, build_qp_from_el, build_shift_direct, l_of_n, n_of_l,
    qp_ladder_reference, FockTruncation,
};
use rotor_mub::grid::LineGrid;
use rotor_mub::hilbert::AngularGrid;
use rotor_mub::linalg::{commutator, identity};
use rotor_mub::mub_fock::{
    chi_decompose, overlap_fock, overlap_fock_series, psi_pole_exponent, psi_series,
    psi_theta0_parts_grid, psi_via_theta0, AbelParams, FockMubLabel,
};
use rotor_mub::mub_stereo::{overlap_stereo, OverlapQuad, StereoMubLabel};
use rotor_mub::operator::{BasisIndexing, TruncatedOperator};
use rotor_mub::scalar::{c, cr, dist_to_pi, unit_phase};
use rotor_mub::stereo_ops;

use std::f64::consts::PI;

const SEED: u64 = 7;

fn criterion(
    number: usize,
    name: &str,
    budget_seconds: f64,
    body: impl FnOnce() -> Result<String, String>,
) {
    let start = Instant::now();
    let outcome = body();
    let elapsed = start.elapsed().as_secs_f64();
    match outcome {
        Ok(detail) => {
            println!(
                "[acceptance] criterion {number:02} {name}: PASS ({detail}; {elapsed:.2} s)"
            );
            assert!(
                elapsed < budget_seconds,
                "criterion {number} runtime {elapsed:.2} s exceeds budget {budget_seconds} s"
            );
        }
        Err(msg) => {
            println!("[acceptance] criterion {number:02} {name}: FAIL ({msg}; {elapsed:.2} s)");
            panic!("criterion {number} {name}: {msg}");
        }
    }
}

/// Damping schedule for the truncated-series evaluation of a boundary
/// overlap: the kernel's boundary scale is sin^2(dtheta) shrunk by the
/// separation of the colliding delta channels, so the radii track both.
fn series_schedule(dtheta: f64, y1: f64, y2: f64) -> AbelParams<f64> {
    let s2 = dtheta.sin().powi(2).min(1.0);
    let sep = (y1 - y2).abs().max((y1 + y2).abs());
    let scale = s2 / (1.0 + 0.25 * sep * sep);
    let radii: Vec<f64> = [0.1, 0.03, 0.01]
        .iter()
        .zip([1e-2, 1e-3, 1e-4])
        .map(|(&c, f)| 1.0 - (scale * c).min(f))
        .collect();
    let mut params = AbelParams::new(radii, true).unwrap();
    params.settle_tol = 1.0; // the check below measures the actual error
    params
}

#[test]
fn criterion_01_unbiasedness_fock_family() {
    criterion(1, "unbiasedness of the Fock-route family", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut draws = Vec::new();
        while draws.len() < 75 {
            let t1: f64 = rng.gen_range(0.0..PI);
            let t2: f64 = rng.gen_range(0.0..PI);
            if (t1 - t2).sin().abs() < 0.05 {
                continue;
            }
            let y1 = rng.gen_range(-3.0..3.0);
            let y2 = rng.gen_range(-3.0..3.0);
            draws.push((t1, t2, y1, y2));
        }
        let mut worst_kernel = 0.0f64;
        for &(t1, t2, y1, y2) in &draws {
            let a = FockMubLabel::new(t1, y1).unwrap();
            let b = FockMubLabel::new(t2, y2).unwrap();
            let v = overlap_fock(&a, &b).map_err(|e| e.to_string())?;
            let want = 1.0 / (2.0 * PI * (t1 - t2).sin().abs());
            worst_kernel = worst_kernel.max((v.norm_sqr() - want).abs() / want);
        }
        if worst_kernel >= 1e-10 {
            return Err(format!("kernel |overlap|^2 rel err {worst_kernel:.3e} >= 1e-10"));
        }
        // truncated-series cross-check on ten sweep points; the series
        // oracle needs the bases reasonably non-degenerate to converge in
        // feasible length, so the subset keeps |sin dtheta| >= 0.3
        let mut worst_series = 0.0f64;
        let mut used = 0;
        for &(t1, t2, y1, y2) in draws.iter().filter(|d| (d.0 - d.1).sin().abs() >= 0.3) {
            if used == 10 {
                break;
            }
            used += 1;
            let a = FockMubLabel::new(t1, y1).unwrap();
            let b = FockMubLabel::new(t2, y2).unwrap();
            let kernel = overlap_fock(&a, &b).unwrap();
            let series = overlap_fock_series(&a, &b, &series_schedule(t2 - t1, y1, y2))
                .map_err(|e| e.to_string())?;
            worst_series = worst_series.max((kernel - series).norm() / kernel.norm());
        }
        if used < 10 {
            return Err(format!("only {used} series cross-check points drawn"));
        }
        if worst_series >= 1e-4 {
            return Err(format!("series cross-check rel err {worst_series:.3e} >= 1e-4"));
        }
        Ok(format!(
            "75 pts kernel rel err {worst_kernel:.2e}; 10 pts series rel err {worst_series:.2e}"
        ))
    });
}

#[test]
fn criterion_02_unbiasedness_stereographic_family() {
    criterion(2, "unbiasedness of the stereographic family", 10.0, || {
        let quad = OverlapQuad::<f64>::default();
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let mut worst = 0.0f64;
        for _ in 0..20 {
            let (t1, t2) = loop {
                let t1: f64 = rng.gen_range(0.15..PI - 0.15);
                let t2: f64 = rng.gen_range(0.15..PI - 0.15);
                if (t1 - t2).sin().abs() >= 0.1 {
                    break (t1, t2);
                }
            };
            let y1 = rng.gen_range(-2.0..2.0);
            let y2 = rng.gen_range(-2.0..2.0);
            let a = StereoMubLabel::new(t1, y1).unwrap();
            let b = StereoMubLabel::new(t2, y2).unwrap();
            let v = overlap_stereo(&a, &b, &quad).map_err(|e| e.to_string())?;
            let want = 1.0 / (2.0 * PI * (t1 - t2).sin().abs());
            worst = worst.max((v.norm_sqr() - want).abs() / want);
        }
        if worst >= 1e-6 {
            return Err(format!("quadrature |overlap|^2 rel err {worst:.3e} >= 1e-6"));
        }
        Ok(format!("20 quadrature overlaps, worst rel err {worst:.2e}"))
    });
}

#[test]
fn criterion_03_heisenberg_pair_round_trip() {
    criterion(3, "Heisenberg pair round trip at n_max = 400", 10.0, || {
        let trunc = FockTruncation::new(400).unwrap();
        let margin = 2;
        let (q, p) = build_qp_from_el::<f64>(trunc);
        // Q + iP against sqrt(2N+2) A, max entry over the whole truncation
        let s = &q.matrix + &p.matrix.mapv(|z| z * c(0.0, 1.0));
        let got = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, s);
        let ladder_dev = got.interior_max_dev(&qp_ladder_reference::<f64>(trunc), 0);
        if ladder_dev >= 1e-12 {
            return Err(format!("Q+iP vs ladder form: {ladder_dev:.3e} >= 1e-12"));
        }
        // [Q, P] = i on the interior
        let comm = commutator(&q.matrix, &p.matrix);
        let i_id = identity::<f64>(trunc.dim()).mapv(|z| z * c(0.0, 1.0));
        let comm_dev = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, comm)
            .interior_max_dev(
                &TruncatedOperator::new(trunc, BasisIndexing::LIndexed, i_id),
                margin,
            );
        if comm_dev >= 1e-12 {
            return Err(format!("[Q,P] - i on interior: {comm_dev:.3e} >= 1e-12"));
        }
        // [L, E] = E on the interior
        let e = build_e_fock::<f64>(trunc);
        let l = build_l_from_n::<f64>(trunc);
        let le = commutator(&l.matrix, &e.matrix);
        let le_dev = TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, le)
            .interior_max_dev(&e, margin);
        if le_dev >= 1e-13 {
            return Err(format!("[L,E] - E on interior: {le_dev:.3e} >= 1e-13"));
        }
        // assembled shift against the direct one
        let e_dev = e.interior_max_dev(&build_shift_direct::<f64>(trunc), margin);
        if e_dev >= 1e-14 {
            return Err(format!("assembled vs direct shift: {e_dev:.3e} >= 1e-14"));
        }
        Ok(format!(
            "ladder {ladder_dev:.1e}, [Q,P] {comm_dev:.1e}, [L,E] {le_dev:.1e}, shift {e_dev:.1e}"
        ))
    });
}

#[test]
fn criterion_04_index_bijection() {
    criterion(4, "number/angular-momentum index bijection", 1.0, || {
        for l in -1_000_000i64..=1_000_000 {
            if l_of_n(n_of_l(l)) != l {
                return Err(format!("round trip broken at l = {l}"));
            }
        }
        for (l, n) in [(0i64, 0i64), (-1, 1), (1, 2)] {
            if n_of_l(l) != n {
                return Err(format!("n_of_l({l}) = {} != {n}", n_of_l(l)));
            }
        }
        Ok("exact round trip over |l| <= 1e6 and spot values".to_string())
    });
}

#[test]
fn criterion_05_theta_reduction_identity() {
    criterion(5, "theta-reduction rearrangement", 1.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        let single = AbelParams::single(0.99).unwrap();
        let mut worst = 0.0f64;
        for _ in 0..10 {
            let label = FockMubLabel::new(rng.gen_range(0.0..PI), rng.gen_range(-1.5..1.5))
                .unwrap();
            let phi = rng.gen_range(-3.0..3.0);
            let direct = psi_series(&label, phi, &single).map_err(|e| e.to_string())?;
            let reduced = psi_via_theta0(&label, phi, &single).map_err(|e| e.to_string())?;
            worst = worst.max((direct - reduced).norm());
        }
        if worst >= 1e-13 {
            return Err(format!("rearrangement deviation {worst:.3e} >= 1e-13"));
        }
        Ok(format!("10 points, worst deviation {worst:.2e}"))
    });
}

#[test]
fn criterion_06_pole_structure() {
    criterion(6, "pole structure of the angular wave functions", 10.0, || {
        let abel = AbelParams::default_schedule();
        // chi_minus at y = 0 vanishes identically
        let mut chi_minus_max = 0.0f64;
        for phi in [-2.9, -1.7, -0.6, 0.5, 1.6, 2.8] {
            let (_, chi_m) = chi_decompose(0.0, phi, &abel).map_err(|e| e.to_string())?;
            chi_minus_max = chi_minus_max.max(chi_m.norm());
        }
        if chi_minus_max >= 1e-10 {
            return Err(format!("chi_minus(y=0) reaches {chi_minus_max:.3e} >= 1e-10"));
        }
        // reconstruction from the stripped residues across the windowed grid
        let grid = AngularGrid::new(2048).unwrap();
        let y = 0.5f64;
        let (even, odd) = psi_theta0_parts_grid(y, grid, &abel);
        let mut recon_max = 0.0f64;
        for k in 0..grid.size {
            let phi: f64 = grid.phi(k);
            if dist_to_pi(phi) < 0.05 {
                continue;
            }
            let root = (1.0 + phi.cos()).sqrt();
            let osc = 0.5 * y * y * (phi / 2.0).tan();
            let chi_p = even[k].scale(root) * unit_phase(-osc);
            let chi_m = odd[k].scale(root) * unit_phase(osc);
            let rebuilt = (unit_phase(osc) * chi_p + unit_phase(-osc) * chi_m).unscale(root);
            let psi = even[k] + odd[k];
            recon_max = recon_max.max((psi - rebuilt).norm() / psi.norm().max(1.0));
        }
        if recon_max >= 1e-10 {
            return Err(format!("chi reconstruction deviation {recon_max:.3e} >= 1e-10"));
        }
        // divergence exponent of |psi(y=0)| in (1 + cos phi), stated -1/2.
        // The damped-sum limit actually scales like (1 + cos phi)^{-3/8}:
        // the y = 0 coefficients f_{2l}(0) fall off like l^{-1/4}, so the
        // boundary sum near the pole is Gamma(3/4) (i delta)^{-3/4} with
        // delta = pi - phi. The measured fit lands on -3/8 and cannot meet
        // the stated -1/2 within 0.02.
        let deltas: Vec<f64> = (0..6).map(|k| 0.3 * 0.7f64.powi(k)).collect();
        let slope = psi_pole_exponent(0.0, &abel, &deltas).map_err(|e| e.to_string())?;
        let exponent_dev = (slope + 0.5).abs();
        if exponent_dev >= 0.02 {
            return Err(format!(
                "fitted exponent {slope:.4} differs from the stated -1/2 by {exponent_dev:.3} \
                 (>= 0.02); the damped-sum limit scales as (1+cos phi)^(-3/8), matching the \
                 measured fit; chi_minus {chi_minus_max:.1e} and reconstruction {recon_max:.1e} \
                 subchecks pass"
            ));
        }
        Ok(format!(
            "exponent {slope:.4}, chi_minus {chi_minus_max:.1e}, reconstruction {recon_max:.1e}"
        ))
    });
}

#[test]
fn criterion_07_sinc_overlap_law() {
    criterion(7, "sinc law of the lambda overlaps", 2.0, || {
        let mut worst = 0.0f64;
        for k in 0..=30 {
            let d = 0.1 * k as f64;
            let got = stereo_ops::lambda_overlap(0.25, 0.25 + d);
            let want = stereo_ops::lambda_overlap_reference(d);
            worst = worst.max((got - want).abs());
        }
        if worst >= 1e-10 {
            return Err(format!("sinc law deviation {worst:.3e} >= 1e-10"));
        }
        let mut integer_worst = 0.0f64;
        for d in [1.0f64, 2.0, 3.0] {
            integer_worst = integer_worst.max(stereo_ops::lambda_overlap(0.3, 0.3 + d).abs());
        }
        if integer_worst >= 1e-12 {
            return Err(format!("integer orthogonality {integer_worst:.3e} >= 1e-12"));
        }
        Ok(format!(
            "grid dev {worst:.2e}, integer spacing dev {integer_worst:.2e}"
        ))
    });
}

#[test]
fn criterion_08_pathology_exhibit() {
    criterion(8, "hermitian-but-not-self-adjoint exhibit", 10.0, || {
        let grid = LineGrid::<f64>::standard();
        let lambdas = [0.5, 2f64.sqrt() - 1.0, 2.3];
        let mut worst_res = 0.0f64;
        for &l in &lambdas {
            worst_res = worst_res.max(stereo_ops::lambda_eigenresidual(grid, l));
        }
        if worst_res >= 1e-8 {
            return Err(format!("eigenresidual {worst_res:.3e} >= 1e-8"));
        }
        let mut worst_half = 0.0f64;
        for &l in &lambdas {
            let got = stereo_ops::lambda_overlap(l, l + 0.5).abs();
            worst_half = worst_half.max((got - 2.0 / PI).abs());
        }
        if worst_half >= 1e-6 {
            return Err(format!("|<lambda|lambda+1/2>| off 2/pi by {worst_half:.3e} >= 1e-6"));
        }
        let profile = |phi: f64| cr((-phi * phi / (2.0 * 0.19f64.powi(2))).exp());
        for lambda0 in [0.0, 0.3] {
            let r16 = stereo_ops::overcompleteness_residual(lambda0, 16, profile);
            let r32 = stereo_ops::overcompleteness_residual(lambda0, 32, profile);
            let r64 = stereo_ops::overcompleteness_residual(lambda0, 64, profile);
            if !(r16 > r32 && r32 > r64) {
                return Err(format!(
                    "overcompleteness residuals not decreasing at lambda0 = {lambda0}: \
                     {r16:.2e}, {r32:.2e}, {r64:.2e}"
                ));
            }
        }
        Ok(format!(
            "eigenresidual {worst_res:.2e}, half-integer overlap dev {worst_half:.2e}, \
             residuals decrease for both offsets"
        ))
    });
}

#[test]
fn criterion_09_ordered_shift_group_laws() {
    criterion(9, "ordered shift group laws", 5.0, || {
        let mut rng = ChaCha8Rng::seed_from_u64(SEED);
        // translation flow on the circle
        let agrid = AngularGrid::new(4096).unwrap();
        let bump = stereo_ops::bump_wavefunction::<f64>(agrid, 0.0, 0.5);
        let mut tan_dev = 0.0f64;
        for _ in 0..3 {
            let a = rng.gen_range(-2.0..2.0);
            let b = rng.gen_range(-2.0..2.0);
            let one = stereo_ops::shift_tan_translation(a + b, &bump, 0.05, 1e-8)
                .map_err(|e| e.to_string())?;
            let two = stereo_ops::shift_tan_translation(
                a,
                &stereo_ops::shift_tan_translation(b, &bump, 0.05, 1e-8)
                    .map_err(|e| e.to_string())?,
                0.05,
                1e-8,
            )
            .map_err(|e| e.to_string())?;
            for (x, y) in one.samples.iter().zip(&two.samples) {
                tan_dev = tan_dev.max((x - y).norm());
            }
        }
        if tan_dev >= 1e-8 {
            return Err(format!("translation-flow group law {tan_dev:.3e} >= 1e-8"));
        }
        // rotation flow on the line, packet kept clear of the pole
        let grid = LineGrid::<f64>::standard();
        let centers = [0.0, -0.8, 0.8, -1.6, 1.6, 2.4];
        let mut rot_dev = 0.0f64;
        for _ in 0..3 {
            let (a, b, phi0) = loop {
                let a: f64 = rng.gen_range(-2.0..2.0);
                let b: f64 = rng.gen_range(-2.0..2.0);
                if let Some(&phi0) = centers
                    .iter()
                    .find(|&&c0| stereo_ops::rotation_path_clear(c0, &[a, b], 0.9))
                {
                    break (a, b, phi0);
                }
            };
            let psi = stereo_ops::circle_gaussian_on_line(grid, phi0, 0.15);
            let one = stereo_ops::shift_rotation(a + b, grid, &psi);
            let two = stereo_ops::shift_rotation(a, grid, &stereo_ops::shift_rotation(b, grid, &psi));
            for (x, y) in one.iter().zip(&two) {
                rot_dev = rot_dev.max((x - y).norm());
            }
        }
        if rot_dev >= 1e-8 {
            return Err(format!("rotation-flow group law {rot_dev:.3e} >= 1e-8"));
        }
        // a full turn is the identity, directly and split in two
        let psi = stereo_ops::circle_gaussian_on_line(grid, -0.7, 0.15);
        let mut turn_dev = 0.0f64;
        let direct = stereo_ops::shift_rotation(2.0 * PI, grid, &psi);
        let split = stereo_ops::shift_rotation(
            2.0 * PI - 1.3,
            grid,
            &stereo_ops::shift_rotation(1.3, grid, &psi),
        );
        for ((x, y), z) in direct.iter().zip(&split).zip(&psi) {
            turn_dev = turn_dev.max((x - z).norm().max((y - z).norm()));
        }
        if turn_dev >= 1e-8 {
            return Err(format!("full-turn identity {turn_dev:.3e} >= 1e-8"));
        }
        Ok(format!(
            "translation {tan_dev:.2e}, rotation {rot_dev:.2e}, full turn {turn_dev:.2e}"
        ))
    });
}

#[test]
fn criterion_10_commutator_form_of_l() {
    criterion(10, "commutator form of the pathological generator", 2.0, || {
        let grid = LineGrid::<f64>::standard();
        let tests: [(f64, f64, f64); 5] = [
            (0.0, 1.0, 0.0),
            (1.5, 0.8, 2.0),
            (-2.0, 1.2, -1.0),
            (0.5, 0.6, 3.0),
            (-1.0, 1.0, 0.5),
        ];
        let mut worst = 0.0f64;
        for (center, width, k0) in tests {
            let psi = grid.sample(|q| {
                let g = (-(q - center) * (q - center) / (2.0 * width * width)).exp();
                unit_phase(k0 * q).scale(g)
            });
            worst = worst.max(stereo_ops::z_commutator_residual(grid, &psi));
        }
        if worst >= 1e-7 {
            return Err(format!("commutator residual {worst:.3e} >= 1e-7"));
        }
        Ok(format!("5 smooth states, worst rel residual {worst:.2e}"))
    });
}
