//! Named verification suites over the whole library: each suite measures a
//! set of identities and returns one report row per check. The CLI drives
//! these; the acceptance tests exercise the same ground independently.

use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::fock::{self, FockTruncation};
use crate::grid::LineGrid;
use crate::hilbert::{
    grid_inner_product, inner_product, l_to_phi, phi_to_l, third_basis_divergence_demo,
    AngularGrid, LTruncation, PhiWaveFunction, RotorState,
};
use crate::linalg::{self, adjoint, commutator, hermiticity_defect, identity, max_abs_diff};
use crate::mub_fock::{
    chi_decompose, coeff_l, eigenvector_residual, overlap_fock, overlap_fock_series,
    psi_pole_exponent, psi_series, psi_theta0_parts, psi_via_theta0, y_theta_conjugation_residual,
    y_theta_matrix, AbelParams, FockMubLabel,
};
use crate::mub_stereo::{
    gamma_wavefunction, overlap_stereo, overlap_stereo_phi_route, smeared_same_theta_overlap,
    stereo_map, stereo_unmap, theta0_element, OverlapQuad, StereoMubLabel,
};
use crate::operator::{BasisIndexing, TruncatedOperator};
use crate::report::{Checker, SuiteReport};
use crate::scalar::{c, cr, dist_to_pi, unit_phase, Scalar, C};
use crate::special::{hermite_fn, mehler_kernel, phi_line, LineBasisLabel};
use crate::stereo_ops;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Weyl,
    FockMap,
    Mub1,
    Mub2,
    Appendix,
}

impl Suite {
    pub fn name(&self) -> &'static str {
        match self {
            Suite::Weyl => "weyl",
            Suite::FockMap => "fockmap",
            Suite::Mub1 => "mub1",
            Suite::Mub2 => "mub2",
            Suite::Appendix => "appendix",
        }
    }

    pub fn all() -> [Suite; 5] {
        [Suite::Weyl, Suite::FockMap, Suite::Mub1, Suite::Mub2, Suite::Appendix]
    }
}

/// Numerical parameters of a verification run.
#[derive(Debug, Clone)]
pub struct VerifyParams {
    pub n_max: usize,
    pub l_max: usize,
    pub grid_size: usize,
    pub pole_epsilon: f64,
    pub abel_radii: Vec<f64>,
    pub seed: u64,
    pub tolerances: BTreeMap<String, f64>,
}

impl Default for VerifyParams {
    fn default() -> Self {
        Self {
            n_max: 400,
            l_max: 128,
            grid_size: 2048,
            pole_epsilon: 0.05,
            abel_radii: vec![0.99, 0.999, 0.9999],
            seed: 7,
            tolerances: BTreeMap::new(),
        }
    }
}

impl VerifyParams {
    pub fn validate(&self) -> crate::error::Result<()> {
        if self.n_max == 0 || self.n_max % 2 != 0 {
            return Err(crate::error::Error::InvalidParameter(format!(
                "n_max must be positive and even, got {}",
                self.n_max
            )));
        }
        if self.grid_size < 2 * self.l_max + 1 {
            return Err(crate::error::Error::InvalidParameter(format!(
                "grid size {} cannot resolve l_max {}",
                self.grid_size, self.l_max
            )));
        }
        if !(self.pole_epsilon > 0.0 && self.pole_epsilon < std::f64::consts::FRAC_PI_4) {
            return Err(crate::error::Error::InvalidParameter(
                "pole epsilon must lie in (0, pi/4)".into(),
            ));
        }
        if self.tolerances.values().any(|&t| !(t > 0.0)) {
            return Err(crate::error::Error::InvalidParameter(
                "tolerances must be positive".into(),
            ));
        }
        AbelParams::<f64>::new(self.abel_radii.clone(), true).map(|_| ())
    }

    fn abel<T: Scalar>(&self) -> AbelParams<T> {
        AbelParams::new(self.abel_radii.iter().map(|&r| T::of(r)).collect(), true)
            .expect("validated radii")
    }
}

pub fn run_suite<T: Scalar>(suite: Suite, params: &VerifyParams) -> SuiteReport {
    let mut checker = Checker::new(suite.name(), params.seed, &params.tolerances);
    match suite {
        Suite::Weyl => weyl_suite::<T>(&mut checker, params),
        Suite::FockMap => fockmap_suite::<T>(&mut checker, params),
        Suite::Mub1 => mub1_suite::<T>(&mut checker, params),
        Suite::Mub2 => mub2_suite::<T>(&mut checker, params),
        Suite::Appendix => appendix_suite::<T>(&mut checker, params),
    }
    checker.finish()
}

pub fn run_all<T: Scalar>(params: &VerifyParams) -> Vec<SuiteReport> {
    Suite::all()
        .iter()
        .map(|&s| run_suite::<T>(s, params))
        .collect()
}

fn as_f64<T: Scalar>(x: T) -> f64 {
    x.as_f64()
}

fn weyl_suite<T: Scalar>(ck: &mut Checker, params: &VerifyParams) {
    let l_max = params.l_max.min((params.grid_size - 1) / 2);
    let trunc = LTruncation::new(l_max);
    let grid = AngularGrid::new(params.grid_size).expect("validated grid");
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);

    ck.check("weyl.completeness_l", "ang mom", 1e-15, || {
        let dim = trunc.dim();
        let mut sum = linalg::zeros::<T>(dim);
        for l in trunc.l_values() {
            let i = trunc.index_of(l);
            sum[[i, i]] = sum[[i, i]] + cr(T::one());
        }
        as_f64(max_abs_diff(&sum, &identity(dim)))
    });

    ck.check("weyl.unbiasedness_phi_l", "fourier", 1e-13, || {
        let mut dev = T::zero();
        for l in [-(l_max as i64), -1, 0, 1, l_max as i64] {
            let s = RotorState::<T>::basis_ket(trunc, l).unwrap();
            let wf = l_to_phi(&s, grid).unwrap();
            for v in &wf.samples {
                dev = dev.max((v.norm_sqr() - T::one()).abs());
            }
        }
        as_f64(dev)
    });

    ck.check("weyl.plane_wave_single_l", "fourier", 1e-13, || {
        let s = RotorState::<T>::basis_ket(trunc, 1).unwrap();
        let wf = l_to_phi(&s, grid).unwrap();
        let mut dev = T::zero();
        for (k, v) in wf.samples.iter().enumerate() {
            dev = dev.max((v - unit_phase(grid.phi::<T>(k))).norm());
        }
        as_f64(dev)
    });

    let state = RotorState::<T>::random_normalized(trunc, &mut rng);
    let state2 = RotorState::<T>::random_normalized(trunc, &mut rng);

    ck.check("weyl.fourier_round_trip", "fourier", 1e-13, || {
        let wf = l_to_phi(&state, grid).unwrap();
        let back = phi_to_l(&wf, trunc).state;
        let mut dev = T::zero();
        for (a, b) in back.coeffs.iter().zip(&state.coeffs) {
            dev = dev.max((a - b).norm());
        }
        as_f64(dev)
    });

    ck.check("weyl.fourier_unitarity", "fourier", 1e-13, || {
        let wf = l_to_phi(&state, grid).unwrap();
        as_f64((wf.norm2() - state.norm2()).abs())
    });

    ck.check("weyl.parseval_inner_product", "phi", 1e-13, || {
        let wf1 = l_to_phi(&state, grid).unwrap();
        let wf2 = l_to_phi(&state2, grid).unwrap();
        let lhs = inner_product(&state, &state2).unwrap();
        let rhs = grid_inner_product(&wf1, &wf2).unwrap();
        as_f64((lhs - rhs).norm())
    });

    ck.check("weyl.out_of_band_report", "plumbing", 1e-12, || {
        // a pure mode above the truncation must be reported in full
        let samples: Vec<C<T>> = (0..grid.size)
            .map(|k| unit_phase(T::of_usize(l_max + 3) * grid.phi::<T>(k)))
            .collect();
        let wf = PhiWaveFunction::new(grid, samples).unwrap();
        let proj = phi_to_l(&wf, trunc);
        as_f64((proj.residual_ratio() - T::one()).abs())
    });

    ck.check("weyl.aliasing_guard", "plumbing", 0.5, || {
        let s = RotorState::<T>::basis_ket(trunc, 0).unwrap();
        let small = AngularGrid::new(trunc.dim() - 1).unwrap();
        match l_to_phi(&s, small) {
            Err(crate::error::Error::Aliasing { .. }) => 0.0,
            _ => f64::INFINITY,
        }
    });

    ck.check("weyl.divergence_demo", "no-third-basis", 1e-12, || {
        let rows = third_basis_divergence_demo::<T>(&[10, 100, 1000], T::one());
        let mut dev = 0.0f64;
        for (l, v) in rows {
            dev = dev.max((as_f64(v) - (2 * l + 1) as f64).abs());
        }
        dev
    });
}

fn fockmap_suite<T: Scalar>(ck: &mut Checker, params: &VerifyParams) {
    let trunc = FockTruncation::new(params.n_max).expect("validated n_max");
    let margin = FockTruncation::DEFAULT_EDGE_MARGIN;
    let dim = trunc.dim();

    ck.check("fockmap.bijection_round_trip", "Fock2", 0.5, || {
        for l in -1_000_000i64..=1_000_000 {
            if fock::l_of_n(fock::n_of_l(l)) != l {
                return f64::INFINITY;
            }
        }
        let spots = [(0i64, 0i64), (-1, 1), (1, 2), (-2, 3)];
        for (l, n) in spots {
            if fock::n_of_l(l) != n {
                return f64::INFINITY;
            }
        }
        0.0
    });

    let a = fock::build_ladder::<T>(trunc);
    let ad = adjoint(&a.matrix);

    ck.check("fockmap.ladder_isometry", "Fock5", 1e-15, || {
        // truncated forms: AA^dag loses the top diagonal entry, A^dag A the
        // bottom one
        let mut want_top = identity::<T>(dim);
        want_top[[dim - 1, dim - 1]] = cr(T::zero());
        let mut dev = max_abs_diff(&a.matrix.dot(&ad), &want_top);
        let mut want_bottom = identity::<T>(dim);
        want_bottom[[0, 0]] = cr(T::zero());
        dev = dev.max(max_abs_diff(&ad.dot(&a.matrix), &want_bottom));
        as_f64(dev)
    });

    ck.check("fockmap.ladder_commutator", "Fock7", 1e-15, || {
        let comm = commutator(&a.matrix, &ad);
        let mut want = linalg::zeros::<T>(dim);
        want[[0, 0]] = cr(T::one());
        want[[dim - 1, dim - 1]] = cr(-T::one());
        as_f64(max_abs_diff(&comm, &want))
    });

    let e = fock::build_e_fock::<T>(trunc);
    let e_direct = fock::build_shift_direct::<T>(trunc);

    ck.check("fockmap.shift_assembled_vs_direct", "Fock6", 1e-14, || {
        as_f64(e.interior_max_dev(&e_direct, margin))
    });

    ck.check("fockmap.shift_isometry", "Fock4", 1e-14, || {
        let ede = TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, adjoint(&e.matrix).dot(&e.matrix));
        let eed = TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, e.matrix.dot(&adjoint(&e.matrix)));
        as_f64(
            ede.interior_dev_from_identity(margin)
                .max(eed.interior_dev_from_identity(margin)),
        )
    });

    let l_op = fock::build_l_from_n::<T>(trunc);

    ck.check("fockmap.el_commutator", "EL commutator", 1e-13, || {
        let comm = commutator(&l_op.matrix, &e.matrix);
        let comm_op = TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, comm);
        as_f64(comm_op.interior_max_dev(&e, margin))
    });

    ck.check("fockmap.l_diagonal", "Fock3", 1e-15, || {
        let want = [(0usize, 0.0), (1, -1.0), (2, 1.0), (3, -2.0), (4, 2.0)];
        let mut dev = 0.0f64;
        for (n, v) in want {
            dev = dev.max((as_f64(l_op.matrix[[n, n]].re) - v).abs());
        }
        let mut seen: Vec<i64> = (0..dim)
            .map(|n| as_f64(l_op.matrix[[n, n]].re).round() as i64)
            .collect();
        seen.sort();
        let expect: Vec<i64> = (-(trunc.l_span() as i64)..=trunc.l_span() as i64).collect();
        if seen != expect {
            return f64::INFINITY;
        }
        dev
    });

    let pr = fock::build_projectors_reflection::<T>(trunc);

    ck.check("fockmap.projector_split", "Fock9", 1e-15, || {
        let sum = &pr.pi_plus.matrix + &pr.pi_minus.matrix;
        as_f64(max_abs_diff(&sum, &identity(dim)))
    });

    ck.check("fockmap.reflection_properties", "Fock10", 1e-15, || {
        let r2 = pr.reflection.matrix.dot(&pr.reflection.matrix);
        let mut dev = max_abs_diff(&r2, &identity(dim));
        dev = dev.max(hermiticity_defect(&pr.reflection.matrix));
        let mut v = vec![cr(T::zero()); dim];
        v[trunc.l_index(2)] = cr(T::one());
        let rv = pr.reflection.apply(&v);
        dev = dev.max((rv[trunc.l_index(-2)] - cr(T::one())).norm());
        as_f64(dev)
    });

    ck.check("fockmap.reflection_power_forms", "Fock10", 1e-13, || {
        let (f1, f2) = fock::reflection_power_forms(trunc, &e_direct);
        as_f64(
            f1.interior_max_dev(&pr.reflection, margin)
                .max(f2.interior_max_dev(&pr.reflection, margin)),
        )
    });

    ck.check("fockmap.reflection_conjugation", "Fock10", 1e-12, || {
        let l_l = l_op.relabeled(BasisIndexing::LIndexed);
        let ed = adjoint(&e_direct.matrix);
        let cases: Vec<(linalg::CMatrix<T>, linalg::CMatrix<T>)> = vec![
            (e_direct.matrix.clone(), ed.clone()),
            (l_l.matrix.clone(), l_l.matrix.mapv(|z| -z)),
            (e_direct.matrix.dot(&e_direct.matrix), ed.dot(&ed)),
            (l_l.matrix.dot(&e_direct.matrix), l_l.matrix.mapv(|z| -z).dot(&ed)),
        ];
        let mut dev = T::zero();
        for (f, want) in cases {
            let got = fock::conjugate_by_reflection(&pr.reflection, &f);
            let got_op = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, got);
            let want_op = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, want);
            dev = dev.max(got_op.interior_max_dev(&want_op, margin));
        }
        as_f64(dev)
    });

    let (q, p) = fock::build_qp_from_el::<T>(trunc);

    ck.check("fockmap.qp_ladder_form", "Fock8", 1e-12, || {
        let s = &q.matrix + &p.matrix.mapv(|z| z * c(T::zero(), T::one()));
        let got = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, s);
        let want = fock::qp_ladder_reference::<T>(trunc);
        as_f64(got.interior_max_dev(&want, 0))
    });

    let comm_qp = commutator(&q.matrix, &p.matrix);
    let i_id = identity::<T>(dim).mapv(|z| z * c(T::zero(), T::one()));

    ck.check("fockmap.qp_commutator", "Fock8", 1e-12, || {
        let got = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, comm_qp.clone());
        let want = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, i_id.clone());
        as_f64(got.interior_max_dev(&want, margin))
    });

    ck.check("fockmap.edge_localization", "plumbing", 1e-10, || {
        let got = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, comm_qp.clone());
        let want = TruncatedOperator::new(trunc, BasisIndexing::LIndexed, i_id.clone());
        let interior = as_f64(got.interior_max_dev(&want, margin));
        let edge = as_f64(got.edge_max_dev(&want, margin));
        interior / edge.max(1e-30)
    });

    ck.check("fockmap.projector_integral", "Fock11", 1e-10, || {
        let mut dev = fock::projector_integral_check::<T>(0, trunc, 512);
        dev = dev.max(fock::projector_integral_check::<T>(-5, trunc, 512));
        dev = dev.max(fock::projector_integral_check::<T>(
            trunc.l_span() as i64 + 2,
            trunc,
            512,
        ));
        as_f64(dev)
    });
}

fn mub1_suite<T: Scalar>(ck: &mut Checker, params: &VerifyParams) {
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let quad = OverlapQuad::<T>::default();
    let pi = std::f64::consts::PI;

    ck.check("mub1.stereo_round_trip", "Fig1", 1e-15, || {
        let mut dev = T::zero();
        for k in 0..60 {
            let phi = T::of(-3.1 + 6.2 * (k as f64) / 59.0);
            let q = stereo_unmap(phi).unwrap();
            dev = dev.max((stereo_map(q) - phi).abs());
        }
        dev.as_f64()
    });

    ck.check("mub1.theta0_element", "zero", 1e-15, || {
        let (phi0, amp) = theta0_element(T::zero());
        let mut dev = phi0.abs().as_f64() + (amp.as_f64() - 1.0 / pi.sqrt()).abs();
        let (phi1, amp1) = theta0_element(T::one());
        dev = dev
            .max((phi1.as_f64() - pi / 2.0).abs())
            .max((amp1.as_f64() - 1.0 / (2.0 * pi).sqrt()).abs());
        dev
    });

    ck.check("mub1.gamma_definition", "def", 1e-14, || {
        let label = StereoMubLabel::new(T::of(1.1), T::of(0.6)).unwrap();
        let line = LineBasisLabel::new(T::of(1.1), T::of(0.6)).unwrap();
        let mut dev = T::zero();
        for phi_f in [-2.8, -0.4, 0.0, 1.9, 2.9] {
            let phi = T::of(phi_f);
            let g = gamma_wavefunction(&label, phi).unwrap();
            let direct = phi_line(&line, (phi * T::of(0.5)).tan()).unwrap();
            let lhs = g.norm_sqr() * (T::one() + phi.cos()) / (T::PI() + T::PI());
            dev = dev.max((lhs - direct.norm_sqr()).abs());
        }
        dev.as_f64()
    });

    ck.check("mub1.gamma_pole_exponent", "def", 1e-6, || {
        let label = StereoMubLabel::new(T::of(1.3), T::of(0.4)).unwrap();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..8 {
            let delta = T::of(0.4 * 0.7f64.powi(k));
            let phi = T::PI() - delta;
            xs.push((T::one() + phi.cos()).ln());
            ys.push(gamma_wavefunction(&label, phi).unwrap().norm().ln());
        }
        (crate::quadrature::fit_slope(&xs, &ys).as_f64() + 0.5).abs()
    });

    ck.check("mub1.gamma_periodicity", "def", 1e-13, || {
        let label = StereoMubLabel::new(T::of(0.7), T::of(-1.3)).unwrap();
        let two_pi = T::PI() + T::PI();
        let mut dev = T::zero();
        for phi_f in [-2.0, 0.3, 1.9] {
            let phi = T::of(phi_f);
            let a = gamma_wavefunction(&label, phi).unwrap();
            let b = gamma_wavefunction(&label, phi + two_pi).unwrap();
            dev = dev.max((a - b).norm());
        }
        dev.as_f64()
    });

    ck.check("mub1.phi_line_modulus", "wf", 1e-13, || {
        let mut dev = 0.0f64;
        for theta_f in [0.2, 1.0, 2.6] {
            let label = LineBasisLabel::new(T::of(theta_f), T::of(0.8)).unwrap();
            let want = 1.0 / (2.0 * pi * theta_f.sin().abs());
            for q in [-3.0, 0.0, 2.2] {
                let v = phi_line(&label, T::of(q)).unwrap();
                dev = dev.max((v.norm_sqr().as_f64() - want).abs() / want);
            }
        }
        dev
    });

    ck.check("mub1.phi_line_kernel_match", "wf", 1e-10, || {
        let mut dev = 0.0f64;
        for _ in 0..100 {
            let theta = T::of(rng.gen_range(0.001..pi - 0.001));
            let y = T::of(rng.gen_range(-3.0..3.0));
            let q = T::of(rng.gen_range(-3.0..3.0));
            let label = LineBasisLabel::new(theta, y).unwrap();
            let a = phi_line(&label, q).unwrap();
            let b = mehler_kernel(unit_phase(theta), q, y).unwrap();
            dev = dev.max(((a - b).norm() / a.norm()).as_f64());
        }
        dev
    });

    ck.check("mub1.unbiasedness_quadrature", "MUBfirst", 1e-6, || {
        let mut dev = 0.0f64;
        for _ in 0..20 {
            let (t1, t2) = loop {
                let t1: f64 = rng.gen_range(0.15..pi - 0.15);
                let t2: f64 = rng.gen_range(0.15..pi - 0.15);
                if (t1 - t2).sin().abs() >= 0.1 {
                    break (t1, t2);
                }
            };
            let y1 = rng.gen_range(-2.0..2.0);
            let y2 = rng.gen_range(-2.0..2.0);
            let a = StereoMubLabel::new(T::of(t1), T::of(y1)).unwrap();
            let b = StereoMubLabel::new(T::of(t2), T::of(y2)).unwrap();
            let v = overlap_stereo(&a, &b, &quad).unwrap();
            let want = 1.0 / (2.0 * pi * (t1 - t2).sin().abs());
            dev = dev.max((v.norm_sqr().as_f64() - want).abs() / want);
        }
        dev
    });

    ck.check("mub1.change_of_variables", "def", 1e-5, || {
        let a = StereoMubLabel::new(T::of(0.9), T::of(0.5)).unwrap();
        let b = StereoMubLabel::new(T::of(1.9), T::of(-0.8)).unwrap();
        let vq = overlap_stereo(&a, &b, &quad).unwrap();
        let vphi = overlap_stereo_phi_route(
            &a,
            &b,
            &[T::of(0.1), T::of(0.05), T::of(0.025)],
            &quad,
        )
        .unwrap();
        ((vq - vphi).norm() / vq.norm()).as_f64()
    });

    ck.check("mub1.smeared_orthogonality", "wf", 1e-6, || {
        let theta = T::of(1.2);
        let yc = T::of(0.4);
        let sigma = T::of(0.35);
        let mut dev = 0.0f64;
        for y1_f in [0.4, 0.9, -0.3] {
            let y1 = T::of(y1_f);
            let got = smeared_same_theta_overlap(theta, y1, yc, sigma, 12).unwrap();
            let want = (-(y1_f - 0.4f64).powi(2) / (2.0 * 0.35 * 0.35)).exp();
            dev = dev.max((got - cr(T::of(want))).norm().as_f64());
        }
        dev
    });
}

fn mub2_suite<T: Scalar>(ck: &mut Checker, params: &VerifyParams) {
    let pi = std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let abel = params.abel::<T>();
    let trunc = FockTruncation::new(params.n_max).expect("validated n_max");

    ck.check("mub2.unbiasedness_grid", "MUB3", 1e-10, || {
        let dths = [0.12, 0.8, pi / 2.0, 2.3, 3.0];
        let y1s = [-3.0, -1.2, 0.0, 1.2, 3.0];
        let y2s = [-2.5, 0.4, 1.8];
        let mut dev = 0.0f64;
        for &dth in &dths {
            for &y1 in &y1s {
                for &y2 in &y2s {
                    let a = FockMubLabel::new(T::of(0.1), T::of(y1)).unwrap();
                    let b = FockMubLabel::new(T::of(0.1 + dth), T::of(y2)).unwrap();
                    let v = overlap_fock(&a, &b).unwrap();
                    let want = 1.0 / (2.0 * pi * dth.sin().abs());
                    dev = dev.max((v.norm_sqr().as_f64() - want).abs() / want);
                }
            }
        }
        dev
    });

    ck.check("mub2.series_cross_check", "MUB3", 1e-4, || {
        let mut dev = 0.0f64;
        for (dth, y1, y2) in [(0.2f64, 0.3, -1.1), (1.3, 1.9, 0.4), (2.8, -0.6, -2.0)] {
            let a = FockMubLabel::new(T::of(0.05), T::of(y1)).unwrap();
            let b = FockMubLabel::new(T::of(0.05 + dth), T::of(y2)).unwrap();
            let kernel = overlap_fock(&a, &b).unwrap();
            let series = overlap_fock_series(&a, &b, &abel).unwrap();
            dev = dev.max(((kernel - series).norm() / kernel.norm()).as_f64());
        }
        dev
    });

    ck.check("mub2.series_monotone", "MUB6", 0.5, || {
        let mut bad = 0.0f64;
        for _ in 0..10 {
            let dth = T::of(rng.gen_range(0.3..2.8));
            let y1 = T::of(rng.gen_range(-1.5..1.5));
            let y2 = T::of(rng.gen_range(-1.5..1.5));
            let a = FockMubLabel::new(T::zero(), y1).unwrap();
            let b = FockMubLabel::new(dth, y2).unwrap();
            let kernel = overlap_fock(&a, &b).unwrap();
            let mut prev = f64::INFINITY;
            for &r in &params.abel_radii {
                let single = AbelParams::<T>::single(T::of(r)).unwrap();
                let s = overlap_fock_series(&a, &b, &single).unwrap();
                let err = (s - kernel).norm().as_f64();
                if err > prev {
                    bad += 1.0;
                }
                prev = err;
            }
        }
        bad
    });

    ck.check("mub2.theta_reduction", "MUB7", 1e-13, || {
        let single = AbelParams::<T>::single(T::of(0.99)).unwrap();
        let mut dev = 0.0f64;
        for _ in 0..10 {
            let label = FockMubLabel::new(
                T::of(rng.gen_range(0.0..pi)),
                T::of(rng.gen_range(-1.5..1.5)),
            )
            .unwrap();
            let phi = T::of(rng.gen_range(-3.0..3.0));
            let direct = psi_series(&label, phi, &single).unwrap();
            let reduced = psi_via_theta0(&label, phi, &single).unwrap();
            dev = dev.max((direct - reduced).norm().as_f64());
        }
        dev
    });

    ck.check("mub2.chi_minus_zero", "MUB9", 1e-10, || {
        let mut dev = 0.0f64;
        for phi in [-2.4, -0.9, 0.0, 1.3, 2.8] {
            let (_, chi_m) = chi_decompose(T::zero(), T::of(phi), &abel).unwrap();
            dev = dev.max(chi_m.norm().as_f64());
        }
        dev
    });

    ck.check("mub2.chi_reconstruction", "MUB8", 1e-10, || {
        let mut dev = 0.0f64;
        for phi_f in [-2.9f64, -1.6, -0.4, 0.7, 1.8, 2.9] {
            if dist_to_pi(T::of(phi_f)).as_f64() < params.pole_epsilon {
                continue;
            }
            let y = T::of(0.5);
            let phi = T::of(phi_f);
            let (even, odd) = psi_theta0_parts(y, phi, &abel).unwrap();
            let (chi_p, chi_m) = chi_decompose(y, phi, &abel).unwrap();
            let root = (T::one() + phi.cos()).sqrt();
            let osc = y * y * (phi * T::of(0.5)).tan() * T::of(0.5);
            let rebuilt =
                (unit_phase(osc) * chi_p + unit_phase(-osc) * chi_m).unscale(root);
            let psi = even + odd;
            dev = dev.max(((psi - rebuilt).norm() / psi.norm().max(T::one())).as_f64());
        }
        dev
    });

    ck.check("mub2.psi_pole_exponent", "MUB8", 0.02, || {
        // measured against the analytic boundary exponent: the y = 0
        // coefficients fall like l^{-1/4}, so |psi| diverges like
        // (1 + cos phi)^{-3/8} at the pole
        let deltas: Vec<T> = (0..6).map(|k| T::of(0.3 * 0.7f64.powi(k))).collect();
        let slope = psi_pole_exponent(T::zero(), &abel, &deltas).unwrap();
        (slope.as_f64() + 0.375).abs()
    });

    ck.check("mub2.coeff_l_values", "MUB5", 1e-13, || {
        let label = FockMubLabel::new(T::zero(), T::zero()).unwrap();
        let mut dev = (coeff_l(&label, 0) - cr(T::of(pi.powf(-0.25)))).norm().as_f64();
        dev = dev.max(coeff_l(&label, -1).norm().as_f64());
        let label = FockMubLabel::new(T::of(0.8), T::of(0.9)).unwrap();
        let want = unit_phase(T::of(3.0 * 0.8)).scale(hermite_fn(3, T::of(0.9)));
        dev = dev.max((coeff_l(&label, -2) - want).norm().as_f64());
        dev
    });

    ck.check("mub2.y_theta_endpoints", "MUB1", 1e-14, || {
        let (q, p) = fock::build_qp_from_el::<T>(trunc);
        let y0 = y_theta_matrix(T::zero(), trunc);
        let ypi2 = y_theta_matrix(T::FRAC_PI_2(), trunc);
        let qf = q.relabeled(BasisIndexing::FockIndexed);
        let pf = p.relabeled(BasisIndexing::FockIndexed);
        as_f64(
            max_abs_diff(&y0.matrix, &qf.matrix).max(max_abs_diff(&ypi2.matrix, &pf.matrix)),
        )
    });

    ck.check("mub2.y_theta_conjugation", "MUB1", 1e-11, || {
        as_f64(y_theta_conjugation_residual(T::FRAC_PI_4(), trunc))
    });

    ck.check("mub2.eigenvector_residual", "MUB2", 1e-10, || {
        let label = FockMubLabel::new(T::of(0.8), T::of(0.7)).unwrap();
        let (interior, _full) = eigenvector_residual(&label, trunc, 2);
        as_f64(interior)
    });
}

fn appendix_suite<T: Scalar>(ck: &mut Checker, params: &VerifyParams) {
    let pi = std::f64::consts::PI;
    let mut rng = ChaCha8Rng::seed_from_u64(params.seed);
    let ltrunc = LTruncation::new(params.l_max);
    let grid = LineGrid::<T>::standard();

    let cayley = stereo_ops::q_from_e::<T>(ltrunc);
    let momentum = stereo_ops::p_from_el::<T>(ltrunc);

    match &cayley {
        Ok(cay) => {
            ck.check("appendix.cayley_eigen_action", "qqdef", 1e-9, || {
                let mut dev = T::zero();
                for &phi in stereo_ops::eigen_phases::<T>(ltrunc.dim()).iter() {
                    if dist_to_pi(phi).as_f64() < 0.2 {
                        continue;
                    }
                    let v = stereo_ops::eigen_mode(ltrunc, phi);
                    let qv = cay.operator.apply(&v);
                    let t = (phi * T::of(0.5)).tan();
                    for (a, b) in qv.iter().zip(&v) {
                        dev = dev.max((a - b.scale(t)).norm() / (T::one() + t.abs()));
                    }
                }
                as_f64(dev)
            });

            ck.check("appendix.cayley_round_trip", "E", 1e-10, || {
                let e_back = stereo_ops::e_from_q(&cay.operator.matrix).unwrap();
                let e = stereo_ops::cyclic_shift_matrix::<T>(ltrunc);
                as_f64(max_abs_diff(&e_back, &e))
            });
        }
        Err(_) => {
            ck.fail("appendix.cayley_eigen_action", "qqdef", 1e-9);
            ck.fail("appendix.cayley_round_trip", "E", 1e-10);
        }
    }

    match (&momentum, &cayley) {
        (Ok(p), Ok(cay)) => {
            ck.check("appendix.p_hermitian", "qqqdef", 1e-12, || {
                as_f64(hermiticity_defect(&p.matrix))
            });
            ck.check("appendix.qp_commutator_smooth", "qqqdef", 1e-8, || {
                as_f64(stereo_ops::qp_commutator_residual_on(
                    &cay.operator.matrix,
                    &p.matrix,
                    ltrunc,
                ))
            });
        }
        _ => {
            ck.fail("appendix.p_hermitian", "qqqdef", 1e-12);
            ck.fail("appendix.qp_commutator_smooth", "qqqdef", 1e-8);
        }
    }

    ck.check("appendix.plane_wave_route", "fourcoef", 1e-13, || {
        let mut dev = 0.0f64;
        for p in [-1.3, 0.0, 2.2] {
            for q in [-3.0, 0.4, 1.9] {
                let via = stereo_ops::plane_wave_via_angle_route(T::of(p), T::of(q));
                let direct = unit_phase(T::of(p * q)).unscale(T::of((2.0 * pi).sqrt()));
                dev = dev.max((via - direct).norm().as_f64());
            }
        }
        dev
    });

    let agrid = AngularGrid::new(4096).unwrap();
    let bump = stereo_ops::bump_wavefunction::<T>(agrid, T::zero(), T::of(0.5));

    ck.check("appendix.tan_shift_identity", "EL-ordered shift", 1e-10, || {
        let id = stereo_ops::shift_tan_translation(T::zero(), &bump, T::of(0.05), T::of(1e-8))
            .unwrap();
        let mut dev = T::zero();
        for (a, b) in id.samples.iter().zip(&bump.samples) {
            dev = dev.max((a - b).norm());
        }
        as_f64(dev)
    });

    ck.check("appendix.tan_shift_group_law", "EL-ordered shift", 1e-8, || {
        let mut dev = 0.0f64;
        for _ in 0..4 {
            let a = T::of(rng.gen_range(-2.0..2.0));
            let b = T::of(rng.gen_range(-2.0..2.0));
            let one =
                stereo_ops::shift_tan_translation(a + b, &bump, T::of(0.05), T::of(1e-8)).unwrap();
            let inner =
                stereo_ops::shift_tan_translation(b, &bump, T::of(0.05), T::of(1e-8)).unwrap();
            let two =
                stereo_ops::shift_tan_translation(a, &inner, T::of(0.05), T::of(1e-8)).unwrap();
            for (x, y) in one.samples.iter().zip(&two.samples) {
                dev = dev.max((x - y).norm().as_f64());
            }
        }
        dev
    });

    ck.check("appendix.tan_shift_norm", "EL-ordered shift", 1e-10, || {
        let moved =
            stereo_ops::shift_tan_translation(T::of(1.2), &bump, T::of(0.05), T::of(1e-8)).unwrap();
        as_f64((moved.norm2() - bump.norm2()).abs() / bump.norm2())
    });

    ck.check("appendix.lambda_eigenresiduals", "L", 1e-8, || {
        let mut dev = T::zero();
        for lf in [0.5, 2f64.sqrt() - 1.0, 2.3] {
            dev = dev.max(stereo_ops::lambda_eigenresidual(grid, T::of(lf)));
        }
        as_f64(dev)
    });

    ck.check("appendix.lambda_gauge_shift", "L", 1e-9, || {
        as_f64(stereo_ops::gauge_shift_residual(grid, T::of(0.7)))
    });

    ck.check("appendix.lambda_integer_consistency", "qdef", 1e-13, || {
        let ket = stereo_ops::LambdaKet::new(T::of(3.0));
        let mut dev = T::zero();
        for q in [-2.0, 0.3, 5.0] {
            let qv = T::of(q);
            let phi = stereo_map(qv);
            let want = unit_phase(T::of(3.0) * phi)
                .unscale((T::PI() * (T::one() + qv * qv)).sqrt());
            dev = dev.max((ket.wavefunction_q(qv) - want).norm());
        }
        as_f64(dev)
    });

    ck.check("appendix.sinc_law", "sinc overlap", 1e-10, || {
        let mut dev = 0.0f64;
        for k in 0..=30 {
            let d = 0.1 * k as f64;
            let got = stereo_ops::lambda_overlap(T::of(0.25), T::of(0.25 + d));
            let want = stereo_ops::lambda_overlap_reference(T::of(d));
            dev = dev.max((got - want).abs().as_f64());
        }
        dev
    });

    ck.check("appendix.sinc_integer_orthogonality", "sinc overlap", 1e-12, || {
        let mut dev = 0.0f64;
        for d in [1.0, 2.0, 3.0] {
            dev = dev.max(stereo_ops::lambda_overlap(T::of(0.3), T::of(0.3 + d)).abs().as_f64());
        }
        dev
    });

    let profile = |phi: T| -> C<T> {
        cr((-phi * phi / T::of(2.0 * 0.19f64.powi(2))).exp())
    };

    ck.check("appendix.overcompleteness_residual", "complet", 1e-6, || {
        let mut dev = 0.0f64;
        for l0 in [0.0, 0.3] {
            dev = dev.max(as_f64(stereo_ops::overcompleteness_residual(
                T::of(l0),
                64,
                profile,
            )));
        }
        dev
    });

    ck.check("appendix.overcompleteness_monotone", "complet", 0.5, || {
        let mut bad = 0.0f64;
        for l0 in [0.0, 0.3] {
            let r16 = stereo_ops::overcompleteness_residual(T::of(l0), 16, profile);
            let r32 = stereo_ops::overcompleteness_residual(T::of(l0), 32, profile);
            let r64 = stereo_ops::overcompleteness_residual(T::of(l0), 64, profile);
            if !(r16 > r32 && r32 > r64) {
                bad += 1.0;
            }
        }
        bad
    });

    ck.check("appendix.rotation_group_law", "shift", 1e-8, || {
        let mut dev = 0.0f64;
        let centers = [0.0, -0.8, 0.8, -1.6, 1.6, 2.4];
        for _ in 0..4 {
            let (a, b, phi0) = loop {
                let a: f64 = rng.gen_range(-2.0..2.0);
                let b: f64 = rng.gen_range(-2.0..2.0);
                if let Some(&phi0) = centers.iter().find(|&&c| {
                    stereo_ops::rotation_path_clear(T::of(c), &[T::of(a), T::of(b)], T::of(0.9))
                }) {
                    break (a, b, phi0);
                }
            };
            let psi = stereo_ops::circle_gaussian_on_line(grid, T::of(phi0), T::of(0.15));
            let two = stereo_ops::shift_rotation(
                T::of(a),
                grid,
                &stereo_ops::shift_rotation(T::of(b), grid, &psi),
            );
            let one = stereo_ops::shift_rotation(T::of(a + b), grid, &psi);
            for (x, y) in one.iter().zip(&two) {
                dev = dev.max((x - y).norm().as_f64());
            }
        }
        dev
    });

    ck.check("appendix.rotation_full_turn", "shift", 1e-8, || {
        let psi = stereo_ops::circle_gaussian_on_line(grid, T::of(-0.7), T::of(0.15));
        let turned = stereo_ops::shift_rotation(T::of(2.0 * pi), grid, &psi);
        let mut dev = T::zero();
        for (a, b) in turned.iter().zip(&psi) {
            dev = dev.max((a - b).norm());
        }
        let split = stereo_ops::shift_rotation(
            T::of(2.0 * pi - 1.3),
            grid,
            &stereo_ops::shift_rotation(T::of(1.3), grid, &psi),
        );
        for (a, b) in split.iter().zip(&psi) {
            dev = dev.max((a - b).norm());
        }
        as_f64(dev)
    });

    ck.check("appendix.generator_limit_smooth", "qp1", 0.3, || {
        let alphas = [T::of(0.8), T::of(0.4), T::of(0.2), T::of(0.1)];
        let gauss = grid.sample(|q| cr((-q * q / T::of(2.0)).exp()));
        let rows = stereo_ops::generator_limit_table(grid, &gauss, &alphas);
        as_f64(rows.last().unwrap().1 / rows.first().unwrap().1)
    });

    ck.check("appendix.generator_limit_slow_tail", "qp1", 1e-9, || {
        let alphas = [T::of(0.8), T::of(0.4), T::of(0.2), T::of(0.1)];
        let slow = grid.sample(|q| stereo_ops::LambdaKet::new(T::zero()).wavefunction_q(q));
        let rows = stereo_ops::generator_limit_table(grid, &slow, &alphas);
        let first = rows.first().unwrap().1;
        let last = rows.last().unwrap().1;
        as_f64((T::one() - last / first).max(T::zero()))
    });

    ck.check("appendix.z_commutator", "Z-commutator", 1e-7, || {
        let tests: [(f64, f64, f64); 5] = [
            (0.0, 1.0, 0.0),
            (1.5, 0.8, 2.0),
            (-2.0, 1.2, -1.0),
            (0.5, 0.6, 3.0),
            (-1.0, 1.0, 0.5),
        ];
        let mut dev = 0.0f64;
        for (center, width, k0) in tests {
            let psi = grid.sample(|q| {
                let g = (-(q - T::of(center)) * (q - T::of(center))
                    / (T::of(width) * T::of(width) * T::of(2.0)))
                    .exp();
                unit_phase(T::of(k0) * q).scale(g)
            });
            dev = dev.max(as_f64(stereo_ops::z_commutator_residual(grid, &psi)));
        }
        dev
    });
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small_params() -> VerifyParams {
        VerifyParams {
            n_max: 80,
            l_max: 32,
            grid_size: 128,
            pole_epsilon: 0.05,
            abel_radii: vec![0.99, 0.999],
            seed: 7,
            tolerances: BTreeMap::new(),
        }
    }

    #[test]
    fn weyl_and_fockmap_suites_pass_at_small_size() {
        let params = small_params();
        let weyl = run_suite::<f64>(Suite::Weyl, &params);
        assert!(weyl.all_pass(), "failed: {:?}", weyl.failed());
        let fm = run_suite::<f64>(Suite::FockMap, &params);
        assert!(fm.all_pass(), "failed: {:?}", fm.failed());
    }

    #[test]
    fn rows_are_sorted_and_cite_identities() {
        let params = small_params();
        let rep = run_suite::<f64>(Suite::Weyl, &params);
        let names: Vec<&String> = rep.rows.iter().map(|r| &r.check).collect();
        let mut sorted = names.clone();
        sorted.sort();
        assert_eq!(names, sorted);
        assert!(rep.rows.iter().all(|r| !r.citation.is_empty()));
    }

    #[test]
    fn tolerance_overrides_apply() {
        let mut params = small_params();
        params
            .tolerances
            .insert("weyl.completeness_l".into(), 1e-300);
        let rep = run_suite::<f64>(Suite::Weyl, &params);
        let row = rep
            .rows
            .iter()
            .find(|r| r.check == "weyl.completeness_l")
            .unwrap();
        assert_eq!(row.tolerance, 1e-300);
    }

    #[test]
    fn params_validation() {
        let mut p = VerifyParams::default();
        p.n_max = 401;
        assert!(p.validate().is_err());
        let mut p = VerifyParams::default();
        p.grid_size = 100;
        assert!(p.validate().is_err());
        let mut p = VerifyParams::default();
        p.abel_radii = vec![1.5];
        assert!(p.validate().is_err());
        assert!(VerifyParams::default().validate().is_ok());
    }
}
