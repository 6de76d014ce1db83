//! Operator dictionary induced by the stereographic map, in both directions.
//!
//! From the rotor pair (E, L) one builds a valid Heisenberg pair: the Cayley
//! position Q = i(1-E)(1+E)^{-1} and P = |1+E| L |1+E| / 2. The reverse
//! direction looks innocent but is not: L = sqrt(1+Q^2) P sqrt(1+Q^2) / 2 is
//! Hermitian yet admits every real eigenvalue, its eigenvectors fail to be
//! orthogonal (sinc overlaps), and the identity resolves in many ways. The
//! functions here exhibit each of those facts numerically.
//!
//! The l-space truncation used here closes the shift cyclically, keeping E
//! exactly unitary; the wrap column plays the role of the cutoff edge and is
//! avoided by smooth pole-free test vectors, the same way the open-ended
//! truncation masks its last rows.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::FockTruncation;
use crate::grid::{smooth_plateau, LineGrid};
use crate::hilbert::{AngularGrid, LTruncation, PhiWaveFunction};
use crate::linalg::{self, CMatrix};
use crate::operator::{BasisIndexing, TruncatedOperator};
use crate::quadrature::GlRule;
use crate::scalar::{cr, dist_to_pi, lit, unit_phase, wrap_angle, Scalar, C};
use crate::special::sinc;

/// Eigenvalue cutoff of the regularized (1+E) inverse.
pub const CAYLEY_PINV_CUTOFF: f64 = 1e-8;

/// Label of an eigenvector of the pathological angular momentum: any real
/// lambda is admitted, which is precisely the problem.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LambdaKet<T: Scalar> {
    pub lambda: T,
    /// Normalization constant of the line wave function (1/sqrt(pi) matches
    /// unimodular angle wave functions).
    pub normalization: T,
}

impl<T: Scalar> LambdaKet<T> {
    pub fn new(lambda: T) -> Self {
        Self {
            lambda,
            normalization: T::PI().sqrt().recip(),
        }
    }

    /// <q|lambda> = c' (1+q^2)^{-1/2} ((1+iq)/(1-iq))^lambda
    ///            = c' e^{i 2 lambda arctan q} / sqrt(1+q^2).
    pub fn wavefunction_q(&self, q: T) -> C<T> {
        let ang = self.lambda * (q.atan() + q.atan());
        unit_phase(ang).scale(self.normalization / (T::one() + q * q).sqrt())
    }

    /// <phi|lambda> = e^{i lambda (phi - 2 pi round(phi / 2 pi))}, with
    /// round-half-away-from-zero at the measure-zero ambiguity.
    pub fn wavefunction_phi(&self, phi: T) -> C<T> {
        let two_pi = T::PI() + T::PI();
        let reduced = phi - two_pi * (phi / two_pi).round();
        unit_phase(self.lambda * reduced)
    }
}

/// Cyclic shift on {-l_max..l_max}: unitary, with eigenphases on the
/// 2 pi k / dim grid (never hitting pi, the dimension being odd).
pub fn cyclic_shift_matrix<T: Scalar>(trunc: LTruncation) -> CMatrix<T> {
    let dim = trunc.dim();
    let mut e = linalg::zeros(dim);
    for i in 0..dim - 1 {
        e[[i + 1, i]] = cr(T::one());
    }
    e[[0, dim - 1]] = cr(T::one());
    e
}

/// Eigenphases of the cyclic shift, wrapped to [-pi, pi).
pub fn eigen_phases<T: Scalar>(dim: usize) -> Vec<T> {
    (0..dim)
        .map(|k| wrap_angle((T::PI() + T::PI()) * T::of_usize(k) / T::of_usize(dim)))
        .collect()
}

/// Normalized eigenvector of the cyclic shift with eigenphase `phi`:
/// components e^{-i l phi} / sqrt(dim).
pub fn eigen_mode<T: Scalar>(trunc: LTruncation, phi: T) -> Vec<C<T>> {
    let scale = T::of_usize(trunc.dim()).sqrt().recip();
    trunc
        .l_values()
        .map(|l| unit_phase(-T::of_i64(l) * phi).scale(scale))
        .collect()
}

pub struct CayleyPosition<T: Scalar> {
    pub operator: TruncatedOperator<T>,
    /// Smallest |1 + e^{i phi_k}| over the eigenphases.
    pub min_abs: T,
    /// Modes removed by the pseudo-inverse cutoff (none unless the cutoff
    /// exceeds the spectral gap at phi = pi).
    pub cut_modes: usize,
}

/// Position operator Q = i (1 - E) (1 + E)^{-1} on the l truncation. The
/// inverse is the spectral pseudo-inverse of 1 + E with eigenvalue cutoff;
/// any removed mode is reported as ill-conditioning rather than dropped
/// silently.
pub fn q_from_e<T: Scalar>(trunc: LTruncation) -> Result<CayleyPosition<T>> {
    let dim = trunc.dim();
    let e = cyclic_shift_matrix::<T>(trunc);
    let phases = eigen_phases::<T>(dim);
    let cutoff = lit::<T>(CAYLEY_PINV_CUTOFF);
    let mut min_abs = T::infinity();
    let mut cut_modes = 0usize;
    // F columns are the eigenvectors; pinv(1+E) = F diag(w) F^dagger
    let scale = T::of_usize(dim).sqrt().recip();
    let mut f = linalg::zeros(dim);
    for (k, &phi) in phases.iter().enumerate() {
        for (i, l) in trunc.l_values().enumerate() {
            f[[i, k]] = unit_phase(-T::of_i64(l) * phi).scale(scale);
        }
    }
    let mut w = vec![cr(T::zero()); dim];
    for (k, &phi) in phases.iter().enumerate() {
        let ev = cr(T::one()) + unit_phase(phi);
        let mag = ev.norm();
        min_abs = min_abs.min(mag);
        if mag < cutoff {
            cut_modes += 1;
        } else {
            w[k] = ev.inv();
        }
    }
    let mut fw = f.clone();
    for k in 0..dim {
        for i in 0..dim {
            fw[[i, k]] = fw[[i, k]] * w[k];
        }
    }
    let pinv = fw.dot(&linalg::adjoint(&f));
    let one_minus_e = linalg::identity::<T>(dim) - &e;
    let q = one_minus_e.dot(&pinv).mapv(|z| z * Complex::new(T::zero(), T::one()));
    let op = TruncatedOperator::new(
        FockTruncation::new(2 * trunc.l_max)?,
        BasisIndexing::LIndexed,
        q,
    );
    if cut_modes > 0 {
        return Err(Error::IllConditioned(format!(
            "{cut_modes} modes below cutoff {CAYLEY_PINV_CUTOFF:e} near phi = pi"
        )));
    }
    Ok(CayleyPosition {
        operator: op,
        min_abs,
        cut_modes,
    })
}

/// Inverse direction E = (1 + iQ)(1 - iQ)^{-1}.
pub fn e_from_q<T: Scalar>(q: &CMatrix<T>) -> Result<CMatrix<T>> {
    let dim = q.nrows();
    let iq = q.mapv(|z| z * Complex::new(T::zero(), T::one()));
    let plus = linalg::identity::<T>(dim) + &iq;
    let minus = linalg::identity::<T>(dim) - &iq;
    let inv = linalg::lu_solve(&minus, &linalg::identity(dim))?;
    Ok(plus.dot(&inv))
}

/// P = |1+E| L |1+E| / 2 with |A| = sqrt(A^dagger A) through the Hermitian
/// eigendecomposition; Hermitian by construction.
pub fn p_from_el<T: Scalar>(trunc: LTruncation) -> Result<TruncatedOperator<T>> {
    let dim = trunc.dim();
    let e = cyclic_shift_matrix::<T>(trunc);
    let one_plus_e = linalg::identity::<T>(dim) + &e;
    let abs = linalg::abs_psd(&one_plus_e);
    let mut l = linalg::zeros(dim);
    for (i, lv) in trunc.l_values().enumerate() {
        l[[i, i]] = cr(T::of_i64(lv));
    }
    let p = abs.dot(&l).dot(&abs).mapv(|z| z.scale(T::of(0.5)));
    Ok(TruncatedOperator::new(
        FockTruncation::new(2 * trunc.l_max)?,
        BasisIndexing::LIndexed,
        p,
    ))
}

/// Smooth l-space test vector: coefficients of a narrow angle Gaussian at
/// phi = 0, so the state is analytic on the circle with spectrally dead
/// weight at the pole and at the truncation wrap. Gaussian coefficients
/// fall like e^{-sigma^2 l^2 / 2}.
pub fn smooth_l_state<T: Scalar>(trunc: LTruncation, sigma: T) -> Vec<C<T>> {
    let fine = 8 * trunc.dim().next_power_of_two();
    let two_pi = T::PI() + T::PI();
    let mut coeffs = vec![cr(T::zero()); trunc.dim()];
    for k in 0..fine {
        let phi = -T::PI() + two_pi * T::of_usize(k) / T::of_usize(fine);
        let w = (-phi * phi / (sigma * sigma * lit::<T>(2.0))).exp();
        for (i, l) in trunc.l_values().enumerate() {
            coeffs[i] = coeffs[i] + unit_phase(-T::of_i64(l) * phi).scale(w);
        }
    }
    let norm = linalg::vec_norm(&coeffs);
    coeffs.into_iter().map(|z| z.unscale(norm)).collect()
}

/// || [Q, P] v - i v || / ||v|| on a smooth pole-avoiding test vector, for
/// prebuilt Q and P matrices.
pub fn qp_commutator_residual_on<T: Scalar>(
    q: &CMatrix<T>,
    p: &CMatrix<T>,
    trunc: LTruncation,
) -> T {
    let v = smooth_l_state(trunc, lit(0.4));
    let qp = linalg::matvec(q, &linalg::matvec(p, &v));
    let pq = linalg::matvec(p, &linalg::matvec(q, &v));
    let mut dev2 = T::zero();
    for (i, vi) in v.iter().enumerate() {
        let got = qp[i] - pq[i];
        let want = *vi * Complex::new(T::zero(), T::one());
        dev2 = dev2 + (got - want).norm_sqr();
    }
    dev2.sqrt() / linalg::vec_norm(&v)
}

/// Convenience form of [`qp_commutator_residual_on`] that builds both
/// operators first.
pub fn qp_commutator_residual<T: Scalar>(trunc: LTruncation) -> Result<T> {
    let q = q_from_e::<T>(trunc)?.operator.matrix;
    let p = p_from_el::<T>(trunc)?.matrix;
    Ok(qp_commutator_residual_on(&q, &p, trunc))
}

/// Momentum eigenfunction transported through the angle representation:
/// sqrt(1+cos phi) <phi|p> = e^{i p tan(phi/2)} with phi = 2 arctan q and
/// the angle-to-line weight of the stereographic dictionary. Equals the
/// plane wave e^{i p q} / sqrt(2 pi).
pub fn plane_wave_via_angle_route<T: Scalar>(p: T, q: T) -> C<T> {
    let phi = stereo_angle(q);
    let angle_wf = unit_phase(p * (phi * T::of(0.5)).tan())
        .unscale((T::one() + phi.cos()).sqrt());
    angle_wf.unscale((T::PI() * (T::one() + q * q)).sqrt())
}

fn stereo_angle<T: Scalar>(q: T) -> T {
    let a = q.atan();
    a + a
}

/// Translation flow in the tan coordinate: the wave-function action of the
/// ordered shift built on (E, L),
///   psi'(phi) = sqrt(dphi'/dphi) psi(phi'),
///   tan(phi'/2) = tan(phi/2) + a.
/// Inputs carrying more than `mass_tol` of their weight within `pole_eps`
/// of the pole are rejected: resampling cannot represent them.
pub fn shift_tan_translation<T: Scalar>(
    a: T,
    wf: &PhiWaveFunction<T>,
    pole_eps: T,
    mass_tol: T,
) -> Result<PhiWaveFunction<T>> {
    let g = wf.grid.size;
    let mut near = T::zero();
    let mut total = T::zero();
    for (k, z) in wf.samples.iter().enumerate() {
        let w = z.norm_sqr();
        total = total + w;
        if dist_to_pi(wf.grid.phi::<T>(k)) < pole_eps {
            near = near + w;
        }
    }
    if total > T::zero() && near / total > mass_tol {
        return Err(Error::InterpolationLoss((near / total).as_f64()));
    }
    // trigonometric interpolation through the full spectrum
    let spectrum = crate::fft::dft(wf.samples.clone(), false);
    let peak = spectrum.iter().fold(T::zero(), |m, z| m.max(z.norm()));
    let cut = peak * lit(1e-15);
    let half = g as i64 / 2;
    let kept: Vec<(i64, C<T>)> = spectrum
        .iter()
        .enumerate()
        .filter(|(_, z)| z.norm() > cut)
        .map(|(m, z)| {
            let l = if (m as i64) <= half { m as i64 } else { m as i64 - g as i64 };
            (l, z.unscale(T::of_usize(g)))
        })
        .collect();
    let eval = |phi: T| -> C<T> {
        let x = phi + T::PI();
        let mut acc = Complex::new(T::zero(), T::zero());
        for &(l, cl) in &kept {
            acc = acc + cl * unit_phase(T::of_i64(l) * x);
        }
        acc
    };
    let samples = (0..g)
        .map(|k| {
            let phi: T = wf.grid.phi(k);
            let c_half = (phi * T::of(0.5)).cos();
            if c_half.abs() < lit(1e-12) {
                // the pole is a fixed point of the flow
                return wf.samples[k];
            }
            let u = (phi * T::of(0.5)).tan();
            let shifted = u + a;
            let phi_new = {
                let at = shifted.atan();
                at + at
            };
            let jac = (T::one() + u * u) / (T::one() + shifted * shifted);
            eval(phi_new).scale(jac.sqrt())
        })
        .collect();
    PhiWaveFunction::new(wf.grid, samples)
}

/// Rotation flow in the line representation: the wave-function action of
/// e^{i alpha L} on a decaying grid function,
///   psi'(q) = sqrt(dq'/dq) psi(q'),
///   q' = (q cos(a/2) + sin(a/2)) / (cos(a/2) - q sin(a/2)).
pub fn shift_rotation<T: Scalar>(alpha: T, grid: LineGrid<T>, psi: &[C<T>]) -> Vec<C<T>> {
    let c = (alpha * T::of(0.5)).cos();
    let s = (alpha * T::of(0.5)).sin();
    let mut targets = Vec::with_capacity(grid.size);
    let mut jroot = Vec::with_capacity(grid.size);
    for j in 0..grid.size {
        let q = grid.point(j);
        let den = c - q * s;
        if den.abs() < lit(1e-14) {
            targets.push(grid.width); // outside the box -> zero
            jroot.push(T::zero());
        } else {
            targets.push((q * c + s) / den);
            jroot.push(den.abs().recip());
        }
    }
    let interp = grid.interpolate(psi, &targets, lit(1e-15));
    interp
        .into_iter()
        .zip(jroot)
        .map(|(v, r)| v.scale(r))
        .collect()
}

/// Test state localized on the circle: angle Gaussian at phi0 carried to the
/// line with a decaying half-density weight.
pub fn circle_gaussian_on_line<T: Scalar>(
    grid: LineGrid<T>,
    phi0: T,
    sigma: T,
) -> Vec<C<T>> {
    grid.sample(|q| {
        let d = wrap_angle(stereo_angle(q) - phi0);
        cr((-d * d / (sigma * sigma * lit::<T>(2.0))).exp() / (T::one() + q * q).sqrt())
    })
}

/// Pathological angular momentum L = sqrt(1+Q^2) P sqrt(1+Q^2) / 2 applied
/// through the spectral momentum.
pub fn pathological_l_apply<T: Scalar>(grid: LineGrid<T>, psi: &[C<T>]) -> Vec<C<T>> {
    let weighted: Vec<C<T>> = psi
        .iter()
        .enumerate()
        .map(|(j, z)| {
            let q = grid.point(j);
            z.scale((T::one() + q * q).sqrt())
        })
        .collect();
    let p = grid.apply_p(&weighted);
    p.into_iter()
        .enumerate()
        .map(|(j, z)| {
            let q = grid.point(j);
            z.scale((T::one() + q * q).sqrt() * T::of(0.5))
        })
        .collect()
}

/// Same with the gauge-shifted momentum P + 2x/(1+Q^2), which adds x to L.
pub fn pathological_l_shifted_apply<T: Scalar>(
    grid: LineGrid<T>,
    psi: &[C<T>],
    x: T,
) -> Vec<C<T>> {
    let base = pathological_l_apply(grid, psi);
    base.into_iter().zip(psi).map(|(b, z)| b + z.scale(x)).collect()
}

/// Windowed eigenvalue residual of <q|lambda>: max over the plateau of
/// |(L - lambda)(w psi_lambda)| relative to the peak of w psi_lambda. Any
/// real lambda passes, integer or not: the operator's spectrum is the whole
/// line.
pub fn lambda_eigenresidual<T: Scalar>(grid: LineGrid<T>, lambda: T) -> T {
    let ket = LambdaKet::new(lambda);
    let inner = lit::<T>(8.0);
    let outer = lit::<T>(14.0);
    let psi: Vec<C<T>> = grid.sample(|q| {
        ket.wavefunction_q(q).scale(smooth_plateau(q, inner, outer))
    });
    let lp = pathological_l_apply(grid, &psi);
    let peak = grid.max_abs(&psi);
    let mut dev = T::zero();
    for (j, (got, z)) in lp.iter().zip(&psi).enumerate() {
        if grid.point(j).abs() <= inner {
            dev = dev.max((got - z.scale(lambda)).norm());
        }
    }
    dev / peak
}

/// Residual of the gauge-shift identity (L with shifted momentum) = L + x
/// on a smooth test state.
pub fn gauge_shift_residual<T: Scalar>(grid: LineGrid<T>, x: T) -> T {
    let psi: Vec<C<T>> = grid.sample(|q| {
        cr((-(q - T::of(0.4)) * (q - T::of(0.4)) / lit::<T>(2.0)).exp())
    });
    let shifted = pathological_l_shifted_apply(grid, &psi, x);
    let base = pathological_l_apply(grid, &psi);
    let mut dev = T::zero();
    for ((s, b), z) in shifted.iter().zip(&base).zip(&psi) {
        dev = dev.max((s - b - z.scale(x)).norm());
    }
    dev / grid.max_abs(&psi)
}

/// Overlap <lambda|lambda'> = (1/2pi) integral of the conjugated angle wave
/// functions; equals sinc(pi (lambda - lambda')).
pub fn lambda_overlap<T: Scalar>(lambda1: T, lambda2: T) -> T {
    let k1 = LambdaKet::new(lambda1);
    let k2 = LambdaKet::new(lambda2);
    let rule = GlRule::new(16);
    let v = rule.integrate_panels(-T::PI(), T::PI(), 64, |phi| {
        k1.wavefunction_phi(phi).conj() * k2.wavefunction_phi(phi)
    });
    let two_pi = T::PI() + T::PI();
    debug_assert!(v.im.abs() < lit(1e-12));
    v.re / two_pi
}

/// Reference value for the overlap law.
pub fn lambda_overlap_reference<T: Scalar>(dlambda: T) -> T {
    sinc(T::PI() * dlambda)
}

/// Applies the shifted-comb resolution sum_{|l| <= l_max} |l+lambda0><l+lambda0|
/// to a smooth angle profile and returns the max reconstruction error
/// relative to the profile peak. Decreasing residuals for every lambda0 in
/// [0, 1) exhibit the overcompleteness of the lambda family.
pub fn overcompleteness_residual<T: Scalar>(
    lambda0: T,
    l_max: usize,
    profile: impl Fn(T) -> C<T>,
) -> T {
    let rule = GlRule::new(16);
    let two_pi = T::PI() + T::PI();
    let coeffs: Vec<C<T>> = (-(l_max as i64)..=l_max as i64)
        .map(|l| {
            let nu = T::of_i64(l) + lambda0;
            rule.integrate_panels(-T::PI(), T::PI(), 96, |phi| {
                unit_phase(-nu * phi) * profile(phi)
            })
            .unscale(two_pi)
        })
        .collect();
    let samples = 801;
    let mut peak = T::zero();
    let mut dev = T::zero();
    for s in 0..samples {
        let phi = -T::PI()
            + two_pi * (T::of_usize(s) + T::of(0.5)) / T::of_usize(samples);
        let want = profile(phi);
        peak = peak.max(want.norm());
        let mut got = Complex::new(T::zero(), T::zero());
        for (i, l) in (-(l_max as i64)..=l_max as i64).enumerate() {
            let nu = T::of_i64(l) + lambda0;
            got = got + coeffs[i] * unit_phase(nu * phi);
        }
        dev = dev.max((got - want).norm());
    }
    dev / peak
}

/// Difference-quotient table for the rotation flow: rows
/// (alpha, || (shift(alpha) - 1) psi / (i alpha) - L psi ||). For smooth
/// decaying states the entries shrink with alpha; for the slow 1/q tail of
/// the lambda kets they do not, exhibiting the missing uniform generator
/// limit.
pub fn generator_limit_table<T: Scalar>(
    grid: LineGrid<T>,
    psi: &[C<T>],
    alphas: &[T],
) -> Vec<(T, T)> {
    let lpsi = pathological_l_apply(grid, psi);
    alphas
        .iter()
        .map(|&alpha| {
            let shifted = shift_rotation(alpha, grid, psi);
            let diff: Vec<C<T>> = shifted
                .iter()
                .zip(psi)
                .zip(&lpsi)
                .map(|((s, z), l)| {
                    (s - z) / Complex::new(T::zero(), alpha) - l
                })
                .collect();
            (alpha, grid.norm(&diff))
        })
        .collect()
}

/// Relative residual of L = -i [Q/2 + Q^3/6, P^2/2] on a grid function.
pub fn z_commutator_residual<T: Scalar>(grid: LineGrid<T>, psi: &[C<T>]) -> T {
    let lhs = pathological_l_apply(grid, psi);
    let z_of = |j: usize| -> T {
        let q = grid.point(j);
        q * T::of(0.5) + q * q * q / lit(6.0)
    };
    let p2 = grid.apply_p2(psi);
    let zp2: Vec<C<T>> = p2
        .iter()
        .enumerate()
        .map(|(j, v)| v.scale(z_of(j) * T::of(0.5)))
        .collect();
    let zpsi: Vec<C<T>> = psi
        .iter()
        .enumerate()
        .map(|(j, v)| v.scale(z_of(j)))
        .collect();
    let p2z = grid.apply_p2(&zpsi);
    let rhs: Vec<C<T>> = zp2
        .iter()
        .zip(&p2z)
        .map(|(a, b)| (a - b.scale(T::of(0.5))) * Complex::new(T::zero(), -T::one()))
        .collect();
    let diff: Vec<C<T>> = lhs.iter().zip(&rhs).map(|(a, b)| a - b).collect();
    grid.norm(&diff) / grid.norm(&lhs)
}

/// Checks that the partial sums of a rotation path keep the packet clear of
/// the pole: all intermediate centers phi0 + partial stay `margin` away
/// from pi.
pub fn rotation_path_clear<T: Scalar>(phi0: T, steps: &[T], margin: T) -> bool {
    let mut acc = phi0;
    if dist_to_pi(acc) < margin {
        return false;
    }
    for &s in steps {
        acc = acc + s;
        if dist_to_pi(acc) < margin {
            return false;
        }
    }
    true
}

/// Builds a smooth angle-bump wave function on an angular grid, for the
/// translation-flow checks.
pub fn bump_wavefunction<T: Scalar>(
    grid: AngularGrid,
    center_u: T,
    width_u: T,
) -> PhiWaveFunction<T> {
    let samples = (0..grid.size)
        .map(|k| {
            let phi = grid.phi::<T>(k);
            let c_half = (phi * T::of(0.5)).cos();
            if c_half.abs() < lit(1e-12) {
                return cr(T::zero());
            }
            let u = (phi * T::of(0.5)).tan();
            cr((-(u - center_u) * (u - center_u) / (width_u * width_u * lit::<T>(2.0)))
                .exp())
        })
        .collect();
    PhiWaveFunction::new(grid, samples).expect("sample count matches grid")
}
