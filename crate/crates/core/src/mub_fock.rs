//! Second continuous family of rotor bases, built on the Heisenberg pair of
//! the number-basis dictionary. Basis elements are eigenvectors of
//! Y_theta = Q cos theta + P sin theta; their angular wave functions are
//! conditionally convergent Fourier sums handled by radius damping with
//! extrapolation of the damping to one.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::fock::{build_qp_from_el, n_of_l, FockTruncation};
use crate::hilbert::{fourier_sum_on_grid, AngularGrid};
use crate::linalg;
use crate::operator::{BasisIndexing, TruncatedOperator};
use crate::quadrature::neville_to_zero;
use crate::scalar::{cr, dist_to_pi, lit, unit_phase, wrap_angle, Scalar, C};
use crate::special::{hermite_seq, mehler_kernel};

/// Label (theta, y): basis angle in [0, pi) and eigenvalue y of Y_theta.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FockMubLabel<T: Scalar> {
    theta: T,
    y: T,
}

impl<T: Scalar> FockMubLabel<T> {
    pub fn new(theta: T, y: T) -> Result<Self> {
        if !(theta >= T::zero() && theta < T::PI()) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, pi), got {theta}"
            )));
        }
        Ok(Self { theta, y })
    }

    pub fn theta(&self) -> T {
        self.theta
    }

    pub fn y(&self) -> T {
        self.y
    }
}

/// Radius schedule for damped evaluation of the conditionally convergent
/// angular sums: each term is damped by r^n, the truncation keeps the tail
/// below 1e-12 of the partial sum, and the schedule is extrapolated to
/// r = 1 when `extrapolate` is set.
#[derive(Debug, Clone)]
pub struct AbelParams<T: Scalar> {
    pub radii: Vec<T>,
    pub n_terms: Vec<usize>,
    pub extrapolate: bool,
    /// Allowed extrapolation spread relative to max(|value|, 1).
    pub settle_tol: T,
}

impl<T: Scalar> AbelParams<T> {
    pub fn new(radii: Vec<T>, extrapolate: bool) -> Result<Self> {
        if radii.is_empty() {
            return Err(Error::InvalidParameter("empty radius schedule".into()));
        }
        for w in radii.windows(2) {
            if !(w[0] < w[1]) {
                return Err(Error::InvalidParameter("radii must ascend".into()));
            }
        }
        if radii.iter().any(|&r| !(r > T::zero() && r < T::one())) {
            return Err(Error::InvalidParameter("radii must lie in (0, 1)".into()));
        }
        // geometric tail bound: r^N < 1e-13 once N > 30/(1-r)
        let n_terms = radii
            .iter()
            .map(|&r| (lit::<T>(30.0) / (T::one() - r)).ceil().as_f64() as usize)
            .collect();
        Ok(Self {
            radii,
            n_terms,
            extrapolate,
            settle_tol: lit(1e-2),
        })
    }

    /// Default schedule r in {0.99, 0.999, 0.9999}.
    pub fn default_schedule() -> Self {
        Self::new(vec![lit(0.99), lit(0.999), lit(0.9999)], true).unwrap()
    }

    /// A single fixed radius, no extrapolation: a plain truncated damped sum.
    pub fn single(r: T) -> Result<Self> {
        Self::new(vec![r], false)
    }

    /// Extrapolates the radius schedule to r = 1. The spread of the last
    /// Neville column bounds the error of the next-to-last extrapolant, so
    /// it serves as a conservative settle estimate.
    fn settle<Out: Copy>(
        &self,
        vals: &[C<T>],
        finish: impl Fn(C<T>) -> Out,
    ) -> Result<(Out, T)> {
        if !self.extrapolate || vals.len() == 1 {
            return Ok((finish(*vals.last().unwrap()), T::zero()));
        }
        let xs: Vec<T> = self.radii.iter().map(|&r| T::one() - r).collect();
        let (v, spread) = neville_to_zero(&xs, vals);
        if spread > self.settle_tol * v.norm().max(T::one()) {
            return Err(Error::NoConvergence(format!(
                "spread {spread:e} at value {:e}",
                v.norm()
            )));
        }
        Ok((finish(v), spread))
    }
}

/// Angular-momentum wave function <l | theta; y> = e^{i n theta} f_n(y) with
/// n the number index paired to l.
pub fn coeff_l<T: Scalar>(label: &FockMubLabel<T>, l: i64) -> C<T> {
    let n = n_of_l(l);
    let f = crate::special::hermite_fn(n as usize, label.y());
    unit_phase(T::of_i64(n) * label.theta()).scale(f)
}

/// Damped even and odd partial sums of the theta = 0 wave function at one
/// angle:
///   even(phi) = sum_l f_{2l}(y) r^{2l} e^{+i l phi}
///   odd(phi)  = sum_l f_{2l+1}(y) r^{2l+1} e^{-i (l+1) phi}
fn theta0_parts_at<T: Scalar>(f: &[T], r: T, phi: T) -> (C<T>, C<T>) {
    let mut even = Complex::new(T::zero(), T::zero());
    let mut odd = Complex::new(T::zero(), T::zero());
    let mut rp = T::one(); // r^{2l}
    let r2 = r * r;
    let mut l = 0usize;
    while 2 * l < f.len() {
        let lf = T::of_usize(l);
        even = even + unit_phase(lf * phi).scale(f[2 * l] * rp);
        if 2 * l + 1 < f.len() {
            odd = odd + unit_phase(-(lf + T::one()) * phi).scale(f[2 * l + 1] * rp * r);
        }
        rp = rp * r2;
        l += 1;
    }
    (even, odd)
}

fn theta0_parts_schedule<T: Scalar>(
    y: T,
    phi: T,
    abel: &AbelParams<T>,
) -> (Vec<C<T>>, Vec<C<T>>) {
    let n_max = *abel.n_terms.iter().max().unwrap();
    let f = hermite_seq(n_max, y);
    let mut evens = Vec::with_capacity(abel.radii.len());
    let mut odds = Vec::with_capacity(abel.radii.len());
    for (&r, &n) in abel.radii.iter().zip(&abel.n_terms) {
        let (e, o) = theta0_parts_at(&f[..=n.min(n_max)], r, phi);
        evens.push(e);
        odds.push(o);
    }
    (evens, odds)
}

/// Angular wave function psi^(theta)_y(phi) of the basis element, as the
/// damped Fourier sum
///   sum_l [ e^{i l (phi + 2 theta)} f_{2l}(y)
///           + e^{-i theta} e^{-i (l+1)(phi - 2 theta)} f_{2l+1}(y) ] r^{n}
/// extrapolated r -> 1.
pub fn psi_series<T: Scalar>(
    label: &FockMubLabel<T>,
    phi: T,
    abel: &AbelParams<T>,
) -> Result<C<T>> {
    let theta = label.theta();
    let phi_p = phi + theta + theta;
    let phi_m = phi - theta - theta;
    let n_max = *abel.n_terms.iter().max().unwrap();
    let f = hermite_seq(n_max, label.y());
    let phase = unit_phase(-theta);
    let vals: Vec<C<T>> = abel
        .radii
        .iter()
        .zip(&abel.n_terms)
        .map(|(&r, &n)| {
            let (e, _) = theta0_parts_at(&f[..=n.min(n_max)], r, phi_p);
            let (_, o) = theta0_parts_at(&f[..=n.min(n_max)], r, phi_m);
            e + phase * o
        })
        .collect();
    abel.settle(&vals, |v| v).map(|(v, _)| v)
}

/// The same wave function assembled from theta = 0 evaluations through the
/// finite rearrangement
///   psi^(theta)_y(phi) = [psi^0_y + psi^0_{-y}](phi + 2 theta)/2
///                      + e^{-i theta} [psi^0_y - psi^0_{-y}](phi - 2 theta)/2.
/// At any fixed radius and truncation this is an exact reshuffling of the
/// same terms, so the two paths agree to rounding.
pub fn psi_via_theta0<T: Scalar>(
    label: &FockMubLabel<T>,
    phi: T,
    abel: &AbelParams<T>,
) -> Result<C<T>> {
    let theta = label.theta();
    let phi_p = phi + theta + theta;
    let phi_m = phi - theta - theta;
    let half = T::of(0.5);
    let phase = unit_phase(-theta).scale(half);
    let psi0 = |y: T, x: T| -> Vec<C<T>> {
        let n_max = *abel.n_terms.iter().max().unwrap();
        let f = hermite_seq(n_max, y);
        abel.radii
            .iter()
            .zip(&abel.n_terms)
            .map(|(&r, &n)| {
                let (e, o) = theta0_parts_at(&f[..=n.min(n_max)], r, x);
                e + o
            })
            .collect()
    };
    let pp = psi0(label.y(), phi_p);
    let pm = psi0(-label.y(), phi_p);
    let mp = psi0(label.y(), phi_m);
    let mm = psi0(-label.y(), phi_m);
    let vals: Vec<C<T>> = (0..abel.radii.len())
        .map(|i| (pp[i] + pm[i]).scale(half) + phase * (mp[i] - mm[i]))
        .collect();
    abel.settle(&vals, |v| v).map(|(v, _)| v)
}

/// Splits psi^0_y into its even-in-y and odd-in-y parts and strips the pole
/// factor 1/sqrt(1 + cos phi) and the oscillating factors
/// e^{+-(i/2) y^2 tan(phi/2)}, returning the smooth residues (chi_plus,
/// chi_minus). For y = 0 the odd residue vanishes identically.
pub fn chi_decompose<T: Scalar>(y: T, phi: T, abel: &AbelParams<T>) -> Result<(C<T>, C<T>)> {
    let w = wrap_angle(phi);
    if dist_to_pi(w) < T::epsilon() * lit(4.0) {
        return Err(Error::PoleAtPi);
    }
    let (evens, odds) = theta0_parts_schedule(y, w, abel);
    let (even, _) = abel.settle(&evens, |v| v)?;
    let (odd, _) = abel.settle(&odds, |v| v)?;
    let root = (T::one() + w.cos()).sqrt();
    let osc = y * y * (w * T::of(0.5)).tan() * T::of(0.5);
    let chi_plus = even.scale(root) * unit_phase(-osc);
    let chi_minus = odd.scale(root) * unit_phase(osc);
    Ok((chi_plus, chi_minus))
}

/// Even and odd parts themselves (Abel limits), for reconstruction checks.
pub fn psi_theta0_parts<T: Scalar>(y: T, phi: T, abel: &AbelParams<T>) -> Result<(C<T>, C<T>)> {
    let (evens, odds) = theta0_parts_schedule(y, wrap_angle(phi), abel);
    let (even, _) = abel.settle(&evens, |v| v)?;
    let (odd, _) = abel.settle(&odds, |v| v)?;
    Ok((even, odd))
}

/// Overlap <theta1; y1 | theta2; y2> through the closed-form kernel at
/// w = e^{i (theta2 - theta1)}; |result|^2 = 1/(2 pi |sin(theta1 - theta2)|).
pub fn overlap_fock<T: Scalar>(a: &FockMubLabel<T>, b: &FockMubLabel<T>) -> Result<C<T>> {
    let dth = b.theta() - a.theta();
    if dth.sin().abs() < lit(1e-12) {
        return Err(Error::DegenerateAngles);
    }
    mehler_kernel(unit_phase(dth), a.y(), b.y())
}

/// The same overlap as a damped truncated series, for cross-checking the
/// kernel route.
pub fn overlap_fock_series<T: Scalar>(
    a: &FockMubLabel<T>,
    b: &FockMubLabel<T>,
    abel: &AbelParams<T>,
) -> Result<C<T>> {
    let dth = b.theta() - a.theta();
    if dth.sin().abs() < lit(1e-12) {
        return Err(Error::DegenerateAngles);
    }
    let n_max = *abel.n_terms.iter().max().unwrap();
    let fa = hermite_seq(n_max, a.y());
    let fb = hermite_seq(n_max, b.y());
    let vals: Vec<C<T>> = abel
        .radii
        .iter()
        .zip(&abel.n_terms)
        .map(|(&r, &n)| {
            let mut acc = Complex::new(T::zero(), T::zero());
            let mut rp = T::one();
            for m in 0..=n.min(n_max) {
                acc = acc + unit_phase(T::of_usize(m) * dth).scale(fa[m] * fb[m] * rp);
                rp = rp * r;
            }
            acc
        })
        .collect();
    abel.settle(&vals, |v| v).map(|(v, _)| v)
}

/// Y_theta = Q cos theta + P sin theta on the truncation (FockIndexed).
pub fn y_theta_matrix<T: Scalar>(theta: T, trunc: FockTruncation) -> TruncatedOperator<T> {
    let (q, p) = build_qp_from_el::<T>(trunc);
    let qf = q.relabeled(BasisIndexing::FockIndexed);
    let pf = p.relabeled(BasisIndexing::FockIndexed);
    let ct = theta.cos();
    let st = theta.sin();
    let m = qf.matrix.mapv(|z| z.scale(ct)) + pf.matrix.mapv(|z| z.scale(st));
    TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, m)
}

/// Interior deviation of Y_theta from its generator form
/// e^{i theta N} Q e^{-i theta N}, whose matrix elements are
/// e^{i theta (m - n)} Q_{mn}.
pub fn y_theta_conjugation_residual<T: Scalar>(theta: T, trunc: FockTruncation) -> T {
    let y = y_theta_matrix(theta, trunc);
    let (q, _) = build_qp_from_el::<T>(trunc);
    let qf = q.relabeled(BasisIndexing::FockIndexed);
    let dim = trunc.dim();
    let conj = linalg::CMatrix::<T>::from_shape_fn((dim, dim), |(m, n)| {
        qf.matrix[[m, n]] * unit_phase(theta * (T::of_usize(m) - T::of_usize(n)))
    });
    let conj_op = TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, conj);
    y.interior_max_dev(&conj_op, FockTruncation::DEFAULT_EDGE_MARGIN)
}

/// Residuals ||(Y_theta - y) v|| / ||v|| of the coefficient vector of the
/// basis element, over interior rows and over all rows. The element is a
/// continuum ket, so only the interior residual is meaningful; the full one
/// exhibits the cutoff-edge contamination.
pub fn eigenvector_residual<T: Scalar>(
    label: &FockMubLabel<T>,
    trunc: FockTruncation,
    margin: usize,
) -> (T, T) {
    let y = y_theta_matrix(label.theta(), trunc);
    let f = hermite_seq(trunc.n_max, label.y());
    let v: Vec<C<T>> = (0..trunc.dim())
        .map(|n| unit_phase(T::of_usize(n) * label.theta()).scale(f[n]))
        .collect();
    let yv = y.apply(&v);
    let norm = linalg::vec_norm(&v);
    let mut interior2 = T::zero();
    let mut full2 = T::zero();
    for (n, (got, vi)) in yv.iter().zip(&v).enumerate() {
        let r = (got - vi.scale(label.y())).norm_sqr();
        full2 = full2 + r;
        if n + margin < trunc.n_max {
            interior2 = interior2 + r;
        }
    }
    (interior2.sqrt() / norm, full2.sqrt() / norm)
}

/// Damped even/odd sums evaluated on a whole angular grid through binned
/// FFT synthesis: O(terms + G log G) per radius.
fn theta0_parts_grid<T: Scalar>(
    y: T,
    grid: AngularGrid,
    r: T,
    n_terms: usize,
) -> (Vec<C<T>>, Vec<C<T>>) {
    let f = hermite_seq(n_terms, y);
    let mut even_terms: Vec<(i64, C<T>)> = Vec::new();
    let mut odd_terms: Vec<(i64, C<T>)> = Vec::new();
    let mut rp = T::one();
    let r2 = r * r;
    let mut l = 0usize;
    while 2 * l <= n_terms {
        even_terms.push((l as i64, cr(f[2 * l] * rp)));
        if 2 * l + 1 <= n_terms {
            odd_terms.push((-(l as i64) - 1, cr(f[2 * l + 1] * rp * r)));
        }
        rp = rp * r2;
        l += 1;
    }
    (
        fourier_sum_on_grid(even_terms, grid),
        fourier_sum_on_grid(odd_terms, grid),
    )
}

/// Pointwise r -> 1 extrapolation of the even/odd sums over a grid.
pub fn psi_theta0_parts_grid<T: Scalar>(
    y: T,
    grid: AngularGrid,
    abel: &AbelParams<T>,
) -> (Vec<C<T>>, Vec<C<T>>) {
    let per_radius: Vec<(Vec<C<T>>, Vec<C<T>>)> = abel
        .radii
        .iter()
        .zip(&abel.n_terms)
        .map(|(&r, &n)| theta0_parts_grid(y, grid, r, n))
        .collect();
    let xs: Vec<T> = abel.radii.iter().map(|&r| T::one() - r).collect();
    let g = grid.size;
    let mut even = Vec::with_capacity(g);
    let mut odd = Vec::with_capacity(g);
    for k in 0..g {
        if abel.extrapolate && abel.radii.len() > 1 {
            let es: Vec<C<T>> = per_radius.iter().map(|(e, _)| e[k]).collect();
            let os: Vec<C<T>> = per_radius.iter().map(|(_, o)| o[k]).collect();
            even.push(neville_to_zero(&xs, &es).0);
            odd.push(neville_to_zero(&xs, &os).0);
        } else {
            even.push(per_radius.last().unwrap().0[k]);
            odd.push(per_radius.last().unwrap().1[k]);
        }
    }
    (even, odd)
}

/// Fitted power of (1 + cos phi) in |psi^0_y(phi)| approaching the pole;
/// -1/2 for the simple pole of the y = 0 wave function.
pub fn psi_pole_exponent<T: Scalar>(y: T, abel: &AbelParams<T>, deltas: &[T]) -> Result<T> {
    let mut xs = Vec::with_capacity(deltas.len());
    let mut ys = Vec::with_capacity(deltas.len());
    for &d in deltas {
        let phi = T::PI() - d;
        let (e, o) = psi_theta0_parts(y, phi, abel)?;
        xs.push((T::one() + phi.cos()).ln());
        ys.push((e + o).norm().ln());
    }
    Ok(crate::quadrature::fit_slope(&xs, &ys))
}

/// One emitted sample of a wave-function figure.
#[derive(Debug, Clone, Copy)]
pub struct FigureRow<T: Scalar> {
    pub phi: T,
    pub re: T,
    pub im: T,
    pub abs: T,
}

/// Which curve to emit: the y = 0 and y = 1/2 wave functions and their
/// smooth residues after pole and oscillation removal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FigureKind {
    PsiZero,
    ChiPlusZero,
    PsiHalf,
    ChiPlusHalf,
    ChiMinusHalf,
}

impl FigureKind {
    fn y<T: Scalar>(self) -> T {
        match self {
            FigureKind::PsiZero | FigureKind::ChiPlusZero => T::zero(),
            _ => T::of(0.5),
        }
    }
}

/// Samples the requested curve over the pole-windowed angular grid.
pub fn figure_dataset<T: Scalar>(
    kind: FigureKind,
    grid_size: usize,
    pole_epsilon: T,
    abel: &AbelParams<T>,
) -> Result<Vec<FigureRow<T>>> {
    let grid = AngularGrid::new(grid_size)?;
    let y = kind.y::<T>();
    let (even, odd) = psi_theta0_parts_grid(y, grid, abel);
    let mut rows = Vec::new();
    for k in 0..grid.size {
        let phi: T = grid.phi(k);
        if dist_to_pi(phi) < pole_epsilon {
            continue;
        }
        let value = match kind {
            FigureKind::PsiZero | FigureKind::PsiHalf => even[k] + odd[k],
            FigureKind::ChiPlusZero | FigureKind::ChiPlusHalf => {
                let root = (T::one() + phi.cos()).sqrt();
                let osc = y * y * (phi * T::of(0.5)).tan() * T::of(0.5);
                even[k].scale(root) * unit_phase(-osc)
            }
            FigureKind::ChiMinusHalf => {
                let root = (T::one() + phi.cos()).sqrt();
                let osc = y * y * (phi * T::of(0.5)).tan() * T::of(0.5);
                odd[k].scale(root) * unit_phase(osc)
            }
        };
        rows.push(FigureRow {
            phi,
            re: value.re,
            im: value.im,
            abs: value.norm(),
        });
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;
    use std::f64::consts::PI;

    fn abel() -> AbelParams<f64> {
        AbelParams::default_schedule()
    }

    #[test]
    fn schedule_validation() {
        assert!(AbelParams::<f64>::new(vec![], true).is_err());
        assert!(AbelParams::new(vec![0.999, 0.99], true).is_err());
        assert!(AbelParams::new(vec![0.5, 1.0], true).is_err());
        let a = abel();
        for (&n, want) in a.n_terms.iter().zip([3000usize, 30000, 300000]) {
            assert!(n >= want && n <= want + 2, "n_terms {n} vs {want}");
        }
    }

    #[test]
    fn coeff_l_spot_values() {
        let label = FockMubLabel::new(0.0f64, 0.0).unwrap();
        let c0 = coeff_l(&label, 0);
        assert!((c0 - cr(PI.powf(-0.25))).norm() < 1e-15);
        assert!(coeff_l(&label, -1).norm() < 1e-300);
        // partial sums of |coeff_l|^2 over l equal the direct n-sums
        let label = FockMubLabel::new(0.9f64, 0.7).unwrap();
        let f = hermite_seq(40, 0.7);
        let by_l: f64 = (-20i64..=20).map(|l| coeff_l(&label, l).norm_sqr()).sum();
        let by_n: f64 = f.iter().map(|v| v * v).sum();
        assert!((by_l - by_n).abs() < 1e-13);
    }

    #[test]
    fn overlap_matches_unbiasedness_constant() {
        let a = FockMubLabel::new(0.3f64, 0.3).unwrap();
        let b = FockMubLabel::new(0.3 + PI / 2.0, -1.1).unwrap();
        let v = overlap_fock(&a, &b).unwrap();
        let want = 1.0 / (2.0 * PI);
        assert!((v.norm_sqr() - want).abs() < 1e-12 * want);
        let b = FockMubLabel::new(0.5f64, -1.1).unwrap();
        let v = overlap_fock(&a, &b).unwrap();
        let want = 1.0 / (2.0 * PI * 0.2f64.sin());
        assert!((v.norm_sqr() - want).abs() < 1e-10 * want);
    }

    #[test]
    fn overlap_series_cross_check() {
        let a = FockMubLabel::new(0.3f64, 0.3).unwrap();
        let b = FockMubLabel::new(0.5f64, -1.1).unwrap();
        let kernel = overlap_fock(&a, &b).unwrap();
        let series = overlap_fock_series(&a, &b, &abel()).unwrap();
        assert!(
            (kernel - series).norm() < 1e-5 * kernel.norm(),
            "kernel {kernel} series {series}"
        );
    }

    #[test]
    fn overlap_rejects_degenerate_angles() {
        let a = FockMubLabel::new(0.3f64, 0.3).unwrap();
        let b = FockMubLabel::new(0.3f64, -1.1).unwrap();
        assert!(matches!(overlap_fock(&a, &b), Err(Error::DegenerateAngles)));
    }

    #[test]
    fn series_to_kernel_error_decreases_along_schedule() {
        let a = FockMubLabel::new(0.3f64, 0.45).unwrap();
        let b = FockMubLabel::new(1.4f64, -0.8).unwrap();
        let kernel = overlap_fock(&a, &b).unwrap();
        let dth = 1.1f64;
        let params = abel();
        let f1 = hermite_seq(params.n_terms[2], a.y());
        let f2 = hermite_seq(params.n_terms[2], b.y());
        let mut errs = Vec::new();
        for (&r, &n) in params.radii.iter().zip(&params.n_terms) {
            let mut acc = c(0.0, 0.0);
            let mut rp = 1.0f64;
            for m in 0..=n {
                acc += unit_phase(m as f64 * dth).scale(f1[m] * f2[m] * rp);
                rp *= r;
            }
            errs.push((acc - kernel).norm());
        }
        assert!(errs[0] > errs[1] && errs[1] > errs[2], "{errs:?}");
    }

    #[test]
    fn theta_reduction_is_exact_rearrangement() {
        let single = AbelParams::single(0.99f64).unwrap();
        for (theta, y, phi) in [
            (0.7f64, 0.5f64, 0.4f64),
            (1.9, -1.1, 2.0),
            (2.5, 0.25, -1.4),
        ] {
            let label = FockMubLabel::new(theta, y).unwrap();
            let direct = psi_series(&label, phi, &single).unwrap();
            let reduced = psi_via_theta0(&label, phi, &single).unwrap();
            assert!(
                (direct - reduced).norm() < 1e-13,
                "theta={theta} y={y} phi={phi}: {:e}",
                (direct - reduced).norm()
            );
        }
    }

    #[test]
    fn chi_minus_vanishes_at_y_zero() {
        for phi in [0.0, 1.2, -2.0] {
            let (_, chi_m) = chi_decompose(0.0f64, phi, &abel()).unwrap();
            assert!(chi_m.norm() < 1e-14);
        }
    }

    #[test]
    fn chi_plus_at_origin_matches_independent_damped_evaluation() {
        // independent oracle: plain loop over f_{2l}(0) r^{2l} at three radii
        // with polynomial extrapolation done by hand
        let radii = [0.99f64, 0.999, 0.9999];
        let mut vals = Vec::new();
        for &r in &radii {
            let n = (30.0 / (1.0 - r)).ceil() as usize;
            let f = hermite_seq(n, 0.0);
            let mut acc = 0.0f64;
            let mut rp = 1.0;
            for l in 0..=(n / 2) {
                acc += f[2 * l] * rp;
                rp *= r * r;
            }
            vals.push(acc);
        }
        // quadratic Neville through (1-r, val) to 0 on real values
        let xs = [0.01, 0.001, 0.0001];
        let mut tab = vals.clone();
        for level in 1..3 {
            for i in 0..3 - level {
                tab[i] = (tab[i + 1] * xs[i] - tab[i] * xs[i + level]) / (xs[i] - xs[i + level]);
            }
        }
        let oracle = 2.0f64.sqrt() * tab[0];
        let (chi_p, _) = chi_decompose(0.0f64, 0.0, &abel()).unwrap();
        assert!(
            (chi_p - cr(oracle)).norm() < 1e-9 * oracle.abs(),
            "chi+ {chi_p} oracle {oracle}"
        );
        // and psi(0) = chi+(0)/sqrt(2) at y = 0
        let (even, odd) = psi_theta0_parts(0.0f64, 0.0, &abel()).unwrap();
        let psi = even + odd;
        assert!((psi - chi_p.unscale(2.0f64.sqrt())).norm() < 1e-10);
    }

    #[test]
    fn chi_reconstruction_identity() {
        let ab = abel();
        for (y, phi) in [(0.5f64, 0.8f64), (0.5, -2.2), (1.1, 1.7)] {
            let (even, odd) = psi_theta0_parts(y, phi, &ab).unwrap();
            let (chi_p, chi_m) = chi_decompose(y, phi, &ab).unwrap();
            let root = (1.0 + phi.cos()).sqrt();
            let osc = 0.5 * y * y * (phi / 2.0).tan();
            let rebuilt = (unit_phase(osc) * chi_p + unit_phase(-osc) * chi_m).unscale(root);
            let psi = even + odd;
            assert!(
                (psi - rebuilt).norm() < 1e-10 * psi.norm().max(1.0),
                "y={y} phi={phi}"
            );
        }
    }

    #[test]
    fn pole_exponent_of_y_zero_wave_function() {
        // the y = 0 coefficients fall like l^{-1/4}, so the boundary sum
        // near the pole behaves like Gamma(3/4) (i delta)^{-3/4}: exponent
        // -3/8 in (1 + cos phi)
        let deltas: Vec<f64> = (0..6).map(|k| 0.3 * 0.7f64.powi(k)).collect();
        let slope = psi_pole_exponent(0.0f64, &abel(), &deltas).unwrap();
        assert!((slope + 0.375).abs() < 0.02, "slope {slope}");
    }

    #[test]
    fn grid_parts_match_pointwise_parts() {
        let grid = AngularGrid::new(64).unwrap();
        let ab = abel();
        let (even_g, odd_g) = psi_theta0_parts_grid(0.5f64, grid, &ab);
        for k in [3usize, 17, 40] {
            let phi: f64 = grid.phi(k);
            if dist_to_pi(phi) < 0.1 {
                continue;
            }
            let (e, o) = psi_theta0_parts(0.5f64, phi, &ab).unwrap();
            assert!((even_g[k] - e).norm() < 1e-9, "k={k}");
            assert!((odd_g[k] - o).norm() < 1e-9);
        }
    }

    #[test]
    fn y_theta_endpoints_are_q_and_p() {
        let trunc = FockTruncation::new(40).unwrap();
        let (q, p) = build_qp_from_el::<f64>(trunc);
        let y0 = y_theta_matrix(0.0f64, trunc);
        let yq = q.relabeled(BasisIndexing::FockIndexed);
        assert!(crate::linalg::max_abs_diff(&y0.matrix, &yq.matrix) < 1e-15);
        let y1 = y_theta_matrix(PI / 2.0, trunc);
        let yp = p.relabeled(BasisIndexing::FockIndexed);
        assert!(crate::linalg::max_abs_diff(&y1.matrix, &yp.matrix) < 1e-14);
    }

    #[test]
    fn y_theta_conjugation_identity() {
        let trunc = FockTruncation::new(160).unwrap();
        let r = y_theta_conjugation_residual(PI / 4.0, trunc);
        assert!(r < 1e-11, "residual {r:e}");
    }

    #[test]
    fn eigenvector_residual_localized_at_edge() {
        let label = FockMubLabel::new(0.8f64, 0.7).unwrap();
        let t1 = FockTruncation::new(100).unwrap();
        let t2 = FockTruncation::new(200).unwrap();
        let (int1, full1) = eigenvector_residual(&label, t1, 2);
        let (int2, full2) = eigenvector_residual(&label, t2, 2);
        assert!(int1 < 1e-12 && int2 < 1e-12, "{int1:e} {int2:e}");
        assert!(full1 > 1e-3 && full2 > 1e-3);
        // interior residual stays flat or shrinks as the cutoff grows
        assert!(int2 < 10.0 * int1 + 1e-12);
    }

    #[test]
    fn figure_rows_respect_pole_window() {
        let ab = AbelParams::new(vec![0.99, 0.999], true).unwrap();
        let rows = figure_dataset(FigureKind::ChiPlusZero, 256, 0.05f64, &ab).unwrap();
        assert!(rows.len() < 256);
        for r in &rows {
            assert!(dist_to_pi(r.phi) >= 0.05);
            assert!(r.abs.is_finite() && r.abs < 10.0);
        }
        // chi- of the y = 0 curve is absent by construction; the y = 1/2 one exists
        let rows = figure_dataset(FigureKind::ChiMinusHalf, 256, 0.05f64, &ab).unwrap();
        assert!(rows.iter().any(|r| r.abs > 1e-3));
    }

    #[test]
    fn bad_schedule_signals_no_convergence() {
        // widely spaced radii with a tight settle tolerance cannot settle
        let mut ab = AbelParams::new(vec![0.3f64, 0.5, 0.7], true).unwrap();
        ab.settle_tol = 1e-12;
        let label = FockMubLabel::new(0.0f64, 0.5).unwrap();
        assert!(matches!(
            psi_series(&label, 2.6, &ab),
            Err(Error::NoConvergence(_))
        ));
    }
}
