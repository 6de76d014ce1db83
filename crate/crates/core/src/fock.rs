//! Identification of the oscillator number basis with the rotor
//! angular-momentum basis, and the operator dictionary built on it:
//! ladder A, shift E, angular momentum L, projectors, reflection R, and the
//! Heisenberg pair (Q, P) assembled from (E, L).
//!
//! The index map pairs 2n+1 = |4l+1|: nonnegative l sit on even n, negative
//! l on odd n. With an even cutoff n_max the retained l range is exactly
//! {-n_max/2, ..., +n_max/2}.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::linalg::{self, CMatrix};
use crate::operator::{BasisIndexing, TruncatedOperator};
use crate::scalar::{cr, unit_phase, Scalar};

/// Oscillator-number cutoff; must be even so the l range closes symmetrically.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FockTruncation {
    pub n_max: usize,
}

impl FockTruncation {
    /// The shift assembly contains two-step ladders, so cutoff contamination
    /// spreads two indices inward.
    pub const DEFAULT_EDGE_MARGIN: usize = 2;

    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 || n_max % 2 != 0 {
            return Err(Error::InvalidParameter(format!(
                "n_max must be positive and even, got {n_max}"
            )));
        }
        Ok(Self { n_max })
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    /// Largest |l| retained: l runs over {-l_span, ..., +l_span}.
    pub fn l_span(&self) -> usize {
        self.n_max / 2
    }

    pub fn l_index(&self, l: i64) -> usize {
        (l + self.l_span() as i64) as usize
    }
}

/// n with 2n+1 = |4l+1|; bijective from the integers onto the naturals.
pub fn n_of_l(l: i64) -> i64 {
    if l >= 0 {
        2 * l
    } else {
        -2 * l - 1
    }
}

/// Inverse map: l = (2n+1)/4 (-1)^n - 1/4 in exact integer arithmetic.
pub fn l_of_n(n: i64) -> i64 {
    debug_assert!(n >= 0);
    if n % 2 == 0 {
        n / 2
    } else {
        -(n + 1) / 2
    }
}

/// Isometric ladder A = sum_{n < n_max} |n><n+1| (FockIndexed). On the
/// truncation A A^dag = 1 - |n_max><n_max| and A^dag A = 1 - |0><0|: the
/// |0><0| defect is physical, the |n_max><n_max| one is the cutoff edge
/// (finite-dimensional commutators are traceless).
pub fn build_ladder<T: Scalar>(trunc: FockTruncation) -> TruncatedOperator<T> {
    let dim = trunc.dim();
    let mut m = linalg::zeros(dim);
    for n in 0..dim - 1 {
        m[[n, n + 1]] = cr(T::one());
    }
    TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, m)
}

/// Number operator N, diagonal n (FockIndexed).
pub fn build_number<T: Scalar>(trunc: FockTruncation) -> TruncatedOperator<T> {
    let dim = trunc.dim();
    let mut m = linalg::zeros(dim);
    for n in 0..dim {
        m[[n, n]] = cr(T::of_usize(n));
    }
    TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, m)
}

/// Angular momentum as a function of the number operator: diagonal with
/// entries l_of_n(n), exactly integer-valued (FockIndexed).
pub fn build_l_from_n<T: Scalar>(trunc: FockTruncation) -> TruncatedOperator<T> {
    let dim = trunc.dim();
    let mut m = linalg::zeros(dim);
    for n in 0..dim {
        m[[n, n]] = cr(T::of_i64(l_of_n(n as i64)));
    }
    TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, m)
}

/// The unitary shift assembled from the ladder:
/// E = A^dag^2 (1+(-1)^N)/2 + (1-(-1)^N)/2 A^2 + A - A^dag A^2 (FockIndexed).
pub fn build_e_fock<T: Scalar>(trunc: FockTruncation) -> TruncatedOperator<T> {
    let a = build_ladder::<T>(trunc).matrix;
    let ad = linalg::adjoint(&a);
    let dim = trunc.dim();
    // (1 +- (-1)^N)/2 are the parity projectors
    let mut p_even = linalg::zeros(dim);
    let mut p_odd = linalg::zeros(dim);
    for n in 0..dim {
        if n % 2 == 0 {
            p_even[[n, n]] = cr(T::one());
        } else {
            p_odd[[n, n]] = cr(T::one());
        }
    }
    let a2 = a.dot(&a);
    let ad2 = ad.dot(&ad);
    let e = ad2.dot(&p_even) + p_odd.dot(&a2) + &a - ad.dot(&a2);
    TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, e)
}

/// Direct shift sum_l |l+1><l| on the retained l range (LIndexed); the
/// transition out of l = +l_span is lost to the cutoff.
pub fn build_shift_direct<T: Scalar>(trunc: FockTruncation) -> TruncatedOperator<T> {
    let dim = trunc.dim();
    let mut m = linalg::zeros(dim);
    for i in 0..dim - 1 {
        m[[i + 1, i]] = cr(T::one());
    }
    TruncatedOperator::new(trunc, BasisIndexing::LIndexed, m)
}

pub struct ProjectorsReflection<T: Scalar> {
    /// Projector on l >= 0.
    pub pi_plus: TruncatedOperator<T>,
    /// Projector on l < 0.
    pub pi_minus: TruncatedOperator<T>,
    /// Hermitian unitary reflection R|l> = |-l>.
    pub reflection: TruncatedOperator<T>,
}

pub fn build_projectors_reflection<T: Scalar>(trunc: FockTruncation) -> ProjectorsReflection<T> {
    let dim = trunc.dim();
    let span = trunc.l_span() as i64;
    let mut pp = linalg::zeros(dim);
    let mut pm = linalg::zeros(dim);
    let mut r = linalg::zeros(dim);
    for i in 0..dim {
        let l = i as i64 - span;
        if l >= 0 {
            pp[[i, i]] = cr(T::one());
        } else {
            pm[[i, i]] = cr(T::one());
        }
        r[[trunc.l_index(-l), i]] = cr(T::one());
    }
    ProjectorsReflection {
        pi_plus: TruncatedOperator::new(trunc, BasisIndexing::LIndexed, pp),
        pi_minus: TruncatedOperator::new(trunc, BasisIndexing::LIndexed, pm),
        reflection: TruncatedOperator::new(trunc, BasisIndexing::LIndexed, r),
    }
}

/// The two alternative reflection forms, sum_l |l><l| E^{2l} and
/// sum_l E^{-2l} |l><l|, accumulated row-by-row / column-by-column.
/// Negative powers use E^dag, the inverse of the shift on interior rows.
pub fn reflection_power_forms<T: Scalar>(
    trunc: FockTruncation,
    e: &TruncatedOperator<T>,
) -> (TruncatedOperator<T>, TruncatedOperator<T>) {
    let e = e.relabeled(BasisIndexing::LIndexed);
    let ed = linalg::adjoint(&e.matrix);
    let dim = trunc.dim();
    let span = trunc.l_span() as i64;
    let zero = cr(T::zero());

    let mut form_rows = linalg::zeros(dim);
    let mut form_cols = linalg::zeros(dim);

    // rows: u_l = <l| E^{2l}, advanced by one E (or E^dag) per step of l
    let mut u = vec![zero; dim];
    u[trunc.l_index(0)] = cr(T::one());
    for l in 0..=span {
        let i = trunc.l_index(l);
        for j in 0..dim {
            form_rows[[i, j]] = u[j];
        }
        u = linalg::vecmat(&u, &e.matrix);
    }
    let mut u = vec![zero; dim];
    u[trunc.l_index(0)] = cr(T::one());
    for l in 0..=span {
        if l > 0 {
            let i = trunc.l_index(-l);
            for j in 0..dim {
                form_rows[[i, j]] = u[j];
            }
        }
        u = linalg::vecmat(&u, &ed);
    }

    // columns: v_l = E^{-2l} |l>
    let mut v = vec![zero; dim];
    v[trunc.l_index(0)] = cr(T::one());
    for l in 0..=span {
        let j = trunc.l_index(l);
        for i in 0..dim {
            form_cols[[i, j]] = v[i];
        }
        v = linalg::matvec(&ed, &v);
    }
    let mut v = vec![zero; dim];
    v[trunc.l_index(0)] = cr(T::one());
    for l in 0..=span {
        if l > 0 {
            let j = trunc.l_index(-l);
            for i in 0..dim {
                form_cols[[i, j]] = v[i];
            }
        }
        v = linalg::matvec(&e.matrix, &v);
    }

    (
        TruncatedOperator::new(trunc, BasisIndexing::LIndexed, form_rows),
        TruncatedOperator::new(trunc, BasisIndexing::LIndexed, form_cols),
    )
}

/// The Heisenberg pair from the rotor dictionary:
/// Q + iP = sqrt(4L+2) Pi_+ R E + sqrt(-4L) Pi_- R, with Q, P the Hermitian
/// parts. The square roots act entrywise on the diagonal of L, restricted to
/// the ranges where the matching projector makes the radicand nonnegative;
/// elsewhere the factor multiplies a zero projector and is set to 0.
pub fn build_qp_from_el<T: Scalar>(trunc: FockTruncation) -> (TruncatedOperator<T>, TruncatedOperator<T>) {
    let dim = trunc.dim();
    let span = trunc.l_span() as i64;
    let e = build_shift_direct::<T>(trunc);
    let pr = build_projectors_reflection::<T>(trunc);
    let re = pr.reflection.matrix.dot(&e.matrix);
    let r = &pr.reflection.matrix;

    let mut s = linalg::zeros(dim);
    for i in 0..dim {
        let l = i as i64 - span;
        let d_plus = if l >= 0 {
            (T::of_i64(4 * l + 2)).sqrt()
        } else {
            T::zero()
        };
        let d_minus = if l < 0 { (T::of_i64(-4 * l)).sqrt() } else { T::zero() };
        for j in 0..dim {
            s[[i, j]] = re[[i, j]].scale(d_plus) + r[[i, j]].scale(d_minus);
        }
    }
    let s_dag = linalg::adjoint(&s);
    let half = T::of(0.5);
    let q = (&s + &s_dag).mapv(|z| z.scale(half));
    let p = (&s - &s_dag).mapv(|z| (z * Complex::new(T::zero(), -T::one())).scale(half));
    (
        TruncatedOperator::new(trunc, BasisIndexing::LIndexed, q),
        TruncatedOperator::new(trunc, BasisIndexing::LIndexed, p),
    )
}

/// Reference form sqrt(2N+2) A of the same combination (FockIndexed).
pub fn qp_ladder_reference<T: Scalar>(trunc: FockTruncation) -> TruncatedOperator<T> {
    let dim = trunc.dim();
    let mut m = linalg::zeros(dim);
    for n in 0..dim - 1 {
        m[[n, n + 1]] = cr((T::of_usize(2 * n + 2)).sqrt());
    }
    TruncatedOperator::new(trunc, BasisIndexing::FockIndexed, m)
}

/// Discretized projector identity |l><l| = avg_alpha e^{i(L-l) alpha}:
/// returns the max entrywise deviation between the alpha-average of the
/// diagonal phase matrix and the projector (or the zero matrix when l lies
/// outside the retained spectrum).
pub fn projector_integral_check<T: Scalar>(
    l: i64,
    trunc: FockTruncation,
    alpha_nodes: usize,
) -> T {
    let dim = trunc.dim();
    let span = trunc.l_span() as i64;
    let two_pi = T::PI() + T::PI();
    let mut avg = vec![cr(T::zero()); dim];
    for k in 0..alpha_nodes {
        let alpha = two_pi * T::of_usize(k) / T::of_usize(alpha_nodes);
        for i in 0..dim {
            let li = i as i64 - span;
            avg[i] = avg[i] + unit_phase(T::of_i64(li - l) * alpha);
        }
    }
    let mut dev = T::zero();
    for i in 0..dim {
        let got = avg[i].unscale(T::of_usize(alpha_nodes));
        let want = if i as i64 - span == l { T::one() } else { T::zero() };
        dev = dev.max((got - cr(want)).norm());
    }
    dev
}

/// Conjugation map f(E, L) -> R f(E, L) R, for checking
/// R f(E,L) R = f(E^dag, -L).
pub fn conjugate_by_reflection<T: Scalar>(
    r: &TruncatedOperator<T>,
    f: &CMatrix<T>,
) -> CMatrix<T> {
    r.matrix.dot(f).dot(&r.matrix)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{adjoint, commutator, identity, max_abs_diff};
    use crate::scalar::c;
    use proptest::prelude::*;

    fn trunc(n_max: usize) -> FockTruncation {
        FockTruncation::new(n_max).unwrap()
    }

    #[test]
    fn index_map_spot_values() {
        assert_eq!(n_of_l(0), 0);
        assert_eq!(n_of_l(-1), 1);
        assert_eq!(n_of_l(1), 2);
        assert_eq!(n_of_l(-2), 3);
        assert_eq!(l_of_n(0), 0);
        assert_eq!(l_of_n(1), -1);
        assert_eq!(l_of_n(4), 2);
    }

    #[test]
    fn index_map_round_trip() {
        for l in -1_000_000i64..=1_000_000 {
            assert_eq!(l_of_n(n_of_l(l)), l);
        }
        for n in 0i64..=2_000_000 {
            assert_eq!(n_of_l(l_of_n(n)), n);
        }
    }

    #[test]
    fn ladder_actions() {
        let t = trunc(8);
        let a = build_ladder::<f64>(t);
        // A|1> = |0>
        let mut v = vec![cr(0.0); t.dim()];
        v[1] = cr(1.0);
        let av = a.apply(&v);
        assert!((av[0] - cr(1.0)).norm() < 1e-15);
        assert!(av[1..].iter().all(|z| z.norm() < 1e-15));
        // A|0> = 0
        let mut v0 = vec![cr(0.0); t.dim()];
        v0[0] = cr(1.0);
        assert!(a.apply(&v0).iter().all(|z| z.norm() < 1e-15));
        // AA^dag = 1 - |n_max><n_max| exactly; A^dag A = 1 - |0><0|
        let ad = adjoint(&a.matrix);
        let mut want = identity::<f64>(t.dim());
        want[[t.dim() - 1, t.dim() - 1]] = cr(0.0);
        assert!(max_abs_diff(&a.matrix.dot(&ad), &want) < 1e-15);
        let mut want = identity::<f64>(t.dim());
        want[[0, 0]] = cr(0.0);
        assert!(max_abs_diff(&ad.dot(&a.matrix), &want) < 1e-15);
        // [A, A^dag] = |0><0| - |n_max><n_max| on the truncation
        let comm = commutator(&a.matrix, &ad);
        let mut expect = crate::linalg::zeros::<f64>(t.dim());
        expect[[0, 0]] = cr(1.0);
        expect[[t.dim() - 1, t.dim() - 1]] = cr(-1.0);
        assert!(max_abs_diff(&comm, &expect) < 1e-15);
    }

    #[test]
    fn shift_spot_actions() {
        let t = trunc(8);
        let e = build_e_fock::<f64>(t);
        // E|n=0> = |n=2>  (l: 0 -> 1)
        let mut v = vec![cr(0.0); t.dim()];
        v[0] = cr(1.0);
        let ev = e.apply(&v);
        assert!((ev[2] - cr(1.0)).norm() < 1e-15);
        assert_eq!(ev.iter().filter(|z| z.norm() > 1e-14).count(), 1);
        // E|n=1> = |n=0>  (l: -1 -> 0)
        let mut v = vec![cr(0.0); t.dim()];
        v[1] = cr(1.0);
        let ev = e.apply(&v);
        assert!((ev[0] - cr(1.0)).norm() < 1e-15);
    }

    #[test]
    fn assembled_shift_equals_direct_shift_in_interior() {
        let t = trunc(40);
        let e = build_e_fock::<f64>(t);
        let d = build_shift_direct::<f64>(t);
        assert!(e.interior_max_dev(&d, 2) < 1e-14);
        // isometry on the interior
        let ed_e = TruncatedOperator::new(
            t,
            BasisIndexing::FockIndexed,
            adjoint(&e.matrix).dot(&e.matrix),
        );
        assert!(ed_e.interior_dev_from_identity(2) < 1e-14);
    }

    #[test]
    fn l_diagonal_and_commutator() {
        let t = trunc(40);
        let l = build_l_from_n::<f64>(t);
        for (n, want) in [(0usize, 0.0), (1, -1.0), (2, 1.0), (3, -2.0), (4, 2.0)] {
            assert_eq!(l.matrix[[n, n]], cr(want));
        }
        // spectrum covers -span..span once each
        let mut seen: Vec<i64> = (0..t.dim()).map(|n| l.matrix[[n, n]].re as i64).collect();
        seen.sort();
        let want: Vec<i64> = (-(t.l_span() as i64)..=t.l_span() as i64).collect();
        assert_eq!(seen, want);
        // [L, E] = E on the interior
        let e = build_e_fock::<f64>(t);
        let comm = commutator(&l.matrix, &e.matrix);
        let diff = TruncatedOperator::new(t, BasisIndexing::FockIndexed, comm);
        assert!(diff.interior_max_dev(&e, 2) < 1e-13);
    }

    #[test]
    fn reflection_and_projectors() {
        let t = trunc(12);
        let pr = build_projectors_reflection::<f64>(t);
        let dim = t.dim();
        // R|l=2> = |l=-2>
        let mut v = vec![cr(0.0); dim];
        v[t.l_index(2)] = cr(1.0);
        let rv = pr.reflection.apply(&v);
        assert!((rv[t.l_index(-2)] - cr(1.0)).norm() < 1e-15);
        // R^2 = 1, R hermitian
        assert!(max_abs_diff(&pr.reflection.matrix.dot(&pr.reflection.matrix), &identity(dim)) < 1e-15);
        assert!(max_abs_diff(&pr.reflection.matrix, &adjoint(&pr.reflection.matrix)) < 1e-15);
        // projector split
        let sum = &pr.pi_plus.matrix + &pr.pi_minus.matrix;
        assert!(max_abs_diff(&sum, &identity(dim)) < 1e-15);
        // Pi_+|l=0> = |l=0>, Pi_-|l=0> = 0
        let mut v0 = vec![cr(0.0); dim];
        v0[t.l_index(0)] = cr(1.0);
        assert!((pr.pi_plus.apply(&v0)[t.l_index(0)] - cr(1.0)).norm() < 1e-15);
        assert!(pr.pi_minus.apply(&v0).iter().all(|z| z.norm() < 1e-15));
    }

    #[test]
    fn reflection_power_forms_match_direct() {
        let t = trunc(24);
        let e = build_shift_direct::<f64>(t);
        let (f1, f2) = reflection_power_forms(t, &e);
        let pr = build_projectors_reflection::<f64>(t);
        assert!(f1.interior_max_dev(&pr.reflection, 2) < 1e-13);
        assert!(f2.interior_max_dev(&pr.reflection, 2) < 1e-13);
    }

    #[test]
    fn qp_matches_ladder_reference_everywhere() {
        let t = trunc(60);
        let (q, p) = build_qp_from_el::<f64>(t);
        let s = &q.matrix + &p.matrix.mapv(|z| z * c(0.0, 1.0));
        let got = TruncatedOperator::new(t, BasisIndexing::LIndexed, s);
        let want = qp_ladder_reference::<f64>(t);
        // exact on the whole truncation, not only the interior
        assert!(got.interior_max_dev(&want, 0) < 1e-12);
    }

    #[test]
    fn qp_commutator_is_i_in_interior() {
        let t = trunc(120);
        let (q, p) = build_qp_from_el::<f64>(t);
        let comm = commutator(&q.matrix, &p.matrix);
        let dim = t.dim();
        let i_id = identity::<f64>(dim).mapv(|z| z * c(0.0, 1.0));
        let dev_op = TruncatedOperator::new(t, BasisIndexing::LIndexed, comm.clone());
        let want = TruncatedOperator::new(t, BasisIndexing::LIndexed, i_id);
        assert!(dev_op.interior_max_dev(&want, 2) < 1e-12);
        // deviations exist but are confined to the edge
        assert!(dev_op.edge_max_dev(&want, 2) > 0.5);
        // <n=0|Q|n=0> = 0 (parity)
        let qf = q.relabeled(BasisIndexing::FockIndexed);
        assert!(qf.matrix[[0, 0]].norm() < 1e-15);
    }

    #[test]
    fn reflection_conjugation_flips_e_and_l() {
        let t = trunc(40);
        let e = build_shift_direct::<f64>(t);
        let l = build_l_from_n::<f64>(t).relabeled(BasisIndexing::LIndexed);
        let pr = build_projectors_reflection::<f64>(t);
        let ed = adjoint(&e.matrix);
        let cases: Vec<(CMatrix<f64>, CMatrix<f64>)> = vec![
            (e.matrix.clone(), ed.clone()),
            (l.matrix.clone(), l.matrix.mapv(|z| -z)),
            (e.matrix.dot(&e.matrix), ed.dot(&ed)),
            (l.matrix.dot(&e.matrix), l.matrix.mapv(|z| -z).dot(&ed)),
        ];
        for (f, want) in cases {
            let got = conjugate_by_reflection(&pr.reflection, &f);
            let got_op = TruncatedOperator::new(t, BasisIndexing::LIndexed, got);
            let want_op = TruncatedOperator::new(t, BasisIndexing::LIndexed, want);
            assert!(got_op.interior_max_dev(&want_op, 2) < 1e-12);
        }
    }

    #[test]
    fn projector_integral_is_spectrally_exact() {
        let t = trunc(40);
        assert!(projector_integral_check::<f64>(0, t, 512) < 1e-10);
        assert!(projector_integral_check::<f64>(-7, t, 512) < 1e-10);
        // l outside the retained spectrum averages to the zero matrix
        let dev = projector_integral_check::<f64>(t.l_span() as i64 + 3, t, 512);
        assert!(dev < 1e-10);
        // completeness: sum over retained l of projectors = identity
        let dim = t.dim();
        let mut acc = crate::linalg::zeros::<f64>(dim);
        for l in -(t.l_span() as i64)..=t.l_span() as i64 {
            acc[[t.l_index(l), t.l_index(l)]] = cr(1.0);
        }
        assert!(max_abs_diff(&acc, &identity(dim)) < 1e-15);
    }

    #[test]
    fn relabeling_is_a_permutation() {
        let t = trunc(10);
        let e = build_e_fock::<f64>(t);
        let twice = e.relabeled(BasisIndexing::LIndexed).relabeled(BasisIndexing::FockIndexed);
        assert!(max_abs_diff(&e.matrix, &twice.matrix) == 0.0);
        // E in l-indexing acts as the +1 shift: row (l=1 <- l=0)
        let el = e.relabeled(BasisIndexing::LIndexed);
        assert!((el.matrix[[t.l_index(1), t.l_index(0)]] - cr(1.0)).norm() < 1e-15);
    }

    #[test]
    fn odd_n_max_rejected() {
        assert!(FockTruncation::new(401).is_err());
        assert!(FockTruncation::new(0).is_err());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn bijection_holds_everywhere(l in -10_000_000i64..10_000_000) {
            prop_assert_eq!(l_of_n(n_of_l(l)), l);
            prop_assert_eq!((2 * n_of_l(l) + 1).abs(), (4 * l + 1).abs());
        }
    }
}
