//! Dense complex linear algebra over the generic scalar: products, LU solves,
//! and a cyclic Jacobi eigensolver for Hermitian matrices. Dimensions in this
//! crate stay in the hundreds, so O(n^3) direct methods are the right tool.

use ndarray::Array2;
use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, C};

pub type CMatrix<T> = Array2<C<T>>;

pub fn zeros<T: Scalar>(dim: usize) -> CMatrix<T> {
    Array2::from_elem((dim, dim), Complex::new(T::zero(), T::zero()))
}

pub fn identity<T: Scalar>(dim: usize) -> CMatrix<T> {
    let mut m = zeros(dim);
    for i in 0..dim {
        m[[i, i]] = Complex::new(T::one(), T::zero());
    }
    m
}

pub fn adjoint<T: Scalar>(a: &CMatrix<T>) -> CMatrix<T> {
    let (r, c) = a.dim();
    Array2::from_shape_fn((c, r), |(i, j)| a[[j, i]].conj())
}

pub fn commutator<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> CMatrix<T> {
    a.dot(b) - b.dot(a)
}

pub fn max_abs<T: Scalar>(a: &CMatrix<T>) -> T {
    a.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

pub fn max_abs_diff<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> T {
    assert_eq!(a.dim(), b.dim(), "shape mismatch");
    let mut m = T::zero();
    for (x, y) in a.iter().zip(b.iter()) {
        m = m.max((x - y).norm());
    }
    m
}

/// Deviation of `a` from Hermitian symmetry, max |a - a^dagger|.
pub fn hermiticity_defect<T: Scalar>(a: &CMatrix<T>) -> T {
    max_abs_diff(a, &adjoint(a))
}

pub fn matvec<T: Scalar>(a: &CMatrix<T>, v: &[C<T>]) -> Vec<C<T>> {
    let (r, c) = a.dim();
    assert_eq!(c, v.len());
    (0..r)
        .map(|i| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for j in 0..c {
                acc = acc + a[[i, j]] * v[j];
            }
            acc
        })
        .collect()
}

/// Row vector times matrix, `v^T a`.
pub fn vecmat<T: Scalar>(v: &[C<T>], a: &CMatrix<T>) -> Vec<C<T>> {
    let (r, c) = a.dim();
    assert_eq!(r, v.len());
    (0..c)
        .map(|j| {
            let mut acc = Complex::new(T::zero(), T::zero());
            for i in 0..r {
                acc = acc + v[i] * a[[i, j]];
            }
            acc
        })
        .collect()
}

pub fn vec_norm<T: Scalar>(v: &[C<T>]) -> T {
    v.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b).sqrt()
}

pub fn vec_max_abs<T: Scalar>(v: &[C<T>]) -> T {
    v.iter().fold(T::zero(), |m, z| m.max(z.norm()))
}

/// Solves `a x = b` for each column of `b` by LU with partial pivoting.
pub fn lu_solve<T: Scalar>(a: &CMatrix<T>, b: &CMatrix<T>) -> Result<CMatrix<T>> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    assert_eq!(b.nrows(), n);
    let mut lu = a.clone();
    let mut x = b.clone();
    let mut perm: Vec<usize> = (0..n).collect();
    for k in 0..n {
        let mut p = k;
        let mut best = lu[[k, k]].norm();
        for i in k + 1..n {
            let v = lu[[i, k]].norm();
            if v > best {
                best = v;
                p = i;
            }
        }
        if !(best > T::zero()) || !best.is_finite() {
            return Err(Error::Singular(format!("zero pivot at column {k}")));
        }
        if p != k {
            perm.swap(p, k);
            for j in 0..n {
                let t = lu[[k, j]];
                lu[[k, j]] = lu[[p, j]];
                lu[[p, j]] = t;
            }
            for j in 0..x.ncols() {
                let t = x[[k, j]];
                x[[k, j]] = x[[p, j]];
                x[[p, j]] = t;
            }
        }
        let piv = lu[[k, k]];
        for i in k + 1..n {
            let f = lu[[i, k]] / piv;
            lu[[i, k]] = f;
            for j in k + 1..n {
                let s = lu[[k, j]];
                lu[[i, j]] = lu[[i, j]] - f * s;
            }
            for j in 0..x.ncols() {
                let s = x[[k, j]];
                x[[i, j]] = x[[i, j]] - f * s;
            }
        }
    }
    // back substitution
    for j in 0..x.ncols() {
        for i in (0..n).rev() {
            let mut acc = x[[i, j]];
            for m in i + 1..n {
                acc = acc - lu[[i, m]] * x[[m, j]];
            }
            x[[i, j]] = acc / lu[[i, i]];
        }
    }
    Ok(x)
}

pub fn inverse<T: Scalar>(a: &CMatrix<T>) -> Result<CMatrix<T>> {
    lu_solve(a, &identity(a.nrows()))
}

/// Eigendecomposition of a Hermitian matrix.
pub struct HermEig<T: Scalar> {
    /// Eigenvalues, ascending.
    pub values: Vec<T>,
    /// Unitary matrix whose columns are the matching eigenvectors.
    pub vectors: CMatrix<T>,
}

/// Cyclic Jacobi for complex Hermitian matrices. Converges quadratically;
/// sweeps are capped, with off-diagonal mass driven below n*eps*|A|_F.
pub fn herm_eig<T: Scalar>(a: &CMatrix<T>) -> HermEig<T> {
    let n = a.nrows();
    assert_eq!(a.ncols(), n);
    let mut m = a.clone();
    let mut v = identity(n);
    if n == 0 {
        return HermEig { values: vec![], vectors: v };
    }
    let fro = m.iter().map(|z| z.norm_sqr()).fold(T::zero(), |x, y| x + y).sqrt();
    let tol = T::epsilon() * fro * T::of_usize(n);
    for _sweep in 0..40 {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off + m[[p, q]].norm_sqr();
            }
        }
        if off.sqrt() <= tol {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = m[[p, q]];
                let mag = apq.norm();
                if mag <= T::epsilon() * fro {
                    continue;
                }
                // phase so the pivot block becomes real symmetric
                let phase = apq.unscale(mag); // e^{i phi}
                let app = m[[p, p]].re;
                let aqq = m[[q, q]].re;
                let tau = (aqq - app) / (mag + mag);
                let t = {
                    let s = if tau >= T::zero() { T::one() } else { -T::one() };
                    s / (tau.abs() + (T::one() + tau * tau).sqrt())
                };
                let cth = (T::one() + t * t).sqrt().recip();
                let sth = t * cth;
                // U restricted to (p,q): [[c, s*conj(phase)... ]] composed with
                // the diagonal phase; columns:
                //   col p = (c, -s*conj(phase)), col q = (s, c*conj(phase))
                let cp = Complex::new(cth, T::zero());
                let sp = Complex::new(sth, T::zero());
                let ph_conj = phase.conj();
                // right multiply rows: m <- m * U
                for i in 0..n {
                    let mip = m[[i, p]];
                    let miq = m[[i, q]];
                    m[[i, p]] = mip * cp - miq * ph_conj * sp;
                    m[[i, q]] = mip * sp + miq * ph_conj * cp;
                }
                // left multiply: m <- U^dagger * m
                for j in 0..n {
                    let mpj = m[[p, j]];
                    let mqj = m[[q, j]];
                    m[[p, j]] = mpj * cp - mqj * phase * sp;
                    m[[q, j]] = mpj * sp + mqj * phase * cp;
                }
                // accumulate eigenvectors: v <- v * U
                for i in 0..n {
                    let vip = v[[i, p]];
                    let viq = v[[i, q]];
                    v[[i, p]] = vip * cp - viq * ph_conj * sp;
                    v[[i, q]] = vip * sp + viq * ph_conj * cp;
                }
                let zero = T::zero();
                m[[p, q]] = Complex::new(zero, zero);
                m[[q, p]] = Complex::new(zero, zero);
                m[[p, p]] = Complex::new(m[[p, p]].re, zero);
                m[[q, q]] = Complex::new(m[[q, q]].re, zero);
            }
        }
    }
    let mut order: Vec<usize> = (0..n).collect();
    let vals: Vec<T> = (0..n).map(|i| m[[i, i]].re).collect();
    order.sort_by(|&i, &j| vals[i].partial_cmp(&vals[j]).unwrap());
    let values: Vec<T> = order.iter().map(|&i| vals[i]).collect();
    let vectors = Array2::from_shape_fn((n, n), |(i, j)| v[[i, order[j]]]);
    HermEig { values, vectors }
}

/// Applies a real function to a Hermitian matrix through its spectrum.
pub fn herm_func<T: Scalar>(a: &CMatrix<T>, f: impl Fn(T) -> T) -> CMatrix<T> {
    let eig = herm_eig(a);
    let n = a.nrows();
    let mut out = zeros(n);
    for k in 0..n {
        let fv = f(eig.values[k]);
        for i in 0..n {
            let vik = eig.vectors[[i, k]];
            for j in 0..n {
                out[[i, j]] = out[[i, j]] + vik * eig.vectors[[j, k]].conj().scale(fv);
            }
        }
    }
    out
}

/// Operator absolute value |A| = sqrt(A^dagger A).
pub fn abs_psd<T: Scalar>(a: &CMatrix<T>) -> CMatrix<T> {
    let ata = adjoint(a).dot(a);
    herm_func(&ata, |x| x.max(T::zero()).sqrt())
}
