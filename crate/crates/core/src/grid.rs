//! Uniform line grid with Fourier spectral calculus: the house oracle for
//! applying momentum to smooth grid functions, plus the C-infinity plateau
//! windows used to build pole-avoiding test states.

use num_complex::Complex;

use crate::fft::dft;
use crate::scalar::{Scalar, C};

/// Periodic grid q_j = -width/2 + width * j / size.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineGrid<T: Scalar> {
    pub width: T,
    pub size: usize,
}

impl<T: Scalar> LineGrid<T> {
    pub fn new(width: T, size: usize) -> Self {
        assert!(size > 1 && width > T::zero());
        Self { width, size }
    }

    /// Default working grid: width 40 with 4096 points.
    pub fn standard() -> Self {
        Self::new(T::of(40.0), 4096)
    }

    pub fn point(&self, j: usize) -> T {
        -self.width * T::of(0.5) + self.width * T::of_usize(j) / T::of_usize(self.size)
    }

    pub fn points(&self) -> Vec<T> {
        (0..self.size).map(|j| self.point(j)).collect()
    }

    pub fn spacing(&self) -> T {
        self.width / T::of_usize(self.size)
    }

    /// Signed spectral wavenumber of FFT bin m.
    pub fn wavenumber(&self, m: usize) -> T {
        let half = self.size / 2;
        let signed = if m <= half {
            m as i64
        } else {
            m as i64 - self.size as i64
        };
        (T::PI() + T::PI()) * T::of_i64(signed) / self.width
    }

    pub fn sample(&self, f: impl Fn(T) -> C<T>) -> Vec<C<T>> {
        (0..self.size).map(|j| f(self.point(j))).collect()
    }

    /// d/dq by Fourier differentiation.
    pub fn derivative(&self, f: &[C<T>]) -> Vec<C<T>> {
        self.spectral_multiply(f, |k| Complex::new(T::zero(), k))
    }

    /// Momentum operator P = -i d/dq.
    pub fn apply_p(&self, f: &[C<T>]) -> Vec<C<T>> {
        self.spectral_multiply(f, |k| Complex::new(k, T::zero()))
    }

    /// P^2 = -d^2/dq^2.
    pub fn apply_p2(&self, f: &[C<T>]) -> Vec<C<T>> {
        self.spectral_multiply(f, |k| Complex::new(k * k, T::zero()))
    }

    fn spectral_multiply(&self, f: &[C<T>], factor: impl Fn(T) -> C<T>) -> Vec<C<T>> {
        assert_eq!(f.len(), self.size);
        let mut spec = dft(f.to_vec(), false);
        for (m, z) in spec.iter_mut().enumerate() {
            // zero the unbalanced Nyquist mode for odd derivatives
            let k = self.wavenumber(m);
            let fac = if self.size % 2 == 0 && m == self.size / 2 {
                let v = factor(k);
                Complex::new(v.re, T::zero())
            } else {
                factor(k)
            };
            *z = *z * fac;
        }
        dft(spec, true)
            .into_iter()
            .map(|z| z.unscale(T::of_usize(self.size)))
            .collect()
    }

    /// Trigonometric interpolation of grid data at arbitrary points.
    /// Coefficients below `drop_tol` of the peak are skipped; targets outside
    /// the box evaluate to zero (decaying data assumed).
    pub fn interpolate(&self, f: &[C<T>], targets: &[T], drop_tol: T) -> Vec<C<T>> {
        assert_eq!(f.len(), self.size);
        let spec = dft(f.to_vec(), false);
        let peak = spec.iter().fold(T::zero(), |m, z| m.max(z.norm()));
        let cut = peak * drop_tol;
        let kept: Vec<(T, C<T>)> = spec
            .iter()
            .enumerate()
            .filter(|(_, z)| z.norm() > cut)
            .map(|(m, z)| (self.wavenumber(m), z.unscale(T::of_usize(self.size))))
            .collect();
        let half = self.width * T::of(0.5);
        targets
            .iter()
            .map(|&q| {
                if q < -half || q >= half {
                    return Complex::new(T::zero(), T::zero());
                }
                // spectrum was taken against exp(-i k (q - q_0)) with q_0 the
                // left edge; re-anchor the evaluation point accordingly
                let x = q + half;
                let mut acc = Complex::new(T::zero(), T::zero());
                for &(k, c) in &kept {
                    let ang = k * x;
                    acc = acc + c * Complex::new(ang.cos(), ang.sin());
                }
                acc
            })
            .collect()
    }

    /// Discrete L2 norm sqrt(h sum |f|^2).
    pub fn norm(&self, f: &[C<T>]) -> T {
        (self.spacing()
            * f.iter().map(|z| z.norm_sqr()).fold(T::zero(), |a, b| a + b))
        .sqrt()
    }

    pub fn max_abs(&self, f: &[C<T>]) -> T {
        f.iter().fold(T::zero(), |m, z| m.max(z.norm()))
    }
}

/// C-infinity window: exactly 1 for |t| <= inner, exactly 0 for |t| >= outer,
/// smooth in between.
pub fn smooth_plateau<T: Scalar>(t: T, inner: T, outer: T) -> T {
    debug_assert!(inner < outer);
    let a = t.abs();
    if a <= inner {
        return T::one();
    }
    if a >= outer {
        return T::zero();
    }
    let u = (outer - a) / (outer - inner); // in (0,1)
    let su = (-u.recip()).exp();
    let sv = (-(T::one() - u).recip()).exp();
    su / (su + sv)
}
