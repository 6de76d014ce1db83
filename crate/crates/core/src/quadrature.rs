//! Quadrature and extrapolation helpers: composite Gauss-Legendre rules,
//! Neville extrapolation to zero, and the closed-form complex Gaussian
//! integral used as an oracle for smeared-overlap checks.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::scalar::{cr, Scalar, C};

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre<T: Scalar>(n: usize) -> (Vec<T>, Vec<T>) {
    assert!(n >= 1);
    let mut nodes = vec![T::zero(); n];
    let mut weights = vec![T::zero(); n];
    let nf = T::of_usize(n);
    for i in 0..n.div_ceil(2) {
        // Chebyshev-like initial guess
        let guess =
            (T::PI() * (T::of_usize(i) + T::of(0.75)) / (nf + T::of(0.5))).cos();
        let mut x = guess;
        let mut dp = T::zero();
        for _ in 0..100 {
            let (p, d) = legendre_pair(n, x);
            dp = d;
            let dx = p / d;
            x = x - dx;
            if dx.abs() <= T::epsilon() * (T::one() + x.abs()) {
                break;
            }
        }
        let w = T::of(2.0) / ((T::one() - x * x) * dp * dp);
        nodes[i] = -x;
        weights[i] = w;
        nodes[n - 1 - i] = x;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, d) = legendre_pair(n, T::zero());
        nodes[n / 2] = T::zero();
        weights[n / 2] = T::of(2.0) / (d * d);
    }
    (nodes, weights)
}

/// Value and derivative of P_n at x.
fn legendre_pair<T: Scalar>(n: usize, x: T) -> (T, T) {
    let mut p0 = T::one();
    let mut p1 = x;
    if n == 0 {
        return (p0, T::zero());
    }
    for k in 2..=n {
        let kf = T::of_usize(k);
        let p2 = ((T::of(2.0) * kf - T::one()) * x * p1 - (kf - T::one()) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = T::of_usize(n) * (x * p1 - p0) / (x * x - T::one());
    (p1, d)
}

/// Pre-scaled rule reused across panels.
pub struct GlRule<T: Scalar> {
    nodes: Vec<T>,
    weights: Vec<T>,
}

impl<T: Scalar> GlRule<T> {
    pub fn new(order: usize) -> Self {
        let (nodes, weights) = gauss_legendre(order);
        Self { nodes, weights }
    }

    pub fn integrate<F: FnMut(T) -> C<T>>(&self, a: T, b: T, mut f: F) -> C<T> {
        let half = (b - a) * T::of(0.5);
        let mid = (a + b) * T::of(0.5);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (x, w) in self.nodes.iter().zip(&self.weights) {
            acc = acc + f(mid + half * *x).scale(*w);
        }
        acc.scale(half)
    }

    /// Composite rule over `panels` equal subintervals of [a, b].
    pub fn integrate_panels<F: FnMut(T) -> C<T>>(
        &self,
        a: T,
        b: T,
        panels: usize,
        mut f: F,
    ) -> C<T> {
        let panels = panels.max(1);
        let step = (b - a) / T::of_usize(panels);
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in 0..panels {
            let lo = a + step * T::of_usize(p);
            acc = acc + self.integrate(lo, lo + step, &mut f);
        }
        acc
    }
}

/// Composite Gauss-Legendre integral of a complex-valued function.
pub fn integrate_gl<T: Scalar, F: FnMut(T) -> C<T>>(
    a: T,
    b: T,
    panels: usize,
    order: usize,
    f: F,
) -> C<T> {
    GlRule::new(order).integrate_panels(a, b, panels, f)
}

/// Closed form of `int exp(-a t^2 + b t) dt` over the real line, Re(a) > 0.
pub fn complex_gaussian_integral<T: Scalar>(a: C<T>, b: C<T>) -> Result<C<T>> {
    if !(a.re > T::zero()) {
        return Err(Error::InvalidParameter(
            "gaussian integral needs Re(a) > 0".into(),
        ));
    }
    let pi = cr(T::PI());
    Ok((pi / a).sqrt() * (b * b / a.scale(T::of(4.0))).exp())
}

/// Least-squares slope of y against x.
pub fn fit_slope<T: Scalar>(xs: &[T], ys: &[T]) -> T {
    assert_eq!(xs.len(), ys.len());
    let n = T::of_usize(xs.len());
    let sx = xs.iter().copied().fold(T::zero(), |a, b| a + b);
    let sy = ys.iter().copied().fold(T::zero(), |a, b| a + b);
    let sxx = xs.iter().map(|&x| x * x).fold(T::zero(), |a, b| a + b);
    let sxy = xs
        .iter()
        .zip(ys)
        .map(|(&x, &y)| x * y)
        .fold(T::zero(), |a, b| a + b);
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Neville extrapolation of (x_i, y_i) to x = 0. Returns the extrapolated
/// value and the magnitude of the last correction as a settle estimate.
pub fn neville_to_zero<T: Scalar>(xs: &[T], ys: &[C<T>]) -> (C<T>, T) {
    assert_eq!(xs.len(), ys.len());
    assert!(!xs.is_empty());
    let mut tab: Vec<C<T>> = ys.to_vec();
    let n = xs.len();
    let mut last = tab[n - 1];
    for level in 1..n {
        for i in 0..n - level {
            let xi = xs[i];
            let xj = xs[i + level];
            // P(0) of the interpolant through (xi..xj)
            tab[i] = (tab[i + 1].scale(xi) - tab[i].scale(xj)).unscale(xi - xj);
        }
        last = tab[0];
    }
    let spread = if n >= 2 { (last - tab[1]).norm() } else { T::zero() };
    (last, spread)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::c;

    #[test]
    fn gl_nodes_integrate_polynomials_exactly() {
        let (x, w) = gauss_legendre::<f64>(8);
        // degree 15 monomial: exact value 2/(k+1) for even k
        for k in [0usize, 2, 8, 14] {
            let got: f64 = x.iter().zip(&w).map(|(xi, wi)| wi * xi.powi(k as i32)).sum();
            let want = 2.0 / (k as f64 + 1.0);
            assert!((got - want).abs() < 1e-13, "k={k}: {got} vs {want}");
        }
    }

    #[test]
    fn composite_gaussian() {
        let v = integrate_gl(-8.0f64, 8.0, 16, 12, |t| cr((-t * t).exp()));
        assert!((v.re - std::f64::consts::PI.sqrt()).abs() < 1e-12);
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn gaussian_closed_form_matches_quadrature() {
        let a = c(0.7f64, 0.4);
        let b = c(0.3, -1.1);
        let exact = complex_gaussian_integral(a, b).unwrap();
        let num = integrate_gl(-30.0f64, 30.0, 64, 12, |t| {
            (-a.scale(t * t) + b.scale(t)).exp()
        });
        assert!((exact - num).norm() < 1e-10 * exact.norm());
    }

    #[test]
    fn neville_extrapolates_polynomial() {
        let xs = [0.04f64, 0.02, 0.01, 0.005];
        let ys: Vec<C<f64>> = xs.iter().map(|&x| c(2.0 + 3.0 * x - x * x, -x)).collect();
        let (v, spread) = neville_to_zero(&xs, &ys);
        assert!((v - c(2.0, 0.0)).norm() < 1e-12);
        assert!(spread < 1e-6);
    }
}
