//! Hermite-Gauss functions, the resummed oscillator kernel, sinc, and the
//! quadratic complex Gaussian wave functions of the rotated line bases.
//!
//! Everything here is pure and deterministic; values are safe to share
//! across threads and to sweep in parallel.


use crate::error::{Error, Result};
use crate::scalar::{c, cr, lit, Scalar, C};

/// Soft cap on the Hermite order; above this the recurrence still runs but
/// asymptotic regimes are out of scope.
pub const HERMITE_ORDER_CAP: usize = 10_000;

/// Label (theta, y) of one element of a rotated-line basis: `theta` in
/// [0, pi) picks the basis, real `y` the element.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineBasisLabel<T: Scalar> {
    theta: T,
    y: T,
}

impl<T: Scalar> LineBasisLabel<T> {
    pub fn new(theta: T, y: T) -> Result<Self> {
        if !(theta >= T::zero() && theta < T::PI()) || !theta.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "theta must lie in [0, pi), got {theta}"
            )));
        }
        if !y.is_finite() {
            return Err(Error::InvalidParameter("y must be finite".into()));
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

/// Scaled running pair (f_{n-1}, f_n) with a shared power-of-two exponent.
/// Keeps the normalized recurrence finite through the deep Gaussian tail,
/// where plain f64 would underflow long before the oscillatory region.
struct HermiteRecurrence<T: Scalar> {
    q: T,
    prev: T,
    curr: T,
    exp2: i64,
    n: usize,
}

impl<T: Scalar> HermiteRecurrence<T> {
    fn new(q: T) -> Self {
        // f_0 = pi^{-1/4} exp(-q^2/2), carried as mantissa * 2^exp2
        let s = -q * q / (T::LN_2() + T::LN_2());
        let e = s.floor();
        let mantissa = lit::<T>(std::f64::consts::PI.powf(-0.25)) * (s - e).exp2();
        Self {
            q,
            prev: T::zero(),
            curr: mantissa,
            exp2: e.as_f64() as i64,
            n: 0,
        }
    }

    /// f_n as an ordinary scalar (0.0 on genuine underflow).
    fn value(&self) -> T {
        self.curr * T::of_i64(self.exp2).exp2()
    }

    fn step(&mut self) {
        let n1 = T::of_usize(self.n + 1);
        let next = (lit::<T>(2.0) / n1).sqrt() * self.q * self.curr
            - (T::of_usize(self.n) / n1).sqrt() * self.prev;
        self.prev = self.curr;
        self.curr = next;
        self.n += 1;
        let mag = self.curr.abs().max(self.prev.abs());
        if mag != T::zero() && mag < lit(1e-290) {
            let boost = lit::<T>(960.0).exp2();
            self.curr = self.curr * boost;
            self.prev = self.prev * boost;
            self.exp2 -= 960;
        } else if mag > lit(1e290) {
            let shrink = lit::<T>(-960.0).exp2();
            self.curr = self.curr * shrink;
            self.prev = self.prev * shrink;
            self.exp2 += 960;
        }
    }
}

/// Normalized Hermite-Gauss function f_n(q), the position wave function of
/// the n-th oscillator number state. Computed by the stable three-term
/// recurrence on the normalized functions, never through raw Hermite
/// polynomials times factorials.
pub fn hermite_fn<T: Scalar>(n: usize, q: T) -> T {
    let mut rec = HermiteRecurrence::new(q);
    for _ in 0..n {
        rec.step();
    }
    rec.value()
}

/// f_0(q), ..., f_{n_max}(q) in one pass.
pub fn hermite_seq<T: Scalar>(n_max: usize, q: T) -> Vec<T> {
    let mut rec = HermiteRecurrence::new(q);
    let mut out = Vec::with_capacity(n_max + 1);
    out.push(rec.value());
    for _ in 0..n_max {
        rec.step();
        out.push(rec.value());
    }
    out
}

/// Closed form of the generating sum `sum_n w^n f_n(x) f_n(y)` for |w| <= 1,
/// w != +-1:
///
///   K_w(x, y) = exp( (4xyw - (x^2+y^2)(1+w^2)) / (2(1-w^2)) ) / sqrt(pi(1-w^2))
///
/// with the principal branch of the square root. On the unit circle
/// w = e^{i dth} the modulus is constant, |K|^2 = 1/(2 pi |sin dth|).
pub fn mehler_kernel<T: Scalar>(w: C<T>, x: T, y: T) -> Result<C<T>> {
    let one = T::one();
    let eps = T::epsilon() * lit(8.0);
    if (w - cr(one)).norm() < eps || (w + cr(one)).norm() < eps {
        return Err(Error::MehlerDomain);
    }
    if w.norm() > one + eps * lit(4.0) {
        return Err(Error::MehlerDomain);
    }
    let w2 = w * w;
    let denom = cr(one) - w2;
    let num = w.scale(lit::<T>(4.0) * x * y) - (cr(one) + w2).scale(x * x + y * y);
    let z = num / denom.scale(lit(2.0));
    Ok(z.exp() / (denom.scale(T::PI())).sqrt())
}

/// sin(x)/x with the removable singularity filled by its series.
pub fn sinc<T: Scalar>(x: T) -> T {
    if x.abs() < lit(1e-2) {
        let x2 = x * x;
        T::one() - x2 / lit(6.0) + x2 * x2 / lit(120.0) - x2 * x2 * x2 / lit(5040.0)
    } else {
        x.sin() / x
    }
}

/// Prefactor 1/sqrt(pi (1 - e^{2 i theta})), principal branch. The quantity
/// 1 - e^{2 i theta} is formed as (2 sin^2 theta, -sin 2theta) to avoid
/// cancellation at small theta.
pub(crate) fn phi_line_prefactor<T: Scalar>(theta: T) -> C<T> {
    let s = theta.sin();
    let one_minus_e2i = c(s * s + s * s, -(theta + theta).sin());
    (one_minus_e2i.scale(T::PI())).sqrt().inv()
}

/// Wave function of the rotated-line basis element (theta, y) at position q:
///
///   Phi_y^(theta)(q) = exp(i q y / sin th - (i/2)(q^2+y^2)/tan th)
///                      / sqrt(pi (1 - e^{2 i theta}))
///
/// Degenerates at theta = 0 (the basis collapses onto position kets); the
/// rotor layer handles that case separately.
pub fn phi_line<T: Scalar>(label: &LineBasisLabel<T>, q: T) -> Result<C<T>> {
    let theta = label.theta();
    let y = label.y();
    if theta == T::zero() {
        return Err(Error::DegenerateTheta);
    }
    let s = theta.sin();
    let t = theta.tan();
    let phase = q * y / s - (q * q + y * y) / (t + t);
    Ok(phi_line_prefactor(theta) * c(phase.cos(), phase.sin()))
}
