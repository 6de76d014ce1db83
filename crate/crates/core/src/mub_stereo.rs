//! First continuous family of rotor bases, obtained from the rotated-line
//! wave functions through the stereographic substitution q = tan(phi/2).
//! The family keeps orthogonality, completeness, and the constant transition
//! probability 1/(2 pi |sin dtheta|); its price is a pole at phi = pi.

use num_complex::Complex;

use crate::error::{Error, Result};
use crate::quadrature::{complex_gaussian_integral, neville_to_zero, GlRule};
use crate::scalar::{c, ci, cr, dist_to_pi, lit, wrap_angle, Scalar, C};
use crate::special::{phi_line, phi_line_prefactor, LineBasisLabel};

/// Label (theta, y) of one element of the stereographic family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StereoMubLabel<T: Scalar> {
    theta: T,
    y: T,
}

impl<T: Scalar> StereoMubLabel<T> {
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

    fn line_label(&self) -> Result<LineBasisLabel<T>> {
        LineBasisLabel::new(self.theta, self.y)
    }
}

/// Half-width of the excluded neighborhood of phi = pi.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoleWindow<T: Scalar> {
    pub epsilon: T,
}

impl<T: Scalar> PoleWindow<T> {
    pub fn new(epsilon: T) -> Result<Self> {
        if !(epsilon > T::zero() && epsilon < T::FRAC_PI_4()) {
            return Err(Error::InvalidParameter(format!(
                "pole window must lie in (0, pi/4), got {epsilon}"
            )));
        }
        Ok(Self { epsilon })
    }

    pub fn excludes(&self, phi: T) -> bool {
        dist_to_pi(phi) < self.epsilon
    }
}

/// Stereographic projection phi = 2 arctan(q) of the line onto the circle
/// minus the point phi = pi.
pub fn stereo_map<T: Scalar>(q: T) -> T {
    let a = q.atan();
    a + a
}

/// Inverse q = tan(phi/2); undefined at the projection point phi = pi.
pub fn stereo_unmap<T: Scalar>(phi: T) -> Result<T> {
    let w = wrap_angle(phi);
    if dist_to_pi(w) < T::epsilon() * lit(4.0) {
        return Err(Error::PoleAtPi);
    }
    Ok((w * T::of(0.5)).tan())
}

/// 2 pi periodic wave function of the stereographic family,
/// Gamma_y^(theta)(phi) = sqrt(2 pi / (1 + cos phi)) Phi_y^(theta)(tan(phi/2)).
/// The angle is wrapped into [-pi, pi) first, so periodicity is exact.
pub fn gamma_wavefunction<T: Scalar>(label: &StereoMubLabel<T>, phi: T) -> Result<C<T>> {
    let w = wrap_angle(phi);
    if dist_to_pi(w) < T::epsilon() * lit(4.0) {
        return Err(Error::PoleAtPi);
    }
    let q = (w * T::of(0.5)).tan();
    let weight = ((T::PI() + T::PI()) / (T::one() + w.cos())).sqrt();
    Ok(phi_line(&label.line_label()?, q)?.scale(weight))
}

/// The theta = 0 element is the angle basis in disguise: element y is the
/// angle ket at phi0 = 2 arctan(y) carrying weight 1/sqrt(pi (1 + y^2)).
pub fn theta0_element<T: Scalar>(y: T) -> (T, T) {
    let phi0 = stereo_map(y);
    let amplitude = (T::PI() * (T::one() + y * y)).sqrt().recip();
    (phi0, amplitude)
}

/// Controls for the damped oscillatory overlap quadrature.
///
/// The raw overlap integrand conj(Phi_1) Phi_2 has unit modulus (a Fresnel
/// integral), so a Gaussian damping exp(-eps q^2) supplies the envelope that
/// sets the cutoff; the undamped value is recovered by extrapolating the
/// schedule eps -> 0.
#[derive(Debug, Clone)]
pub struct OverlapQuad<T: Scalar> {
    pub eps_schedule: Vec<T>,
    pub gl_order: usize,
    /// Radians of integrand phase per quadrature panel.
    pub phase_per_panel: T,
    /// exp(-tail_log) envelope truncation at the cutoff.
    pub tail_log: T,
    /// Extrapolation spread above this (relative) signals no convergence.
    pub settle_rel: T,
}

impl<T: Scalar> Default for OverlapQuad<T> {
    fn default() -> Self {
        Self {
            eps_schedule: vec![lit(0.04), lit(0.02), lit(0.01), lit(0.005), lit(0.0025)],
            gl_order: 16,
            phase_per_panel: lit(2.5),
            tail_log: lit(27.6),
            settle_rel: lit(2e-4),
        }
    }
}

/// Frequency data of the product integrand conj(Phi_1) Phi_2:
/// total phase theta(q) = (aq/2) q^2 + b q + const.
fn overlap_phase_coeffs<T: Scalar>(a: &StereoMubLabel<T>, b: &StereoMubLabel<T>) -> (T, T) {
    let aq = a.theta().tan().recip() - b.theta().tan().recip();
    let lin = b.y() / b.theta().sin() - a.y() / a.theta().sin();
    (aq, lin)
}

/// Overlap <theta1; y1 | theta2; y2> of two stereographic basis elements by
/// damped quadrature in the q variable. |result|^2 approaches
/// 1/(2 pi |sin(theta1 - theta2)|).
pub fn overlap_stereo<T: Scalar>(
    a: &StereoMubLabel<T>,
    b: &StereoMubLabel<T>,
    quad: &OverlapQuad<T>,
) -> Result<C<T>> {
    if a.theta() == T::zero() || b.theta() == T::zero() {
        return Err(Error::DegenerateTheta);
    }
    if (a.theta() - b.theta()).sin().abs() < lit(1e-12) {
        return Err(Error::DegenerateAngles);
    }
    let la = a.line_label()?;
    let lb = b.line_label()?;
    let (aq, lin) = overlap_phase_coeffs(a, b);
    // the integrand oscillates as exp(i(aq q^2/2 + lin q)); its stationary
    // point carries the integral, so the damping Gaussian must sit there
    let q_star = -lin / aq;
    let rule = GlRule::new(quad.gl_order);
    let mut vals = Vec::with_capacity(quad.eps_schedule.len());
    for &eps in &quad.eps_schedule {
        let cut = (quad.tail_log / eps).sqrt();
        let total_phase = aq.abs() * cut * cut + eps * cut * cut;
        let panels = (total_phase / quad.phase_per_panel)
            .ceil()
            .as_f64()
            .max(32.0) as usize;
        let v = rule.integrate_panels(q_star - cut, q_star + cut, panels, |q| {
            let d = q - q_star;
            phi_line(&la, q).unwrap().conj()
                * phi_line(&lb, q).unwrap()
                * cr((-eps * d * d).exp())
        });
        vals.push(v);
    }
    let (value, spread) = neville_to_zero(&quad.eps_schedule, &vals);
    if spread > quad.settle_rel * value.norm().max(lit(1e-3)) {
        return Err(Error::QuadratureNoConvergence(format!(
            "damping extrapolation spread {:e} on |I| = {:e}",
            spread,
            value.norm()
        )));
    }
    Ok(value)
}

/// The same overlap computed on the circle: integral over the pole-windowed
/// angle interval plus explicit stationary-phase endpoint corrections for
/// the excluded neighborhood, evaluated at each window and extrapolated in
/// the window size. Used to confirm the change-of-variables identity.
pub fn overlap_stereo_phi_route<T: Scalar>(
    a: &StereoMubLabel<T>,
    b: &StereoMubLabel<T>,
    windows: &[T],
    quad: &OverlapQuad<T>,
) -> Result<C<T>> {
    if a.theta() == T::zero() || b.theta() == T::zero() {
        return Err(Error::DegenerateTheta);
    }
    let la = a.line_label()?;
    let lb = b.line_label()?;
    let (aq, lin) = overlap_phase_coeffs(a, b);
    if aq.abs() < lit(1e-9) {
        return Err(Error::DegenerateAngles);
    }
    let rule = GlRule::new(8);
    let g_at = |q: T| -> C<T> { phi_line(&la, q).unwrap().conj() * phi_line(&lb, q).unwrap() };
    let mut best: Option<C<T>> = None;
    let mut prev: Option<C<T>> = None;
    let mut spread = T::zero();
    let mut ws: Vec<T> = windows.to_vec();
    ws.sort_by(|p, q| q.partial_cmp(p).unwrap());
    for &w in &ws {
        let cut = (w * T::of(0.5)).tan().recip(); // tan((pi-w)/2) = cot(w/2)
        // panels uniform in u = tan(phi/2): bounded phase per panel
        let panels = ((cut + cut) * (aq.abs() * cut + lin.abs()) / quad.phase_per_panel)
            .ceil()
            .as_f64()
            .max(64.0) as usize;
        let du = (cut + cut) / T::of_usize(panels);
        let mut acc = Complex::new(T::zero(), T::zero());
        for p in 0..panels {
            let u0 = -cut + du * T::of_usize(p);
            let phi0 = stereo_map(u0);
            let phi1 = stereo_map(u0 + du);
            acc = acc
                + rule.integrate(phi0, phi1, |phi| {
                    let q = (phi * T::of(0.5)).tan();
                    g_at(q).unscale(T::one() + phi.cos())
                });
        }
        // two integration-by-parts endpoint terms per excluded tail
        let theta_p = |q: T| aq * q + lin;
        let gp = g_at(cut);
        let gm = g_at(-cut);
        let tp = theta_p(cut);
        let tm = theta_p(-cut);
        let t_plus = -gp / ci(tp) + gp.scale(aq / (tp * tp * tp));
        let t_minus = gm / ci(tm) - gm.scale(aq / (tm * tm * tm));
        let total = acc + t_plus + t_minus;
        if let Some(p) = prev {
            spread = (total - p).norm();
        }
        prev = Some(total);
        best = Some(total);
    }
    let value = best.expect("at least one window");
    if spread > quad.settle_rel * value.norm().max(lit(1e-3)) * lit(10.0) {
        return Err(Error::QuadratureNoConvergence(format!(
            "window sequence spread {spread:e}"
        )));
    }
    Ok(value)
}

/// Smeared equal-theta orthogonality: the overlap of element y1 against a
/// Gaussian-weighted bundle of elements centered at y_center reproduces the
/// Gaussian weight at y1 exactly. The bundle integral over y is done in
/// closed form (one complex Gaussian), the remaining q integral numerically.
pub fn smeared_same_theta_overlap<T: Scalar>(
    theta: T,
    y1: T,
    y_center: T,
    sigma: T,
    gl_order: usize,
) -> Result<C<T>> {
    if theta == T::zero() {
        return Err(Error::DegenerateTheta);
    }
    let la = LineBasisLabel::new(theta, y1)?;
    let s = theta.sin();
    let u = theta.cos() / s;
    let inv_k = s; // 1/k
    let k = inv_k.recip();
    let a_c = c(
        (sigma * sigma * lit::<T>(2.0)).recip(),
        u * T::of(0.5),
    );
    let pref = phi_line_prefactor(theta);
    let gauss_const = cr((-y_center * y_center / (sigma * sigma * lit::<T>(2.0))).exp());
    let h = |q: T| -> Result<C<T>> {
        let b_lin = c(y_center / (sigma * sigma), q * k);
        Ok(pref
            * (ci(-u * q * q * T::of(0.5))).exp()
            * gauss_const
            * complex_gaussian_integral(a_c, b_lin)?)
    };
    // envelope of the product integrand, for the cutoff
    let alpha_re = -(k * k) * (a_c.inv().re) * T::of(0.25);
    let cut = (lit::<T>(30.0) / -alpha_re).sqrt() + y1.abs() + y_center.abs();
    let rule = GlRule::new(gl_order);
    let panels = (cut.as_f64() * (1.0 + u.abs().as_f64() * cut.as_f64()) / 2.0).ceil() as usize;
    let mut err: Option<Error> = None;
    let v = rule.integrate_panels(-cut, cut, panels.max(200), |q| {
        match (phi_line(&la, q), h(q)) {
            (Ok(p), Ok(hv)) => p.conj() * hv,
            (Err(e), _) | (_, Err(e)) => {
                err = Some(e);
                Complex::new(T::zero(), T::zero())
            }
        }
    });
    if let Some(e) = err {
        return Err(e);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn stereo_map_spot_values() {
        assert_eq!(stereo_map(0.0f64), 0.0);
        assert!((stereo_map(1.0f64) - PI / 2.0).abs() < 1e-15);
        assert!(matches!(stereo_unmap(PI), Err(Error::PoleAtPi)));
        assert!(matches!(stereo_unmap(-PI), Err(Error::PoleAtPi)));
        for k in 0..40 {
            let phi = -3.0 + 6.0 * k as f64 / 39.0;
            let q = stereo_unmap(phi).unwrap();
            assert!((stereo_map(q) - phi).abs() < 1e-15, "phi={phi}");
        }
    }

    #[test]
    fn gamma_is_weighted_line_wave_function() {
        let label = StereoMubLabel::new(1.1f64, 0.6).unwrap();
        let line = LineBasisLabel::new(1.1f64, 0.6).unwrap();
        for phi in [-2.8, -0.4, 0.0, 1.9, 2.9] {
            let g = gamma_wavefunction(&label, phi).unwrap();
            let q = (phi / 2.0).tan();
            let direct = phi_line(&line, q).unwrap();
            // |Gamma|^2 (1+cos phi)/(2 pi) = |Phi(tan(phi/2))|^2
            let lhs = g.norm_sqr() * (1.0 + phi.cos()) / (2.0 * PI);
            assert!((lhs - direct.norm_sqr()).abs() < 1e-15);
        }
    }

    #[test]
    fn gamma_modulus_at_quarter_rotation() {
        let label = StereoMubLabel::new(PI / 2.0, 0.0f64).unwrap();
        for phi in [-2.0, 0.0, 1.0, 2.5] {
            let g = gamma_wavefunction(&label, phi).unwrap();
            let want = 1.0 / (1.0 + phi.cos());
            assert!((g.norm_sqr() - want).abs() < 1e-13 * want);
        }
    }

    #[test]
    fn gamma_pole_and_degeneracy_errors() {
        let label = StereoMubLabel::new(1.0f64, 0.0).unwrap();
        assert!(matches!(gamma_wavefunction(&label, PI), Err(Error::PoleAtPi)));
        let zero = StereoMubLabel::new(0.0f64, 0.0).unwrap();
        assert!(matches!(
            gamma_wavefunction(&zero, 0.3),
            Err(Error::DegenerateTheta)
        ));
    }

    #[test]
    fn gamma_periodicity_exact() {
        let label = StereoMubLabel::new(0.7f64, -1.3).unwrap();
        for phi in [-2.0, 0.3, 1.9] {
            let a = gamma_wavefunction(&label, phi).unwrap();
            let b = gamma_wavefunction(&label, phi + 2.0 * PI).unwrap();
            // the internal wrap makes this exact up to angle-wrap rounding
            assert!((a - b).norm() < 1e-13);
        }
    }

    #[test]
    fn gamma_diverges_with_exponent_minus_half() {
        let label = StereoMubLabel::new(1.3f64, 0.4).unwrap();
        let mut xs = Vec::new();
        let mut ys = Vec::new();
        for k in 0..8 {
            let delta = 0.4 * 0.7f64.powi(k);
            let phi = PI - delta;
            xs.push((1.0 + phi.cos()).ln());
            ys.push(gamma_wavefunction(&label, phi).unwrap().norm().ln());
        }
        let slope = crate::quadrature::fit_slope(&xs, &ys);
        assert!((slope + 0.5).abs() < 1e-6, "slope {slope}");
    }

    #[test]
    fn theta0_element_values() {
        let (phi0, amp) = theta0_element(0.0f64);
        assert_eq!(phi0, 0.0);
        assert!((amp - 1.0 / PI.sqrt()).abs() < 1e-15);
        let (phi0, amp) = theta0_element(1.0f64);
        assert!((phi0 - PI / 2.0).abs() < 1e-15);
        assert!((amp - 1.0 / (2.0 * PI).sqrt()).abs() < 1e-15);
        let (phi0, amp) = theta0_element(1e8f64);
        assert!(phi0 < PI && phi0 > PI - 1e-7);
        assert!(amp < 1e-7);
    }

    #[test]
    fn overlap_reproduces_unbiasedness_constant() {
        let quad = OverlapQuad::default();
        // dtheta = pi/2
        let a = StereoMubLabel::new(0.4f64, 0.7).unwrap();
        let b = StereoMubLabel::new(0.4 + PI / 2.0, -1.2).unwrap();
        let v = overlap_stereo(&a, &b, &quad).unwrap();
        let want = 1.0 / (2.0 * PI);
        assert!(
            (v.norm_sqr() - want).abs() < 2e-6 * want,
            "got {} want {want}",
            v.norm_sqr()
        );
        // dtheta = pi/4
        let b = StereoMubLabel::new(0.4 + PI / 4.0, 0.3).unwrap();
        let v = overlap_stereo(&a, &b, &quad).unwrap();
        let want = 1.0 / (2.0 * PI * (PI / 4.0).sin());
        assert!((v.norm_sqr() - want).abs() < 2e-6 * want);
    }

    #[test]
    fn overlap_rejects_equal_theta() {
        let quad = OverlapQuad::default();
        let a = StereoMubLabel::new(0.9f64, 0.0).unwrap();
        let b = StereoMubLabel::new(0.9f64, 1.0).unwrap();
        assert!(matches!(
            overlap_stereo(&a, &b, &quad),
            Err(Error::DegenerateAngles)
        ));
    }

    #[test]
    fn phi_route_matches_q_route() {
        let quad = OverlapQuad::default();
        let a = StereoMubLabel::new(0.9f64, 0.5).unwrap();
        let b = StereoMubLabel::new(1.9f64, -0.8).unwrap();
        let vq = overlap_stereo(&a, &b, &quad).unwrap();
        let vphi = overlap_stereo_phi_route(&a, &b, &[0.1, 0.05, 0.025], &quad).unwrap();
        assert!(
            (vq - vphi).norm() < 1e-5 * vq.norm(),
            "q-route {vq}, phi-route {vphi}, rel {:e}",
            (vq - vphi).norm() / vq.norm()
        );
    }

    #[test]
    fn smeared_orthogonality_reproduces_gaussian() {
        let theta = 1.2f64;
        let yc = 0.4;
        let sigma = 0.35;
        for y1 in [0.4, 0.9, -0.3] {
            let got = smeared_same_theta_overlap(theta, y1, yc, sigma, 12).unwrap();
            let want = (-(y1 - yc) * (y1 - yc) / (2.0 * sigma * sigma)).exp();
            assert!(
                (got - cr(want)).norm() < 1e-6,
                "y1={y1}: got {got}, want {want}"
            );
        }
    }

    #[test]
    fn pole_window_validation() {
        assert!(PoleWindow::new(0.05f64).is_ok());
        assert!(PoleWindow::new(0.0f64).is_err());
        assert!(PoleWindow::new(1.0f64).is_err());
        let w = PoleWindow::new(0.05f64).unwrap();
        assert!(w.excludes(PI - 0.01));
        assert!(w.excludes(-PI + 0.01));
        assert!(!w.excludes(0.0));
    }
}
