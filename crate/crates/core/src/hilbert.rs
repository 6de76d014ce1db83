//! Rotor states in the truncated angular-momentum basis and on a periodic
//! angular grid, with fast Fourier transforms between the two pictures.
//!
//! Conventions, fixed globally: the grid lives on [-pi, pi) anchored at -pi
//! (so the singular point phi = pi of the wave functions in the stereographic
//! and Fock constructions sits at a grid boundary), and <phi|l> = e^{i l phi}.

use num_complex::Complex;
use rand::Rng;

use crate::error::{Error, Result};
use crate::fft::dft;
use crate::scalar::{cr, Scalar, C};

/// Angular-momentum cutoff: l runs over {-l_max, ..., +l_max}.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LTruncation {
    pub l_max: usize,
}

impl LTruncation {
    pub fn new(l_max: usize) -> Self {
        Self { l_max }
    }

    pub fn dim(&self) -> usize {
        2 * self.l_max + 1
    }

    pub fn contains(&self, l: i64) -> bool {
        l.unsigned_abs() as usize <= self.l_max
    }

    /// Storage index of quantum number l.
    pub fn index_of(&self, l: i64) -> usize {
        (l + self.l_max as i64) as usize
    }

    pub fn l_of_index(&self, idx: usize) -> i64 {
        idx as i64 - self.l_max as i64
    }

    pub fn l_values(&self) -> impl Iterator<Item = i64> {
        let l_max = self.l_max as i64;
        -l_max..=l_max
    }
}

/// A rotor state as amplitudes <l|psi> on a truncation.
#[derive(Debug, Clone, PartialEq)]
pub struct RotorState<T: Scalar> {
    pub trunc: LTruncation,
    pub coeffs: Vec<C<T>>,
}

impl<T: Scalar> RotorState<T> {
    pub fn from_coeffs(trunc: LTruncation, coeffs: Vec<C<T>>) -> Result<Self> {
        if coeffs.len() != trunc.dim() {
            return Err(Error::InvalidParameter(format!(
                "expected {} coefficients, got {}",
                trunc.dim(),
                coeffs.len()
            )));
        }
        if coeffs.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::InvalidParameter("non-finite amplitude".into()));
        }
        Ok(Self { trunc, coeffs })
    }

    /// Basis ket |l>.
    pub fn basis_ket(trunc: LTruncation, l: i64) -> Result<Self> {
        if !trunc.contains(l) {
            return Err(Error::InvalidParameter(format!("l = {l} outside truncation")));
        }
        let mut coeffs = vec![cr(T::zero()); trunc.dim()];
        coeffs[trunc.index_of(l)] = cr(T::one());
        Ok(Self { trunc, coeffs })
    }

    pub fn from_fn(trunc: LTruncation, f: impl Fn(i64) -> C<T>) -> Self {
        let coeffs = trunc.l_values().map(f).collect();
        Self { trunc, coeffs }
    }

    pub fn random_normalized<R: Rng>(trunc: LTruncation, rng: &mut R) -> Self {
        let coeffs: Vec<C<T>> = (0..trunc.dim())
            .map(|_| {
                Complex::new(
                    T::of(rng.gen_range(-1.0..1.0)),
                    T::of(rng.gen_range(-1.0..1.0)),
                )
            })
            .collect();
        let mut s = Self { trunc, coeffs };
        s.normalize();
        s
    }

    pub fn amplitude(&self, l: i64) -> C<T> {
        self.coeffs[self.trunc.index_of(l)]
    }

    pub fn norm2(&self) -> T {
        self.coeffs
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b)
    }

    pub fn normalize(&mut self) {
        let n = self.norm2().sqrt();
        if n > T::zero() {
            for z in &mut self.coeffs {
                *z = z.unscale(n);
            }
        }
    }

    pub fn is_normalized(&self) -> bool {
        (self.norm2() - T::one()).abs() < T::of(1e-12)
    }
}

/// Uniform periodic grid phi_k = -pi + 2 pi k / size, k = 0..size-1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct AngularGrid {
    pub size: usize,
}

impl AngularGrid {
    pub fn new(size: usize) -> Result<Self> {
        if size == 0 {
            return Err(Error::InvalidParameter("grid size must be positive".into()));
        }
        Ok(Self { size })
    }

    pub fn phi<T: Scalar>(&self, k: usize) -> T {
        -T::PI() + (T::PI() + T::PI()) * T::of_usize(k) / T::of_usize(self.size)
    }

    pub fn points<T: Scalar>(&self) -> Vec<T> {
        (0..self.size).map(|k| self.phi(k)).collect()
    }
}

/// Samples of <phi_k|psi> on an angular grid.
#[derive(Debug, Clone, PartialEq)]
pub struct PhiWaveFunction<T: Scalar> {
    pub grid: AngularGrid,
    pub samples: Vec<C<T>>,
}

impl<T: Scalar> PhiWaveFunction<T> {
    pub fn new(grid: AngularGrid, samples: Vec<C<T>>) -> Result<Self> {
        if samples.len() != grid.size {
            return Err(Error::InvalidParameter(format!(
                "expected {} samples, got {}",
                grid.size,
                samples.len()
            )));
        }
        Ok(Self { grid, samples })
    }

    pub fn norm2(&self) -> T {
        let raw = self
            .samples
            .iter()
            .map(|z| z.norm_sqr())
            .fold(T::zero(), |a, b| a + b);
        raw / T::of_usize(self.grid.size)
    }
}

/// Synthesizes `sum_l c_l e^{i l phi_k}` on the grid for arbitrary integer
/// frequencies, by folding each term into its residue bin and running one
/// inverse FFT: O(terms + G log G).
pub fn fourier_sum_on_grid<T: Scalar, I: IntoIterator<Item = (i64, C<T>)>>(
    terms: I,
    grid: AngularGrid,
) -> Vec<C<T>> {
    let g = grid.size as i64;
    let mut bins = vec![cr(T::zero()); grid.size];
    for (l, coeff) in terms {
        // e^{i l phi_k} = (-1)^l omega^{l k}; the sign is applied per term so
        // folding stays correct for every grid size
        let m = l.rem_euclid(g) as usize;
        let signed = if l.rem_euclid(2) == 0 { coeff } else { -coeff };
        bins[m] = bins[m] + signed;
    }
    dft(bins, true)
}

/// Angular wave function of a truncated state: psi(phi_k) = sum_l c_l e^{i l phi_k}.
pub fn l_to_phi<T: Scalar>(state: &RotorState<T>, grid: AngularGrid) -> Result<PhiWaveFunction<T>> {
    if grid.size < state.trunc.dim() {
        return Err(Error::Aliasing {
            grid: grid.size,
            l_max: state.trunc.l_max,
        });
    }
    let samples = fourier_sum_on_grid(
        state
            .trunc
            .l_values()
            .zip(state.coeffs.iter().copied()),
        grid,
    );
    PhiWaveFunction::new(grid, samples)
}

/// Result of projecting grid samples back onto a truncation, with the
/// discarded out-of-band weight reported rather than silently dropped.
#[derive(Debug, Clone)]
pub struct LProjection<T: Scalar> {
    pub state: RotorState<T>,
    /// Squared norm in bins outside [-l_max, l_max].
    pub out_of_band_norm2: T,
    pub total_norm2: T,
}

impl<T: Scalar> LProjection<T> {
    pub fn residual_ratio(&self) -> T {
        if self.total_norm2 > T::zero() {
            self.out_of_band_norm2 / self.total_norm2
        } else {
            T::zero()
        }
    }

    /// The projected state, provided the discarded weight stays below `tol`
    /// of the total.
    pub fn into_band_limited(self, tol: T) -> Result<RotorState<T>> {
        if self.residual_ratio() > tol {
            return Err(Error::NoConvergence(format!(
                "out-of-band weight {:e} of total",
                self.residual_ratio()
            )));
        }
        Ok(self.state)
    }
}

/// Analysis c_l = (1/G) sum_k psi(phi_k) e^{-i l phi_k}; exact on
/// band-limited input when G >= 2 l_max + 1.
pub fn phi_to_l<T: Scalar>(wf: &PhiWaveFunction<T>, trunc: LTruncation) -> LProjection<T> {
    let g = wf.grid.size;
    let spectrum = dft(wf.samples.clone(), false);
    let gf = T::of_usize(g);
    let mut kept = vec![false; g];
    let coeffs: Vec<C<T>> = trunc
        .l_values()
        .map(|l| {
            let m = l.rem_euclid(g as i64) as usize;
            kept[m] = true;
            let v = spectrum[m].unscale(gf);
            if l.rem_euclid(2) == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    let mut out = T::zero();
    let mut total = T::zero();
    for (m, z) in spectrum.iter().enumerate() {
        let w = z.unscale(gf).norm_sqr();
        total = total + w;
        if !kept.get(m).copied().unwrap_or(false) {
            out = out + w;
        }
    }
    LProjection {
        state: RotorState {
            trunc,
            coeffs,
        },
        out_of_band_norm2: out,
        total_norm2: total,
    }
}

/// <a|b> = sum_l conj(a_l) b_l.
pub fn inner_product<T: Scalar>(a: &RotorState<T>, b: &RotorState<T>) -> Result<C<T>> {
    if a.trunc != b.trunc {
        return Err(Error::TruncationMismatch(a.trunc.l_max, b.trunc.l_max));
    }
    Ok(a
        .coeffs
        .iter()
        .zip(&b.coeffs)
        .fold(cr(T::zero()), |acc, (x, y)| acc + x.conj() * *y))
}

/// Grid-side inner product (1/G) sum_k conj(psi_a) psi_b.
pub fn grid_inner_product<T: Scalar>(
    a: &PhiWaveFunction<T>,
    b: &PhiWaveFunction<T>,
) -> Result<C<T>> {
    if a.grid != b.grid {
        return Err(Error::InvalidParameter("grid mismatch".into()));
    }
    let acc = a
        .samples
        .iter()
        .zip(&b.samples)
        .fold(cr(T::zero()), |acc, (x, y)| acc + x.conj() * *y);
    Ok(acc.unscale(T::of_usize(a.grid.size)))
}

/// Norm table for a hypothetical ket with constant |<l|x>|^2 = mu: the
/// truncated <x|x> grows linearly with the number of retained l values,
/// which is the reason no third basis can be unbiased to both the l- and
/// the phi-basis.
pub fn third_basis_divergence_demo<T: Scalar>(l_max_list: &[usize], mu: T) -> Vec<(usize, T)> {
    l_max_list
        .iter()
        .map(|&l_max| (l_max, T::of_usize(2 * l_max + 1) * mu))
        .collect()
}
