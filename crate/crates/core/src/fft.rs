//! Generic complex FFT: iterative radix-2 for power-of-two lengths, Bluestein
//! chirp transform otherwise. Unnormalized in both directions.

use crate::scalar::{Scalar, C};
use num_complex::Complex;

/// Discrete Fourier transform of `x`.
///
/// Forward: `X[k] = sum_j x[j] exp(-2 pi i j k / n)`;
/// inverse (`inverse = true`): same with `+` in the exponent. Neither
/// direction divides by `n`.
pub fn dft<T: Scalar>(mut x: Vec<C<T>>, inverse: bool) -> Vec<C<T>> {
    let n = x.len();
    if n <= 1 {
        return x;
    }
    if n.is_power_of_two() {
        fft_pow2(&mut x, inverse);
        x
    } else {
        bluestein(&x, inverse)
    }
}

fn fft_pow2<T: Scalar>(x: &mut [C<T>], inverse: bool) {
    let n = x.len();
    // bit-reversal permutation
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            x.swap(i, j);
        }
    }
    // twiddle table exp(sign * 2 pi i k / n), k < n/2
    let sign = if inverse { T::one() } else { -T::one() };
    let two_pi = T::PI() + T::PI();
    let tw: Vec<C<T>> = (0..n / 2)
        .map(|k| {
            let ang = sign * two_pi * T::of_usize(k) / T::of_usize(n);
            Complex::new(ang.cos(), ang.sin())
        })
        .collect();
    let mut len = 2;
    while len <= n {
        let half = len / 2;
        let stride = n / len;
        let mut start = 0;
        while start < n {
            for k in 0..half {
                let w = tw[k * stride];
                let u = x[start + k];
                let v = x[start + k + half] * w;
                x[start + k] = u + v;
                x[start + k + half] = u - v;
            }
            start += len;
        }
        len <<= 1;
    }
}

/// Chirp exp(sign * i pi j^2 / n), with j^2 reduced mod 2n so the angle stays
/// accurate for large j.
fn chirp<T: Scalar>(j: usize, n: usize, sign: T) -> C<T> {
    let j2 = ((j as u64) * (j as u64)) % (2 * n as u64);
    let ang = sign * T::PI() * T::of(j2 as f64) / T::of_usize(n);
    Complex::new(ang.cos(), ang.sin())
}

fn bluestein<T: Scalar>(x: &[C<T>], inverse: bool) -> Vec<C<T>> {
    if inverse {
        let conj_in: Vec<C<T>> = x.iter().map(|z| z.conj()).collect();
        return bluestein(&conj_in, false).into_iter().map(|z| z.conj()).collect();
    }
    let n = x.len();
    let m = (2 * n - 1).next_power_of_two();
    let minus = -T::one();
    let plus = T::one();
    let mut a = vec![Complex::new(T::zero(), T::zero()); m];
    for j in 0..n {
        a[j] = x[j] * chirp(j, n, minus);
    }
    let mut b = vec![Complex::new(T::zero(), T::zero()); m];
    for j in 0..n {
        let v = chirp(j, n, plus);
        b[j] = v;
        if j != 0 {
            b[m - j] = v;
        }
    }
    fft_pow2(&mut a, false);
    fft_pow2(&mut b, false);
    for k in 0..m {
        a[k] = a[k] * b[k];
    }
    fft_pow2(&mut a, true);
    let scale = T::of_usize(m).recip();
    (0..n)
        .map(|k| a[k].scale(scale) * chirp(k, n, minus))
        .collect()
}
