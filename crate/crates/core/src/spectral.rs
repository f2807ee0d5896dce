//! FFT plumbing shared by the coefficient and summation code.

use num_complex::Complex64;
use rustfft::FftPlanner;

/// Unnormalised forward DFT: `X_k = Σ_j x_j e^{-2πijk/m}`.
pub(crate) fn forward(values: &[Complex64]) -> Vec<Complex64> {
    let mut buf = values.to_vec();
    if !buf.is_empty() {
        FftPlanner::new().plan_fft_forward(buf.len()).process(&mut buf);
    }
    buf
}

/// Unnormalised inverse DFT: `x_j = Σ_k X_k e^{2πijk/m}`.
pub(crate) fn inverse(spectrum: &[Complex64]) -> Vec<Complex64> {
    let mut buf = spectrum.to_vec();
    if !buf.is_empty() {
        FftPlanner::new().plan_fft_inverse(buf.len()).process(&mut buf);
    }
    buf
}

/// Values `Σ_{|k|≤N} c_k e^{iks_j}` on the uniform grid `s_j = 2πj/m`, for
/// `coeffs` indexed `-N..=N`. Requires `m ≥ 2N + 1`.
pub(crate) fn synthesize(coeffs: &[Complex64], m: usize) -> Vec<Complex64> {
    let degree = coeffs.len() / 2;
    debug_assert!(m > 2 * degree);
    let mut spectrum = vec![Complex64::new(0.0, 0.0); m];
    for (i, &c) in coeffs.iter().enumerate() {
        let k = i as isize - degree as isize;
        spectrum[k.rem_euclid(m as isize) as usize] = c;
    }
    inverse(&spectrum)
}

/// `Σ_{k=-N}^{N} c_k e^{iks}`: compensated Horner in `z` for `k ≥ 0` and in
/// `z̄` for `k < 0`, so no phase factor of large argument is formed.
pub(crate) fn laurent_eval(coeffs: &[Complex64], s: f64) -> Complex64 {
    let degree = coeffs.len() / 2;
    let z = Complex64::from_polar(1.0, s);
    let positive = compensated_horner(coeffs[degree..].iter().rev(), z);
    let negative = compensated_horner(coeffs[..degree].iter().chain([&Complex64::new(0.0, 0.0)]), z.conj());
    positive + negative
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bb = s - a;
    (s, (a - (s - bb)) + (b - bb))
}

fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

/// `Σ c_j z^{d-j}` for coefficients given from the highest power down, with
/// the rounding error of every step carried in a second accumulator.
fn compensated_horner<'a>(coeffs: impl Iterator<Item = &'a Complex64>, z: Complex64) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    let mut err = Complex64::new(0.0, 0.0);
    for c in coeffs {
        let (p1, e1) = two_prod(acc.re, z.re);
        let (p2, e2) = two_prod(-acc.im, z.im);
        let (p3, e3) = two_prod(acc.re, z.im);
        let (p4, e4) = two_prod(acc.im, z.re);
        let (re, e5) = two_sum(p1, p2);
        let (im, e6) = two_sum(p3, p4);
        let (re, e7) = two_sum(re, c.re);
        let (im, e8) = two_sum(im, c.im);
        err = err * z + Complex64::new(e1 + e2 + e5 + e7, e3 + e4 + e6 + e8);
        acc = Complex64::new(re, im);
    }
    acc + err
}
