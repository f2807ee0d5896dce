//! Discrete best uniform approximation by real trigonometric polynomials.
//!
//! Multi-point Remez exchange on a uniform grid. Each step solves the levelled
//! system `T(x_i) + (-1)^i h = F(x_i)` on a reference of `2n + 2` grid points,
//! then moves the reference to the alternating extrema of the new error curve.
//! Every step brackets the discrete minimax value between the smallest error
//! magnitude on an alternating reference and the largest error on the grid.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::grid_point;
use crate::spectral;

pub(crate) const MAX_ITERATIONS: usize = 100;
const RELATIVE_GAP: f64 = 1e-6;
const ABSOLUTE_GAP: f64 = 1e-12;

/// Discrete minimax value with the bracket that certified it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BestApproximation {
    /// Uniform error of the best polynomial found on the grid.
    pub value: f64,
    /// Lower end of the bracket; a lower bound for the discrete minimax.
    pub lower: f64,
    pub degree: usize,
    pub grid: usize,
    pub iterations: usize,
}

/// Discrete minimax of degree `degree` for real samples on the uniform grid.
pub(crate) fn discrete_minimax(values: &[f64], degree: usize) -> Result<BestApproximation> {
    let g = values.len();
    let r = 2 * degree + 2;
    if g < r {
        return Err(Error::GridTooSmall { grid: g, required: r });
    }
    let (mut lower, mut upper) = (0.0f64, f64::INFINITY);
    // The truncation error is orthogonal to every polynomial of the degree and
    // changes sign at least 2n + 2 times, so its extrema seed the exchange.
    let truncation = truncation_error(values, degree);
    let peak = truncation.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
    if peak <= ABSOLUTE_GAP {
        return Ok(BestApproximation {
            value: peak,
            lower: 0.0,
            degree,
            grid: g,
            iterations: 0,
        });
    }
    let mut reference = alternating_extrema(&truncation, r).unwrap_or_else(|| {
        // offset by a fraction of a cell to break symmetries of the samples
        (0..r).map(|i| (2 * i + 1) * g / (2 * r) % g).collect()
    });
    for iteration in 1..=MAX_ITERATIONS {
        let (coeffs, level) = solve_levelled(values, &reference, degree).ok_or(Error::ExchangeNotConverged {
            lower,
            upper,
            iterations: iteration,
        })?;
        let fit = spectral::synthesize(&coeffs, g);
        let error: Vec<f64> = values.iter().zip(&fit).map(|(v, t)| v - t.re).collect();
        let peak = error.iter().fold(0.0f64, |acc, e| acc.max(e.abs()));
        upper = upper.min(peak);
        lower = lower.max(level.abs());

        let next = alternating_extrema(&error, r);
        if let Some(next) = &next {
            let floor = next.iter().map(|&j| error[j].abs()).fold(f64::INFINITY, f64::min);
            lower = lower.max(floor.min(upper));
        }
        let gap = upper - lower;
        if gap <= RELATIVE_GAP * upper || gap <= ABSOLUTE_GAP {
            return Ok(BestApproximation {
                value: upper,
                lower,
                degree,
                grid: g,
                iterations: iteration,
            });
        }
        match next {
            Some(next) if next != reference => reference = next,
            _ => {
                return Err(Error::ExchangeNotConverged {
                    lower,
                    upper,
                    iterations: iteration,
                })
            }
        }
    }
    Err(Error::ExchangeNotConverged {
        lower,
        upper,
        iterations: MAX_ITERATIONS,
    })
}

/// `F - S_n F` on the grid, `S_n` the discrete Fourier truncation.
fn truncation_error(values: &[f64], degree: usize) -> Vec<f64> {
    let g = values.len();
    let samples: Vec<Complex64> = values.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let spectrum = spectral::forward(&samples);
    let scale = 1.0 / g as f64;
    let coeffs: Vec<Complex64> = (-(degree as isize)..=degree as isize)
        .map(|k| spectrum[k.rem_euclid(g as isize) as usize] * scale)
        .collect();
    let fit = spectral::synthesize(&coeffs, g);
    values.iter().zip(&fit).map(|(v, t)| v - t.re).collect()
}

/// Solve for `T = a_0 + Σ a_k cos kx + b_k sin kx` and the level `h`; returns
/// `T` as exponential coefficients indexed `-n..=n`.
fn solve_levelled(values: &[f64], reference: &[usize], degree: usize) -> Option<(Vec<Complex64>, f64)> {
    let g = values.len();
    let r = reference.len();
    let mut matrix = DMatrix::<f64>::zeros(r, r);
    let mut rhs = DVector::<f64>::zeros(r);
    for (i, &j) in reference.iter().enumerate() {
        let x = grid_point(j, g);
        matrix[(i, 0)] = 1.0;
        for k in 1..=degree {
            let (s, c) = (k as f64 * x).sin_cos();
            matrix[(i, k)] = c;
            matrix[(i, degree + k)] = s;
        }
        matrix[(i, r - 1)] = if i % 2 == 0 { 1.0 } else { -1.0 };
        rhs[i] = values[j];
    }
    let solution = matrix.lu().solve(&rhs)?;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * degree + 1];
    coeffs[degree] = Complex64::new(solution[0], 0.0);
    for k in 1..=degree {
        let c = Complex64::new(solution[k], -solution[degree + k]) * 0.5;
        coeffs[degree + k] = c;
        coeffs[degree - k] = c.conj();
    }
    Some((coeffs, solution[r - 1]))
}

/// One extremum per same-sign run of the cyclic error curve, thinned to `r`
/// points while keeping the global maximum and the alternation.
fn alternating_extrema(error: &[f64], r: usize) -> Option<Vec<usize>> {
    let positive = |j: usize| error[j] >= 0.0;
    let mut peaks: Vec<usize> = Vec::new();
    for j in 0..error.len() {
        match peaks.last_mut() {
            Some(last) if positive(*last) == positive(j) => {
                if error[j].abs() > error[*last].abs() {
                    *last = j;
                }
            }
            _ => peaks.push(j),
        }
    }
    if peaks.len() > 1 && positive(peaks[0]) == positive(*peaks.last()?) {
        let last = peaks.pop()?;
        if error[last].abs() > error[peaks[0]].abs() {
            peaks.remove(0);
            peaks.push(last);
        }
    }
    if peaks.len() < r {
        return None;
    }
    while peaks.len() > r {
        let len = peaks.len();
        let weakest = (0..len)
            .min_by(|&p, &q| error[peaks[p]].abs().total_cmp(&error[peaks[q]].abs()))?;
        let (before, after) = ((weakest + len - 1) % len, (weakest + 1) % len);
        let loser = if error[peaks[before]].abs() >= error[peaks[after]].abs() {
            after
        } else {
            before
        };
        let mut drop = [weakest, loser];
        drop.sort_unstable();
        peaks.remove(drop[1]);
        peaks.remove(drop[0]);
    }
    peaks.sort_unstable();
    Some(peaks)
}
