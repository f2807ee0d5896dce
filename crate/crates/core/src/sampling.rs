//! Uniform periodic grids, the weighted inner product and nonlinear Fourier
//! coefficients.
//!
//! Coefficients are computed in the phase variable: with `F = f ∘ θ_a^{-1}`,
//! `c_k = (1/2π) ∫ F(s) e^{-iks} ds`, which the uniform `s`-grid turns into a
//! plain DFT. The weighted `x`-grid quadrature of the same integral is what
//! [`inner_product`] computes.

use std::sync::Arc;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::phase::{grid_point, MoebiusParameter};
use crate::spectral;

/// A shareable closed-form function of one angle.
pub type Evaluator = Arc<dyn Fn(f64) -> Complex64 + Send + Sync>;

/// Smallest grid accepted by [`SampledFunction`].
pub const MIN_GRID: usize = 4;

/// Samples `f(2πj/M)`, `j = 0..M`, optionally backed by an evaluator for
/// resampling at arbitrary points.
#[derive(Clone)]
pub struct SampledFunction {
    values: Vec<Complex64>,
    evaluator: Option<Evaluator>,
}

impl std::fmt::Debug for SampledFunction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SampledFunction")
            .field("grid_size", &self.values.len())
            .field("has_evaluator", &self.evaluator.is_some())
            .finish()
    }
}

impl SampledFunction {
    pub fn from_values(values: Vec<Complex64>) -> Result<Self> {
        if values.len() < MIN_GRID {
            return Err(Error::GridTooSmall {
                grid: values.len(),
                required: MIN_GRID,
            });
        }
        Ok(Self {
            values,
            evaluator: None,
        })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::from_values(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Sample `f` on `m` points without keeping a handle to it.
    pub fn from_fn(m: usize, f: impl Fn(f64) -> Complex64) -> Result<Self> {
        Self::from_values((0..m).map(|j| f(grid_point(j, m))).collect())
    }

    /// Sample an evaluator and keep it for off-grid evaluation.
    pub fn from_evaluator(m: usize, f: Evaluator) -> Result<Self> {
        let mut sampled = Self::from_fn(m, |x| f(x))?;
        sampled.evaluator = Some(f);
        Ok(sampled)
    }

    pub fn grid_size(&self) -> usize {
        self.values.len()
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn evaluator(&self) -> Option<&Evaluator> {
        self.evaluator.as_ref()
    }

    /// True when every sample has zero imaginary part.
    pub fn is_real(&self) -> bool {
        self.values.iter().all(|v| v.im == 0.0)
    }

    /// Discrete uniform norm `max_j |f(x_j)|`.
    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Pointwise difference; both operands must share the grid.
    pub fn difference(&self, other: &SampledFunction) -> Result<SampledFunction> {
        check_grids(self, other)?;
        Self::from_values(
            self.values
                .iter()
                .zip(&other.values)
                .map(|(a, b)| a - b)
                .collect(),
        )
    }
}

fn check_grids(f: &SampledFunction, g: &SampledFunction) -> Result<()> {
    if f.grid_size() != g.grid_size() {
        return Err(Error::GridMismatch {
            left: f.grid_size(),
            right: g.grid_size(),
        });
    }
    Ok(())
}

/// Nonlinear Fourier coefficients `c_k^a`, `k = -N..=N`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientVector {
    param: MoebiusParameter,
    coeffs: Vec<Complex64>,
}

impl CoefficientVector {
    pub fn new(param: MoebiusParameter, coeffs: Vec<Complex64>) -> Result<Self> {
        if coeffs.len().is_multiple_of(2) {
            return Err(Error::InvalidArgument(format!(
                "coefficient vector must have odd length 2N+1, got {}",
                coeffs.len()
            )));
        }
        Ok(Self { param, coeffs })
    }

    pub fn zeros(param: MoebiusParameter, degree: usize) -> Self {
        Self {
            param,
            coeffs: vec![Complex64::new(0.0, 0.0); 2 * degree + 1],
        }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() / 2
    }

    pub fn param(&self) -> &MoebiusParameter {
        &self.param
    }

    /// Coefficients in index order `k = -N..=N`.
    pub fn as_slice(&self) -> &[Complex64] {
        &self.coeffs
    }

    /// `c_k`, or zero outside `|k| ≤ N`.
    pub fn get(&self, k: isize) -> Complex64 {
        let n = self.degree() as isize;
        if k.abs() > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    pub fn set(&mut self, k: isize, value: Complex64) {
        let n = self.degree() as isize;
        assert!(k.abs() <= n, "index {k} outside degree {n}");
        self.coeffs[(k + n) as usize] = value;
    }

    /// Coefficients restricted to `|k| ≤ n`, each scaled by `weight(|k|)`.
    pub(crate) fn weighted(&self, n: usize, weight: impl Fn(usize) -> f64) -> Vec<Complex64> {
        let degree = self.degree();
        debug_assert!(n <= degree);
        self.coeffs[degree - n..=degree + n]
            .iter()
            .enumerate()
            .map(|(i, &c)| c * weight((i as isize - n as isize).unsigned_abs()))
            .collect()
    }
}

/// `⟨f, g⟩_a ≈ (1/M) Σ_j f(x_j) conj(g(x_j)) p_a(x_j)`.
pub fn inner_product(
    a: &MoebiusParameter,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<Complex64> {
    check_grids(f, g)?;
    let m = f.grid_size();
    let sum: Complex64 = f
        .values
        .iter()
        .zip(&g.values)
        .enumerate()
        .map(|(j, (u, v))| u * v.conj() * a.poisson_weight(grid_point(j, m)))
        .sum();
    Ok(sum / m as f64)
}

/// Samples of `F = f ∘ θ_a^{-1}` on the uniform grid `s_j = 2πj/m`.
pub fn phase_samples(
    a: &MoebiusParameter,
    f: impl Fn(f64) -> Complex64,
    m: usize,
) -> Vec<Complex64> {
    (0..m).map(|j| f(a.theta_inverse(grid_point(j, m)))).collect()
}

/// Coefficients `c_k^a(f)` for `|k| ≤ degree` using an `m`-point phase grid.
pub fn coefficients(
    a: &MoebiusParameter,
    f: impl Fn(f64) -> Complex64,
    degree: usize,
    m: usize,
) -> Result<CoefficientVector> {
    check_degree(degree, m)?;
    coefficients_from_phase_samples(a, &phase_samples(a, f, m), degree)
}

/// Coefficients from samples of `F = f ∘ θ_a^{-1}` on the uniform phase grid.
pub fn coefficients_from_phase_samples(
    a: &MoebiusParameter,
    samples: &[Complex64],
    degree: usize,
) -> Result<CoefficientVector> {
    let m = samples.len();
    check_degree(degree, m)?;
    let spectrum = spectral::forward(samples);
    let scale = 1.0 / m as f64;
    let coeffs = (-(degree as isize)..=degree as isize)
        .map(|k| spectrum[k.rem_euclid(m as isize) as usize] * scale)
        .collect();
    CoefficientVector::new(*a, coeffs)
}

fn check_degree(degree: usize, m: usize) -> Result<()> {
    if m < 4 * degree + 4 {
        return Err(Error::DegreeTooLarge { degree, grid: m });
    }
    Ok(())
}

/// `Σ_{|k|≤N} c_k e^{ikθ_a(x)}`.
pub fn evaluate_series(c: &CoefficientVector, x: f64) -> Complex64 {
    spectral::laurent_eval(c.as_slice(), c.param().theta(x))
}
