//! Partial sums, generalized de la Vallée-Poussin means and their kernel.
//!
//! `V_n(λ, f) = (1/λ_n) Σ_{k=n-λ_n}^{n-1} S_k(f)` is evaluated in multiplier
//! form: frequency `j` enters `S_k` for every `k ≥ |j|`, so it carries weight
//! `#{k ∈ [n-λ_n, n-1] : k ≥ |j|} / λ_n`, i.e. `1` for `|j| ≤ n-λ_n` and
//! `(n-|j|)/λ_n` above that.

use std::f64::consts::{FRAC_PI_2, PI};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::phase::{grid_point, MoebiusParameter};
use crate::sampling::{coefficients, CoefficientVector};
use crate::spectral;

/// The sequence `λ = {λ_n}` defining a family of means.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum VPSchedule {
    /// `λ_n = 1`: partial sums `S_{n-1}`.
    ConstantOne,
    /// `λ_n = ⌈n/2⌉`.
    Half,
    /// `λ_n = n`: Fejér means.
    Full,
    /// Explicit table `λ_1, λ_2, ...`.
    Custom(Vec<usize>),
}

impl VPSchedule {
    /// Validate a custom table: `λ_1 = 1`, `λ_{n+1} - λ_n ∈ {0, 1}`.
    pub fn custom(values: Vec<usize>) -> Result<Self> {
        match values.first() {
            None => return Err(Error::InvalidSchedule("empty table".into())),
            Some(&first) if first != 1 => {
                return Err(Error::InvalidSchedule(format!("λ_1 must be 1, got {first}")))
            }
            _ => {}
        }
        for (i, w) in values.windows(2).enumerate() {
            if w[1] < w[0] || w[1] - w[0] > 1 {
                return Err(Error::InvalidSchedule(format!(
                    "λ_{} = {} followed by λ_{} = {} (steps must be 0 or 1)",
                    i + 1,
                    w[0],
                    i + 2,
                    w[1]
                )));
            }
        }
        Ok(VPSchedule::Custom(values))
    }

    /// Read one integer per line; blank lines and `#` comments are skipped.
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let mut values = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let v = line.parse::<usize>().map_err(|e| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message: format!("expected a positive integer: {e}"),
            })?;
            values.push(v);
        }
        Self::custom(values)
    }

    /// `one`, `half`, `full` or `file:PATH`.
    pub fn parse(spec: &str) -> Result<Self> {
        match spec {
            "one" => Ok(VPSchedule::ConstantOne),
            "half" => Ok(VPSchedule::Half),
            "full" => Ok(VPSchedule::Full),
            _ => match spec.strip_prefix("file:") {
                Some(path) => Self::from_file(path),
                None => Err(Error::InvalidSchedule(format!(
                    "unknown schedule `{spec}` (expected one|half|full|file:PATH)"
                ))),
            },
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            VPSchedule::ConstantOne => "one",
            VPSchedule::Half => "half",
            VPSchedule::Full => "full",
            VPSchedule::Custom(_) => "custom",
        }
    }

    /// `λ_n` for `n ≥ 1`.
    pub fn lambda(&self, n: usize) -> Result<usize> {
        if n == 0 {
            return Err(Error::InvalidSchedule("orders start at n = 1".into()));
        }
        match self {
            VPSchedule::ConstantOne => Ok(1),
            VPSchedule::Half => Ok(n.div_ceil(2)),
            VPSchedule::Full => Ok(n),
            VPSchedule::Custom(table) => table.get(n - 1).copied().ok_or_else(|| {
                Error::InvalidSchedule(format!(
                    "custom table defines λ_n only for n ≤ {}, requested n = {n}",
                    table.len()
                ))
            }),
        }
    }
}

/// Multipliers `w_k`, `|k| ≤ n-1`, of the mean `V_n`.
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplierWeights {
    n: usize,
    lambda: usize,
    by_frequency: Vec<f64>,
}

impl MultiplierWeights {
    pub fn order(&self) -> usize {
        self.n
    }

    pub fn lambda(&self) -> usize {
        self.lambda
    }

    /// `w_k`; zero for `|k| ≥ n`.
    pub fn weight(&self, k: isize) -> f64 {
        self.by_frequency
            .get(k.unsigned_abs())
            .copied()
            .unwrap_or(0.0)
    }

    /// Weights for `k = 0..n`, the nonnegative half of the symmetric profile.
    pub fn as_slice(&self) -> &[f64] {
        &self.by_frequency
    }

    /// Symbol `Σ_k w_k e^{iku}` sampled on the uniform `m`-point grid.
    pub fn symbol_on_grid(&self, m: usize) -> Vec<f64> {
        let coeffs: Vec<Complex64> = (-(self.n as isize) + 1..self.n as isize)
            .map(|k| Complex64::new(self.weight(k), 0.0))
            .collect();
        spectral::synthesize(&coeffs, m)
            .into_iter()
            .map(|v| v.re)
            .collect()
    }
}

/// Weights of `V_n` for the given schedule.
pub fn vp_weights(n: usize, schedule: &VPSchedule) -> Result<MultiplierWeights> {
    let lambda = schedule.lambda(n)?;
    weights_for(n, lambda)
}

/// Weights for an explicit pair `(n, λ_n)`.
pub fn weights_for(n: usize, lambda: usize) -> Result<MultiplierWeights> {
    if n == 0 || lambda == 0 || lambda > n {
        return Err(Error::InvalidSchedule(format!(
            "need 1 ≤ λ_n ≤ n, got n = {n}, λ_n = {lambda}"
        )));
    }
    let full_band = n - lambda;
    let by_frequency = (0..n)
        .map(|k| {
            if k <= full_band {
                1.0
            } else {
                (n - k) as f64 / lambda as f64
            }
        })
        .collect();
    Ok(MultiplierWeights {
        n,
        lambda,
        by_frequency,
    })
}

fn require_degree(c: &CoefficientVector, order: usize) -> Result<()> {
    if order > c.degree() {
        return Err(Error::OrderExceedsDegree {
            order,
            degree: c.degree(),
        });
    }
    Ok(())
}

/// `S_n^a(f)(x) = Σ_{|k|≤n} c_k e^{ikθ_a(x)}`.
pub fn partial_sum(c: &CoefficientVector, n: usize, x: f64) -> Result<Complex64> {
    require_degree(c, n)?;
    Ok(spectral::laurent_eval(
        &c.weighted(n, |_| 1.0),
        c.param().theta(x),
    ))
}

/// `V_n^a(λ, f)(x)` in multiplier form.
pub fn vp_mean(c: &CoefficientVector, n: usize, schedule: &VPSchedule, x: f64) -> Result<Complex64> {
    let weights = vp_weights(n, schedule)?;
    Ok(spectral::laurent_eval(
        &weighted_coefficients(c, &weights)?,
        c.param().theta(x),
    ))
}

/// `V_n^a(λ, f)(x)` as the literal average of `λ_n` partial sums.
///
/// Costs `O(n λ_n)`; kept as the reference for [`vp_mean`].
pub fn vp_mean_by_averaging(
    c: &CoefficientVector,
    n: usize,
    schedule: &VPSchedule,
    x: f64,
) -> Result<Complex64> {
    let lambda = schedule.lambda(n)?;
    if lambda > n {
        return Err(Error::InvalidSchedule(format!("λ_{n} = {lambda} exceeds n")));
    }
    require_degree(c, n - 1)?;
    let mut acc = Complex64::new(0.0, 0.0);
    for k in n - lambda..n {
        acc += partial_sum(c, k, x)?;
    }
    Ok(acc / lambda as f64)
}

fn weighted_coefficients(c: &CoefficientVector, weights: &MultiplierWeights) -> Result<Vec<Complex64>> {
    let top = weights.order() - 1;
    require_degree(c, top)?;
    Ok(c.weighted(top, |k| weights.as_slice()[k]))
}

/// `V_n^a` at the uniform points `x_j = 2πj/m`.
pub fn vp_mean_on_grid(
    c: &CoefficientVector,
    n: usize,
    schedule: &VPSchedule,
    m: usize,
) -> Result<Vec<Complex64>> {
    let weights = vp_weights(n, schedule)?;
    let coeffs = weighted_coefficients(c, &weights)?;
    let a = *c.param();
    if a.is_zero() && m >= coeffs.len() {
        return Ok(spectral::synthesize(&coeffs, m));
    }
    Ok((0..m)
        .into_par_iter()
        .map(|j| spectral::laurent_eval(&coeffs, a.theta(grid_point(j, m))))
        .collect())
}

/// `V_n^a` composed with `θ_a^{-1}`, i.e. the classical trigonometric
/// polynomial `Σ w_k c_k e^{iks}`, at the uniform points `s_j = 2πj/m`.
pub fn vp_mean_on_phase_grid(
    c: &CoefficientVector,
    n: usize,
    schedule: &VPSchedule,
    m: usize,
) -> Result<Vec<Complex64>> {
    let weights = vp_weights(n, schedule)?;
    let coeffs = weighted_coefficients(c, &weights)?;
    if m < coeffs.len() {
        return Err(Error::GridTooSmall {
            grid: m,
            required: coeffs.len(),
        });
    }
    Ok(spectral::synthesize(&coeffs, m))
}

/// `K_n(t) = sin(λ_n t) sin((2n - λ_n) t) / sin² t`, with the removable
/// singularities at multiples of `π` filled by the limit `λ_n (2n - λ_n)`.
pub fn vp_kernel(n: usize, lambda: usize, t: f64) -> f64 {
    let l = lambda as f64;
    let r = (2 * n - lambda) as f64;
    let s = t.sin();
    if s.abs() < 1e-8 {
        // distance to the nearest multiple of π
        let e = t - (t / PI).round() * PI;
        return l * r * (1.0 - (l * l + r * r - 2.0) * e * e / 6.0);
    }
    (l * t).sin() * (r * t).sin() / (s * s)
}

/// `V_n^a(λ, f)(x) - f(x)` through the kernel representation
///
/// ```text
/// (1/(λ_n π)) ∫_0^{π/2} [F(θ_a(x) + 2t) + F(θ_a(x) - 2t) - 2F(θ_a(x))] K_n(t) dt
/// ```
///
/// with `F = f ∘ θ_a^{-1}`. The integrand is even and `π`-periodic in `t`,
/// so the endpoint-corrected trapezoid rule on `points` intervals is the
/// periodic trapezoid rule in disguise.
pub fn kernel_deviation(
    a: &MoebiusParameter,
    f: impl Fn(f64) -> Complex64,
    n: usize,
    lambda: usize,
    x: f64,
    points: usize,
) -> Complex64 {
    let phase = |s: f64| f(a.theta_inverse(s));
    let centre = a.theta(x);
    let fx = phase(centre);
    let h = FRAC_PI_2 / points as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=points {
        let t = i as f64 * h;
        let sym = phase(centre + 2.0 * t) + phase(centre - 2.0 * t) - fx * 2.0;
        let w = if i == 0 || i == points { 0.5 } else { 1.0 };
        acc += sym * (w * vp_kernel(n, lambda, t));
    }
    acc * h / (lambda as f64 * PI)
}

/// Operator norm of `f ↦ V_n(λ, f)` on `C(𝕋)`: the `L¹` mean of the
/// multiplier symbol, by the periodic trapezoid rule on `64 n` points.
///
/// The norm does not depend on `a`, since `V_n^a f = (V_n^0 F) ∘ θ_a`.
pub fn lebesgue_constant(n: usize, lambda: usize) -> Result<f64> {
    let weights = weights_for(n, lambda)?;
    let m = 64 * n.max(1);
    let symbol = weights.symbol_on_grid(m);
    Ok(symbol.iter().map(|v| v.abs()).sum::<f64>() / m as f64)
}

/// End-to-end estimate of `‖V_n^a‖` from the extremal sign function at `x0`.
///
/// Builds `f(x) = sign K(θ_a(x0) - θ_a(x))`, pushes it through the full
/// coefficient pipeline on an `m`-point grid and returns `|V_n^a(λ, f)(x0)|`.
pub fn extremal_norm_estimate(
    a: &MoebiusParameter,
    n: usize,
    schedule: &VPSchedule,
    x0: f64,
    m: usize,
) -> Result<f64> {
    let lambda = schedule.lambda(n)?;
    let centre = a.theta(x0);
    let sign = move |x: f64| {
        let u = centre - a.theta(x);
        let k = vp_kernel(n, lambda, u / 2.0);
        Complex64::new(if k < 0.0 { -1.0 } else { 1.0 }, 0.0)
    };
    let c = coefficients(a, sign, n - 1, m)?;
    Ok(vp_mean(&c, n, schedule, x0)?.norm())
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::TAU;

    use proptest::prelude::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    use crate::sampling::{coefficients, evaluate_series};

    fn random_coeffs(rng: &mut ChaCha8Rng, a: MoebiusParameter, degree: usize) -> CoefficientVector {
        let v = (0..2 * degree + 1)
            .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
            .collect();
        CoefficientVector::new(a, v).unwrap()
    }

    #[test]
    fn schedules() {
        assert_eq!(VPSchedule::Half.lambda(1).unwrap(), 1);
        assert_eq!(VPSchedule::Half.lambda(4).unwrap(), 2);
        assert_eq!(VPSchedule::Half.lambda(5).unwrap(), 3);
        assert_eq!(VPSchedule::Full.lambda(7).unwrap(), 7);
        assert!(VPSchedule::ConstantOne.lambda(0).is_err());
        assert!(VPSchedule::custom(vec![1, 2, 2, 3]).is_ok());
        assert!(VPSchedule::custom(vec![2, 2]).is_err());
        assert!(VPSchedule::custom(vec![1, 3]).is_err());
        assert!(VPSchedule::custom(vec![1, 2, 1]).is_err());
        assert!(VPSchedule::custom(vec![]).is_err());
        let custom = VPSchedule::custom(vec![1, 1, 2]).unwrap();
        assert!(custom.lambda(4).is_err());
        assert!(VPSchedule::parse("quarter").is_err());
        assert_eq!(VPSchedule::parse("half").unwrap(), VPSchedule::Half);
    }

    #[test]
    fn schedule_file() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("lambda.txt");
        std::fs::write(&path, "# lambda\n1\n2\n2\n3\n").unwrap();
        let s = VPSchedule::parse(&format!("file:{}", path.display())).unwrap();
        assert_eq!(s.lambda(4).unwrap(), 3);
        std::fs::write(&path, "1\n3\n").unwrap();
        assert!(VPSchedule::from_file(&path).is_err());
        std::fs::write(&path, "1\nx\n").unwrap();
        assert!(matches!(VPSchedule::from_file(&path), Err(Error::Parse { line: 2, .. })));
    }

    #[test]
    fn weights_special_cases() {
        let one = vp_weights(6, &VPSchedule::ConstantOne).unwrap();
        assert!(one.as_slice().iter().all(|&w| w == 1.0));
        assert_eq!(one.weight(6), 0.0);

        let fejer = vp_weights(5, &VPSchedule::Full).unwrap();
        for k in -4..=4isize {
            assert_eq!(fejer.weight(k), (5 - k.abs()) as f64 / 5.0);
        }

        // n = 4, λ = 2: brute-force average of S_2 and S_3
        let w = weights_for(4, 2).unwrap();
        for k in -3..=3isize {
            let count = (2..=3).filter(|&m: &isize| m >= k.abs()).count() as f64;
            assert_eq!(w.weight(k), count / 2.0);
        }
        assert_eq!(w.weight(2), 1.0);
        assert_eq!(w.weight(-3), 0.5);
        assert!(weights_for(3, 4).is_err());
    }

    #[test]
    fn partial_sum_errors_and_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let a = MoebiusParameter::new(0.1, 0.5).unwrap();
        let c = random_coeffs(&mut rng, a, 5);
        assert!(matches!(partial_sum(&c, 6, 0.0), Err(Error::OrderExceedsDegree { .. })));
        for &x in &[0.0, 2.0, 4.0] {
            assert!((partial_sum(&c, 5, x).unwrap() - evaluate_series(&c, x)).norm() < 1e-13);
        }
    }

    #[test]
    fn partial_sum_reproduces_low_degree_polynomials() {
        let a = MoebiusParameter::new(-0.4, 0.3).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let t = random_coeffs(&mut rng, a, 4);
        let tt = t.clone();
        let c = coefficients(&a, move |x| evaluate_series(&tt, x), 10, 64).unwrap();
        for n in 4..=10 {
            for &x in &[0.3, 1.7, 5.0] {
                assert!((partial_sum(&c, n, x).unwrap() - evaluate_series(&t, x)).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn partial_sum_square_wave_classical() {
        let m = 512;
        let square = |x: f64| Complex64::new(if x.sin() >= 0.0 { 1.0 } else { -1.0 }, 0.0);
        let c = coefficients(&MoebiusParameter::zero(), square, 40, m).unwrap();
        // classical DFT coefficients by direct summation, then direct truncated sum
        let direct: Vec<Complex64> = (-40..=40)
            .map(|k: i32| {
                (0..m)
                    .map(|j| square(grid_point(j, m)) * Complex64::from_polar(1.0, -(k as f64) * grid_point(j, m)))
                    .sum::<Complex64>()
                    / m as f64
            })
            .collect();
        for n in [1usize, 7, 40] {
            for &x in &[0.1, 1.0, 3.0, 4.4] {
                let oracle: Complex64 = (-(n as i32)..=n as i32)
                    .map(|k| direct[(k + 40) as usize] * Complex64::from_polar(1.0, k as f64 * x))
                    .sum();
                assert!((partial_sum(&c, n, x).unwrap() - oracle).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn degenerate_schedule_is_partial_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let a = MoebiusParameter::new(0.5, 0.0).unwrap();
        let c = random_coeffs(&mut rng, a, 12);
        for &x in &[0.0, 2.2] {
            let v = vp_mean(&c, 9, &VPSchedule::ConstantOne, x).unwrap();
            assert!((v - partial_sum(&c, 8, x).unwrap()).norm() < 1e-13);
        }
    }

    #[test]
    fn fejer_means_respect_bounds_of_nonnegative_functions() {
        let a = MoebiusParameter::new(0.0, 0.7).unwrap();
        let f = |x: f64| Complex64::new(if (x - 1.0).cos() > 0.3 { 1.0 } else { 0.0 }, 0.0);
        let c = coefficients(&a, f, 63, 1024).unwrap();
        for n in [4usize, 16, 64] {
            for j in 0..200 {
                let v = vp_mean(&c, n, &VPSchedule::Full, grid_point(j, 200)).unwrap();
                assert!(v.re >= -1e-12 && v.norm() <= 1.0 + 1e-12, "n={n}: {v}");
            }
        }
    }

    #[test]
    fn multiplier_and_average_agree() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let a = MoebiusParameter::from_polar(0.6, 1.0).unwrap();
        let schedules = [VPSchedule::ConstantOne, VPSchedule::Half, VPSchedule::Full];
        for trial in 0..20 {
            let c = random_coeffs(&mut rng, a, 40);
            let n = rng.gen_range(1..=41);
            let x = rng.gen_range(0.0..TAU);
            let s = &schedules[trial % 3];
            let lhs = vp_mean(&c, n, s, x).unwrap();
            let rhs = vp_mean_by_averaging(&c, n, s, x).unwrap();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn grid_evaluation_matches_pointwise() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for a in [MoebiusParameter::zero(), MoebiusParameter::new(0.3, -0.3).unwrap()] {
            let c = random_coeffs(&mut rng, a, 10);
            let grid = vp_mean_on_grid(&c, 8, &VPSchedule::Half, 64).unwrap();
            for (j, v) in grid.iter().enumerate() {
                let p = vp_mean(&c, 8, &VPSchedule::Half, grid_point(j, 64)).unwrap();
                assert!((v - p).norm() < 1e-12);
            }
            let phase = vp_mean_on_phase_grid(&c, 8, &VPSchedule::Half, 64).unwrap();
            for (j, v) in phase.iter().enumerate() {
                let x = a.theta_inverse(grid_point(j, 64));
                let p = vp_mean(&c, 8, &VPSchedule::Half, x).unwrap();
                assert!((v - p).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn kernel_values() {
        assert_eq!(vp_kernel(5, 3, 0.0), 21.0);
        assert!((vp_kernel(5, 3, PI) - 21.0).abs() < 1e-12);
        assert!((vp_kernel(5, 3, 1e-9) - 21.0).abs() < 1e-9);
        for &t in &[0.3, 1.0, 2.9] {
            assert!((vp_kernel(1, 1, t) - 1.0).abs() < 1e-14);
        }
        // continuity across the switch to the series branch
        let near: f64 = 2e-8;
        let direct = (3.0 * near).sin() * (7.0 * near).sin() / near.sin().powi(2);
        assert!((vp_kernel(5, 3, near) - direct).abs() < 1e-6);
    }

    #[test]
    fn kernel_is_scaled_multiplier_symbol() {
        for &(n, l) in &[(1usize, 1usize), (6, 2), (9, 9), (12, 1)] {
            let w = weights_for(n, l).unwrap();
            let m = 128;
            let symbol = w.symbol_on_grid(m);
            for (j, s) in symbol.iter().enumerate() {
                let u = grid_point(j, m);
                assert!((s - vp_kernel(n, l, u / 2.0) / l as f64).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn kernel_representation_matches_multiplier_form() {
        let f = |x: f64| Complex64::new((x.cos()).exp() + (2.0 * x).sin(), 0.0);
        for a in [MoebiusParameter::zero(), MoebiusParameter::new(0.4, 0.2).unwrap()] {
            let c = coefficients(&a, f, 63, 1024).unwrap();
            for (n, schedule) in [(8usize, VPSchedule::Full), (12, VPSchedule::Half), (6, VPSchedule::ConstantOne)] {
                let lambda = schedule.lambda(n).unwrap();
                for &x in &[0.0, 1.3, 4.0] {
                    let multiplier = vp_mean(&c, n, &schedule, x).unwrap() - f(x);
                    let kernel = kernel_deviation(&a, f, n, lambda, x, 2048);
                    assert!((multiplier - kernel).norm() < 1e-6, "a={a} n={n} x={x}");
                }
            }
        }
    }

    #[test]
    fn lebesgue_examples() {
        assert!((lebesgue_constant(1, 1).unwrap() - 1.0).abs() < 1e-14);
        for n in [2usize, 17, 100] {
            assert!((lebesgue_constant(n, n).unwrap() - 1.0).abs() < 1e-6);
        }
        // λ = 1, n = 33 is the classical constant of S_32; oracle: fine
        // midpoint quadrature of |D_32| on [0, π], independent of the FFT path
        let samples = 400_000;
        let h = PI / samples as f64;
        let oracle = (0..samples)
            .map(|i| {
                let u = (i as f64 + 0.5) * h;
                ((32.5 * u).sin() / (0.5 * u).sin()).abs()
            })
            .sum::<f64>()
            * h
            / PI;
        let computed = lebesgue_constant(33, 1).unwrap();
        assert!((computed - oracle).abs() < 1e-4, "{computed} vs {oracle}");
        assert!(computed <= 3.0 + (65.0f64).ln());
    }

    #[test]
    fn extremal_construction_recovers_lebesgue_constant() {
        for a in [MoebiusParameter::zero(), MoebiusParameter::new(0.6, 0.0).unwrap()] {
            for (n, schedule) in [(16usize, VPSchedule::ConstantOne), (24, VPSchedule::Half)] {
                let lambda = schedule.lambda(n).unwrap();
                let norm = lebesgue_constant(n, lambda).unwrap();
                let est = extremal_norm_estimate(&a, n, &schedule, 0.77, 16384).unwrap();
                assert!((est - norm).abs() / norm < 0.02, "a={a} n={n}: {est} vs {norm}");
            }
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]

        #[test]
        fn weights_are_a_valid_profile(n in 1usize..300, frac in 0.0..1.0f64) {
            let lambda = 1 + ((n - 1) as f64 * frac) as usize;
            let w = weights_for(n, lambda).unwrap();
            prop_assert_eq!(w.weight(0), 1.0);
            for k in 0..n as isize {
                prop_assert!((0.0..=1.0).contains(&w.weight(k)));
                prop_assert_eq!(w.weight(k), w.weight(-k));
                if k as usize <= n - lambda {
                    prop_assert_eq!(w.weight(k), 1.0);
                }
            }
        }

        #[test]
        fn custom_schedules_enforce_steps(steps in proptest::collection::vec(0usize..=1, 0..40)) {
            let mut table = vec![1usize];
            for s in steps {
                let last = *table.last().unwrap();
                table.push(last + s);
            }
            let s = VPSchedule::custom(table.clone()).unwrap();
            for (i, &l) in table.iter().enumerate() {
                prop_assert!(l >= 1 && l <= i + 1);
                prop_assert_eq!(s.lambda(i + 1).unwrap(), l);
            }
        }
    }
}
