//! Right-hand sides of the approximation theorems and the measured errors
//! they are compared with.
//!
//! The theorems hold up to unspecified absolute constants, so nothing here
//! asserts `error ≤ bound`. Reports carry `error / bound` ratios; the useful
//! check is that these stay bounded and their running maximum settles as `n`
//! grows. Logarithms are natural.

mod minimax;

use std::fmt;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::holder::{holder_measurement, ModulusSpec, ShiftSet};
use crate::phase::MoebiusParameter;
use crate::sampling::{coefficients, phase_samples, Evaluator, SampledFunction};
use crate::summation::{vp_mean_on_grid, VPSchedule};

pub use minimax::BestApproximation;

/// Which case of the rate theorems applies.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Branch {
    #[serde(rename = "alpha<1-or-beta>0")]
    Regular,
    #[serde(rename = "alpha=1-and-beta=0")]
    Logarithmic,
}

impl Branch {
    /// `(α, β) = (1, 0)` selects the logarithmic case.
    pub fn select(alpha: f64, beta: f64) -> Self {
        if alpha >= 1.0 - 1e-12 && beta <= 1e-12 {
            Branch::Logarithmic
        } else {
            Branch::Regular
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Branch::Regular => "alpha<1-or-beta>0",
            Branch::Logarithmic => "alpha=1-and-beta=0",
        }
    }

    fn log_factor(self, lambda: usize) -> f64 {
        match self {
            Branch::Regular => 1.0,
            Branch::Logarithmic => 1.0 + (lambda as f64).ln(),
        }
    }
}

impl fmt::Display for Branch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Orientation of the modulus ratio in the Hölder-norm bound.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum RatioOrientation {
    /// `ω_β(1/n) / ω_α(1/n)`.
    #[default]
    BetaOverAlpha,
    /// `ω_α(1/n) / ω_β(1/n)`; the orientation matching the power-modulus
    /// specialisation `n^{β-α}`.
    AlphaOverBeta,
}

fn check_order(n: usize, lambda: usize) -> Result<()> {
    if lambda == 0 || lambda > n {
        return Err(Error::InvalidArgument(format!("need 1 ≤ λ_n ≤ n, got n = {n}, λ_n = {lambda}")));
    }
    Ok(())
}

/// `3 + ln((2n - λ_n)/λ_n)`.
pub fn lebesgue_factor(n: usize, lambda: usize) -> f64 {
    3.0 + ((2 * n - lambda) as f64 / lambda as f64).ln()
}

/// `M_f (3 + ln((2n - λ_n)/λ_n))`.
pub fn thm1_bound(n: usize, lambda: usize, m_f: f64) -> Result<f64> {
    check_order(n, lambda)?;
    if !(m_f >= 0.0) {
        return Err(Error::InvalidArgument(format!("M_f = {m_f} must be nonnegative")));
    }
    Ok(m_f * lebesgue_factor(n, lambda))
}

/// `(12/(1-|a|)) ω_α(1/λ_n)`, times `1 + ln λ_n` in the logarithmic branch.
pub fn thm3_bound(
    a: &MoebiusParameter,
    n: usize,
    lambda: usize,
    omega_alpha: &ModulusSpec,
    branch: Branch,
) -> Result<f64> {
    check_order(n, lambda)?;
    if branch == Branch::Logarithmic && omega_alpha.alpha() < 1.0 - 1e-12 {
        return Err(Error::InvalidArgument(format!(
            "logarithmic branch needs α = 1, got α = {}",
            omega_alpha.alpha()
        )));
    }
    Ok(12.0 / (1.0 - a.modulus()) * omega_alpha.eval(1.0 / lambda as f64) * branch.log_factor(lambda))
}

/// `(12/(1-|a|)) ρ_n ω_α(1/λ_n) ln(2n/λ_n)` with `ρ_n` the modulus ratio at
/// `1/n` in the requested orientation, times `1 + ln λ_n` in the logarithmic
/// branch.
pub fn thm4_bound(
    a: &MoebiusParameter,
    n: usize,
    lambda: usize,
    omega_alpha: &ModulusSpec,
    omega_beta: &ModulusSpec,
    branch: Branch,
    orientation: RatioOrientation,
) -> Result<f64> {
    check_order(n, lambda)?;
    let (alpha, beta) = (omega_alpha.alpha(), omega_beta.alpha());
    if beta >= alpha {
        return Err(Error::InvalidArgument(format!("need β < α, got α = {alpha}, β = {beta}")));
    }
    if branch != Branch::select(alpha, beta) {
        return Err(Error::InvalidArgument(format!(
            "branch {branch} inconsistent with α = {alpha}, β = {beta}"
        )));
    }
    let at = 1.0 / n as f64;
    let ratio = match orientation {
        RatioOrientation::BetaOverAlpha => omega_beta.eval(at) / omega_alpha.eval(at),
        RatioOrientation::AlphaOverBeta => omega_alpha.eval(at) / omega_beta.eval(at),
    };
    let spread = (2.0 * n as f64 / lambda as f64).ln();
    Ok(12.0 / (1.0 - a.modulus())
        * ratio
        * omega_alpha.eval(1.0 / lambda as f64)
        * spread
        * branch.log_factor(lambda))
}

/// Power-modulus specialisation:
/// `((1+|a|)/(1-|a|))^α n^{β-α} λ_n^{-α} ln(2n/λ_n)` for `α < 1` and
/// `((1+|a|)/(1-|a|)) n^{β-1} ((1 + ln λ_n)/λ_n) ln(2n/λ_n)` for `α = 1`.
pub fn corollary1_bound(a: &MoebiusParameter, n: usize, lambda: usize, alpha: f64, beta: f64) -> Result<f64> {
    check_order(n, lambda)?;
    if !(0.0 <= beta && beta < alpha && alpha <= 1.0) {
        return Err(Error::InvalidArgument(format!("need 0 ≤ β < α ≤ 1, got α = {alpha}, β = {beta}")));
    }
    let r = a.modulus();
    let distortion = (1.0 + r) / (1.0 - r);
    let (nf, lf) = (n as f64, lambda as f64);
    let spread = (2.0 * nf / lf).ln();
    if alpha < 1.0 {
        Ok(distortion.powf(alpha) * nf.powf(beta - alpha) * lf.powf(-alpha) * spread)
    } else {
        Ok(distortion * nf.powf(beta - 1.0) * (1.0 + lf.ln()) / lf * spread)
    }
}

/// `err (1 + 2/φ(1/n)) + sup_{δ ≤ 1/n} [2 ω_f(δ)/φ(δ)] (1 + ‖A_n‖)`, the sup
/// taken over `δ = 2^{-k}/n`, `k = 0..=40`.
pub fn lemma3_bound(
    operator_norm: f64,
    err_uniform: f64,
    omega_f: impl Fn(f64) -> f64,
    phi: &ModulusSpec,
    n: usize,
) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    let top = 1.0 / n as f64;
    let sup = (0..=40)
        .map(|k| {
            let delta = top * 0.5f64.powi(k);
            2.0 * omega_f(delta) / phi.eval(delta)
        })
        .fold(0.0, f64::max);
    Ok(err_uniform * (1.0 + 2.0 / phi.eval(top)) + sup * (1.0 + operator_norm))
}

/// `E_n^a(f)` as the discrete minimax of `F = f ∘ θ_a^{-1}` on `grid` points.
///
/// The uniform norm is invariant under the change of variable, so the
/// nonlinear problem is the classical one for `F`. Only real-valued `f` is
/// supported. Non-convergence returns the best bracket in the error.
pub fn best_approximation(
    a: &MoebiusParameter,
    f: impl Fn(f64) -> Complex64,
    degree: usize,
    grid: usize,
) -> Result<BestApproximation> {
    let required = 16 * degree.max(1);
    if grid < required {
        return Err(Error::GridTooSmall { grid, required });
    }
    let samples = phase_samples(a, f, grid);
    let scale = samples.iter().fold(1.0f64, |acc, z| acc.max(z.norm()));
    if samples.iter().any(|z| z.im.abs() > 1e-12 * scale) {
        return Err(Error::InvalidArgument(
            "best approximation supports real-valued functions only".into(),
        ));
    }
    let values: Vec<f64> = samples.iter().map(|z| z.re).collect();
    minimax::discrete_minimax(&values, degree)
}

/// Below this both sides of a ratio are treated as exact zeros.
const NEGLIGIBLE: f64 = 1e-12;

fn ratio(err: f64, bound: f64) -> Option<f64> {
    if bound > NEGLIGIBLE {
        Some(err / bound)
    } else {
        None
    }
}

/// One order of the uniform-error versus best-approximation comparison.
#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Row {
    pub n: usize,
    pub lambda: usize,
    pub err_uniform: f64,
    pub best_approximation: f64,
    pub lebesgue_factor: f64,
    pub ratio: Option<f64>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Theorem2Report {
    pub rows: Vec<Theorem2Row>,
    pub sup_ratio: Option<f64>,
    /// Relative change of the running max of the ratio over the last octave.
    pub drift: Option<f64>,
}

/// Uniform error of `f - x` samples on the `m`-point grid.
fn deviation(f: &SampledFunction, approx: &[Complex64]) -> Result<SampledFunction> {
    let values = f.values().iter().zip(approx).map(|(u, v)| u - v).collect();
    SampledFunction::from_values(values)
}

fn validate_orders(ns: &[usize], grid: usize) -> Result<usize> {
    let n_max = *ns.iter().max().ok_or_else(|| Error::InvalidArgument("empty range of orders".into()))?;
    if ns.contains(&0) {
        return Err(Error::InvalidArgument("orders start at n = 1".into()));
    }
    if grid < 4 * n_max + 4 {
        return Err(Error::GridTooSmall {
            grid,
            required: 4 * n_max + 4,
        });
    }
    Ok(n_max)
}

/// Compare `‖f - V_n^a‖_∞` with `(3 + ln((2n-λ_n)/λ_n)) E_{n-λ_n}^a(f)` for
/// each `n` in `ns`. The best approximation uses the same `grid`, which must
/// hold at least `16 (n - λ_n)` points.
pub fn verify_theorem2(
    a: &MoebiusParameter,
    f: &Evaluator,
    schedule: &VPSchedule,
    ns: &[usize],
    grid: usize,
) -> Result<Theorem2Report> {
    let n_max = validate_orders(ns, grid)?;
    let samples = SampledFunction::from_evaluator(grid, f.clone())?;
    let coeffs = coefficients(a, |x| f(x), n_max, grid)?;
    let mut rows = Vec::with_capacity(ns.len());
    for &n in ns {
        let lambda = schedule.lambda(n)?;
        let approx = vp_mean_on_grid(&coeffs, n, schedule, grid)?;
        let err_uniform = deviation(&samples, &approx)?.sup_norm();
        let best = best_approximation(a, |x| f(x), n - lambda, grid)?.value;
        let factor = lebesgue_factor(n, lambda);
        let ratio = if best > NEGLIGIBLE {
            Some(err_uniform / (factor * best))
        } else {
            None
        };
        rows.push(Theorem2Row {
            n,
            lambda,
            err_uniform,
            best_approximation: best,
            lebesgue_factor: factor,
            ratio,
        });
    }
    let ordered: Vec<usize> = rows.iter().map(|r| r.n).collect();
    let ratios: Vec<Option<f64>> = rows.iter().map(|r| r.ratio).collect();
    Ok(Theorem2Report {
        sup_ratio: ratios.iter().flatten().cloned().reduce(f64::max),
        drift: running_max_drift(&ordered, &ratios),
        rows,
    })
}

/// Measured errors and bounds at one order `n`.
#[derive(Clone, Debug, Serialize)]
pub struct ErrorReport {
    pub n: usize,
    pub lambda: usize,
    pub a: MoebiusParameter,
    pub err_uniform: f64,
    /// `A^{ω_β}(f - V_n^a)`.
    pub seminorm_beta: f64,
    /// `‖f - V_n^a‖_{ω_β} = err_uniform + seminorm_beta`.
    pub err_holder: f64,
    pub bound_uniform: f64,
    pub bound_holder: f64,
    pub ratio_uniform: Option<f64>,
    pub ratio_holder: Option<f64>,
    pub branch: Branch,
    pub orientation: RatioOrientation,
}

/// Measurement options for [`verify_rates`].
#[derive(Clone, Copy, Debug, Default)]
pub struct RateOptions {
    pub shifts: ShiftSet,
    pub orientation: RatioOrientation,
}

/// Uniform and `ω_β`-norm errors of `V_n^a(λ, f)` on the `grid`-point
/// `x`-grid, with the rate bounds, for each `n` in `ns`.
#[allow(clippy::too_many_arguments)]
pub fn verify_rates(
    a: &MoebiusParameter,
    f: &Evaluator,
    omega_alpha: &ModulusSpec,
    omega_beta: &ModulusSpec,
    schedule: &VPSchedule,
    ns: &[usize],
    grid: usize,
    options: RateOptions,
) -> Result<Vec<ErrorReport>> {
    let n_max = validate_orders(ns, grid)?;
    let branch = Branch::select(omega_alpha.alpha(), omega_beta.alpha());
    let samples = SampledFunction::from_evaluator(grid, f.clone())?;
    let coeffs = coefficients(a, |x| f(x), n_max, grid)?;
    let mut reports = Vec::with_capacity(ns.len());
    for &n in ns {
        let lambda = schedule.lambda(n)?;
        let approx = vp_mean_on_grid(&coeffs, n, schedule, grid)?;
        let measured = holder_measurement(&deviation(&samples, &approx)?, omega_beta, options.shifts);
        let bound_uniform = thm3_bound(a, n, lambda, omega_alpha, branch)?;
        let bound_holder = thm4_bound(a, n, lambda, omega_alpha, omega_beta, branch, options.orientation)?;
        reports.push(ErrorReport {
            n,
            lambda,
            a: *a,
            err_uniform: measured.uniform_norm,
            seminorm_beta: measured.seminorm,
            err_holder: measured.norm(),
            bound_uniform,
            bound_holder,
            ratio_uniform: ratio(measured.uniform_norm, bound_uniform),
            ratio_holder: ratio(measured.norm(), bound_holder),
            branch,
            orientation: options.orientation,
        });
    }
    reports.sort_by_key(|r| r.n);
    Ok(reports)
}

/// Least-squares slope of `ln y` against `ln x`; `None` with fewer than two
/// points or a nonpositive value.
pub fn loglog_slope(xs: &[f64], ys: &[f64]) -> Option<f64> {
    if xs.len() != ys.len() || xs.len() < 2 || xs.iter().chain(ys).any(|&v| !(v > 0.0)) {
        return None;
    }
    let lx: Vec<f64> = xs.iter().map(|x| x.ln()).collect();
    let ly: Vec<f64> = ys.iter().map(|y| y.ln()).collect();
    let k = lx.len() as f64;
    let (mx, my) = (lx.iter().sum::<f64>() / k, ly.iter().sum::<f64>() / k);
    let sxx: f64 = lx.iter().map(|x| (x - mx).powi(2)).sum();
    let sxy: f64 = lx.iter().zip(&ly).map(|(x, y)| (x - mx) * (y - my)).sum();
    if sxx == 0.0 {
        None
    } else {
        Some(sxy / sxx)
    }
}

/// Relative change of the running maximum of `values` between the last
/// order `n_last / 2` or below and the end of the sequence. `ns` must be
/// increasing; missing values are skipped.
pub fn running_max_drift(ns: &[usize], values: &[Option<f64>]) -> Option<f64> {
    let last = *ns.last()?;
    let mut running = None::<f64>;
    let mut at_octave = None::<f64>;
    for (&n, v) in ns.iter().zip(values) {
        if let Some(v) = v {
            running = Some(running.map_or(*v, |r| r.max(*v)));
        }
        if 2 * n <= last {
            at_octave = running;
        }
    }
    let (start, end) = (at_octave?, running?);
    if start > 0.0 {
        Some((end - start) / start)
    } else {
        None
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;
    use std::sync::Arc;

    use proptest::prelude::*;

    use crate::holder::holder_seminorm;
    use crate::summation::lebesgue_constant;

    fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Evaluator {
        Arc::new(move |x| Complex64::new(f(x), 0.0))
    }

    fn cusp(alpha: f64) -> Evaluator {
        real(move |x| (x / 2.0).sin().abs().powf(alpha))
    }

    fn power(alpha: f64) -> ModulusSpec {
        ModulusSpec::power(alpha).unwrap()
    }

    #[test]
    fn lebesgue_factor_bound_examples() {
        assert_eq!(thm1_bound(10, 10, 2.0).unwrap(), 6.0);
        assert_eq!(thm1_bound(1, 1, 1.0).unwrap(), 3.0);
        assert!((thm1_bound(50, 1, 1.0).unwrap() - (3.0 + 99f64.ln())).abs() < 1e-15);
        assert!(thm1_bound(5, 6, 1.0).is_err());
        assert!(thm1_bound(5, 0, 1.0).is_err());
    }

    #[test]
    fn uniform_bound_examples() {
        let zero = MoebiusParameter::zero();
        let b = thm3_bound(&zero, 100, 100, &power(0.5), Branch::Regular).unwrap();
        assert!((b - 1.2).abs() < 1e-12);

        let lambda = E.powi(2).round() as usize;
        let b = thm3_bound(&zero, lambda, lambda, &power(1.0), Branch::Logarithmic).unwrap();
        let expected = 12.0 / lambda as f64 * (1.0 + (lambda as f64).ln());
        assert!((b - expected).abs() < 1e-12);

        let far = MoebiusParameter::new(0.9, 0.0).unwrap();
        let ratio = thm3_bound(&far, 64, 32, &power(0.5), Branch::Regular).unwrap()
            / thm3_bound(&zero, 64, 32, &power(0.5), Branch::Regular).unwrap();
        assert!((ratio - 10.0).abs() < 1e-9);

        assert!(thm3_bound(&zero, 10, 10, &power(0.5), Branch::Logarithmic).is_err());
    }

    #[test]
    fn holder_bound_power_moduli() {
        let zero = MoebiusParameter::zero();
        for n in [4usize, 64, 1000] {
            let b = thm4_bound(&zero, n, n, &power(0.5), &power(0.25), Branch::Regular, RatioOrientation::BetaOverAlpha)
                .unwrap();
            let expected = 12.0 * (n as f64).powf(-0.25) * 2f64.ln();
            assert!((b - expected).abs() < 1e-12 * expected);
        }
        assert!(thm4_bound(&zero, 8, 8, &power(0.25), &power(0.5), Branch::Regular, RatioOrientation::default()).is_err());
        assert!(thm4_bound(&zero, 8, 8, &power(1.0), &power(0.0), Branch::Regular, RatioOrientation::default()).is_err());
    }

    #[test]
    fn power_bound_matches_alpha_over_beta_orientation() {
        let a = MoebiusParameter::new(0.3, -0.2).unwrap();
        let (alpha, beta) = (0.5, 0.25);
        let mut quotients = Vec::new();
        for n in [8usize, 32, 128, 512] {
            for lambda in [1, n / 2, n] {
                let t4 = thm4_bound(&a, n, lambda, &power(alpha), &power(beta), Branch::Regular, RatioOrientation::AlphaOverBeta)
                    .unwrap();
                quotients.push(t4 / corollary1_bound(&a, n, lambda, alpha, beta).unwrap());
            }
        }
        let constant = 12.0 / (1.0 - a.modulus()) / ((1.0 + a.modulus()) / (1.0 - a.modulus())).powf(alpha);
        assert!(quotients.iter().all(|q| (q - constant).abs() < 1e-10 * constant));

        // the printed orientation differs by n^{2(α-β)}
        let n = 64;
        let t4 = thm4_bound(&a, n, n, &power(alpha), &power(beta), Branch::Regular, RatioOrientation::BetaOverAlpha).unwrap();
        let c = corollary1_bound(&a, n, n, alpha, beta).unwrap();
        assert!((t4 / c / constant - (n as f64).powf(2.0 * (alpha - beta))).abs() < 1e-9 * (n as f64));
    }

    #[test]
    fn power_bound_lipschitz_branch() {
        let zero = MoebiusParameter::zero();
        let (n, lambda) = (100, 50);
        let c = corollary1_bound(&zero, n, lambda, 1.0, 0.0).unwrap();
        let expected = (100f64).powf(-1.0) * (1.0 + 50f64.ln()) / 50.0 * 4f64.ln();
        assert!((c - expected).abs() < 1e-15);
        let t4 = thm4_bound(&zero, n, lambda, &power(1.0), &power(0.0), Branch::Logarithmic, RatioOrientation::AlphaOverBeta)
            .unwrap();
        assert!((t4 / c - 12.0).abs() < 1e-10);
    }

    #[test]
    fn branch_dispatch() {
        assert_eq!(Branch::select(1.0, 0.0), Branch::Logarithmic);
        assert_eq!(Branch::select(1.0, 0.25), Branch::Regular);
        assert_eq!(Branch::select(0.5, 0.0), Branch::Regular);
        assert_eq!(Branch::select(0.75, 0.5), Branch::Regular);
        assert_eq!(Branch::Logarithmic.label(), "alpha=1-and-beta=0");
        assert_eq!(serde_json::to_string(&Branch::Regular).unwrap(), "\"alpha<1-or-beta>0\"");
    }

    #[test]
    fn phi_norm_bound_trivial_cases() {
        let phi = power(0.25);
        assert_eq!(lemma3_bound(2.0, 0.0, |_| 0.0, &phi, 16).unwrap(), 0.0);
        // φ = ω_f: the sup term is 2(1 + ‖A‖)
        let b = lemma3_bound(1.5, 0.0, |d| phi.eval(d), &phi, 16).unwrap();
        assert!((b - 5.0).abs() < 1e-12);
    }

    #[test]
    fn phi_norm_bound_dominates_measurement() {
        let zero = MoebiusParameter::zero();
        let m = 4096;
        let (omega_f, phi) = (power(0.5), power(0.25));
        for f in [cusp(0.5), real(|x| (x / 2.0).sin().abs().powf(0.75) + 0.5 * x.cos())] {
            let samples = SampledFunction::from_evaluator(m, f.clone()).unwrap();
            let a_f = holder_seminorm(&samples, &omega_f);
            let coeffs = coefficients(&zero, |x| f(x), 256, m).unwrap();
            for (n, schedule) in [(16, VPSchedule::Full), (64, VPSchedule::Half), (256, VPSchedule::ConstantOne)] {
                let lambda = schedule.lambda(n).unwrap();
                let approx = vp_mean_on_grid(&coeffs, n, &schedule, m).unwrap();
                let g = deviation(&samples, &approx).unwrap();
                let measured = holder_measurement(&g, &phi, ShiftSet::All).norm();
                let norm = lebesgue_constant(n, lambda).unwrap();
                let bound = lemma3_bound(norm, g.sup_norm(), |d| a_f * omega_f.eval(d), &phi, n).unwrap();
                assert!(measured <= bound, "n={n}: {measured} > {bound}");
            }
        }
    }

    #[test]
    fn best_approximation_reproduces_members() {
        let a = MoebiusParameter::new(0.4, 0.3).unwrap();
        let f = move |x: f64| {
            let t = a.theta(x);
            Complex64::new(0.5 + (2.0 * t).cos() - (3.0 * t).sin(), 0.0)
        };
        let best = best_approximation(&a, f, 3, 64).unwrap();
        assert!(best.value < 1e-10);
        assert!(best_approximation(&a, f, 4, 63).is_err());
        assert!(best_approximation(&a, |x| Complex64::new(0.0, x.sin()), 2, 64).is_err());
    }

    #[test]
    fn best_approximation_of_abs_sine_decays_like_one_over_n() {
        let zero = MoebiusParameter::zero();
        let ns = [4.0, 8.0, 16.0, 32.0, 64.0];
        let values: Vec<f64> = ns
            .iter()
            .map(|&n| best_approximation(&zero, |x| Complex64::new(x.sin().abs(), 0.0), n as usize, 16 * n as usize).unwrap().value)
            .collect();
        let slope = loglog_slope(&ns, &values).unwrap();
        assert!((slope + 1.0).abs() < 0.15, "slope {slope}");
        assert!(values.windows(2).all(|w| w[1] <= w[0]));
    }

    #[test]
    fn best_approximation_below_vp_errors() {
        let a = MoebiusParameter::new(0.0, 0.5).unwrap();
        let f = cusp(0.5);
        let m = 2048;
        let samples = SampledFunction::from_evaluator(m, f.clone()).unwrap();
        let coeffs = coefficients(&a, |x| f(x), 64, m).unwrap();
        let mut previous = f64::INFINITY;
        for degree in [4usize, 8, 16, 32] {
            let best = best_approximation(&a, |x| f(x), degree, m).unwrap();
            assert!(best.value <= previous);
            previous = best.value;
            // V_m has degree m - 1, so any m ≤ degree + 1 competes
            for schedule in [VPSchedule::ConstantOne, VPSchedule::Half, VPSchedule::Full] {
                let approx = vp_mean_on_grid(&coeffs, degree + 1, &schedule, m).unwrap();
                let err = deviation(&samples, &approx).unwrap().sup_norm();
                assert!(best.value <= err * (1.0 + 1e-9), "degree {degree}");
            }
        }
    }

    #[test]
    fn best_approximation_ratio_reproduction_and_partial_sums() {
        let zero = MoebiusParameter::zero();
        let poly = real(|x| 1.0 + x.cos() - 0.5 * (2.0 * x).sin());
        let report = verify_theorem2(&zero, &poly, &VPSchedule::Half, &[8, 16], 512).unwrap();
        assert!(report.rows.iter().all(|r| r.err_uniform < 1e-12 && r.ratio.is_none()));

        // λ_n = 1: the Lebesgue inequality for S_{n-1}; ratio ≤ 1 up to the
        // grid Lebesgue constant being below 3 + ln(2n - 1)
        let report = verify_theorem2(&zero, &cusp(0.5), &VPSchedule::ConstantOne, &[8, 16, 32], 1024).unwrap();
        for row in &report.rows {
            let ratio = row.ratio.unwrap();
            assert!(ratio > 0.0 && ratio <= 1.0, "n={}: {ratio}", row.n);
        }
    }

    #[test]
    fn rates_for_polynomials_vanish() {
        let a = MoebiusParameter::new(0.5, 0.0).unwrap();
        let f: Evaluator = Arc::new(move |x| Complex64::from_polar(1.0, a.theta(x)));
        let reports = verify_rates(&a, &f, &power(0.5), &power(0.25), &VPSchedule::Half, &[4, 8], 256, RateOptions::default())
            .unwrap();
        for r in reports {
            assert!(r.err_uniform < 1e-12 && r.seminorm_beta < 1e-11);
            assert!(r.ratio_uniform.unwrap() < 1e-11);
        }
    }

    #[test]
    fn fejer_rate_on_cusp() {
        let zero = MoebiusParameter::zero();
        let ns = [16usize, 32, 64, 128, 256];
        let reports = verify_rates(&zero, &cusp(0.5), &power(0.5), &power(0.25), &VPSchedule::Full, &ns, 4096, RateOptions::default())
            .unwrap();
        let x: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let uniform: Vec<f64> = reports.iter().map(|r| r.err_uniform).collect();
        let slope = loglog_slope(&x, &uniform).unwrap();
        assert!((-0.65..=-0.35).contains(&slope), "slope {slope}");
        assert!(reports.iter().all(|r| r.branch == Branch::Regular));
    }

    #[test]
    fn slope_and_drift_helpers() {
        let xs = [1.0, 2.0, 4.0, 8.0];
        let ys: Vec<f64> = xs.iter().map(|x: &f64| 3.0 * x.powf(-0.7)).collect();
        assert!((loglog_slope(&xs, &ys).unwrap() + 0.7).abs() < 1e-12);
        assert!(loglog_slope(&xs, &[1.0, 0.0, 1.0, 1.0]).is_none());
        let ns = [8, 16, 32, 64];
        let drift = running_max_drift(&ns, &[Some(1.0), Some(2.0), Some(1.9), Some(2.1)]).unwrap();
        assert!((drift - 0.05).abs() < 1e-12);
        assert_eq!(running_max_drift(&ns, &[Some(1.0), None, Some(0.5), Some(0.2)]), Some(0.0));
        assert!(running_max_drift(&[8], &[Some(1.0)]).is_none());
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn bounds_nonnegative_and_monotone_in_a(n in 1usize..400, frac in 0.0..1.0f64, r in 0.0..0.95f64) {
            let lambda = ((n as f64 * frac).ceil() as usize).clamp(1, n);
            let a = MoebiusParameter::from_polar(r, 1.0).unwrap();
            let t3 = thm3_bound(&a, n, lambda, &power(0.5), Branch::Regular).unwrap();
            let t3_zero = thm3_bound(&MoebiusParameter::zero(), n, lambda, &power(0.5), Branch::Regular).unwrap();
            prop_assert!(t3 >= t3_zero && t3_zero > 0.0);
            prop_assert!(thm1_bound(n, lambda, 1.0).unwrap() >= 3.0);
            let t4 = thm4_bound(&a, n, lambda, &power(0.5), &power(0.25), Branch::Regular, RatioOrientation::default()).unwrap();
            prop_assert!(t4 >= 0.0);
        }
    }

    #[test]
    fn phi_norm_bound_uses_dyadic_sup() {
        // ω_f/φ increasing: the sup sits at δ = 1/n
        let phi = power(0.25);
        let b = lemma3_bound(0.0, 0.0, |d: f64| d.sqrt(), &phi, 4).unwrap();
        assert!((b - 2.0 * 0.25f64.powf(0.25)).abs() < 1e-15);
    }
}
