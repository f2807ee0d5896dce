//! Moduli of continuity, Leindler classes and discrete Hölder measurements.
//!
//! All measurements on sampled functions use the grid shifts `d_j = 2πj/M`,
//! `1 ≤ j ≤ M/2`; larger shifts are the same pairs read the other way round
//! the circle. The per-shift maxima `D_j = max_i |f(x_i + d_j) - f(x_i)|` are
//! the only expensive part and are shared by every quantity derived here.

use std::f64::consts::{PI, TAU};
use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::phase::{grid_point, MoebiusParameter};
use crate::sampling::{phase_samples, SampledFunction};

/// Functional form of a modulus.
#[derive(Clone, Debug, PartialEq)]
pub enum ModulusFamily {
    /// `δ^α`.
    Power,
    /// `δ^α (1 + |ln δ|)^γ`.
    PowerLog { gamma: f64 },
    /// Tabulated values, interpolated linearly in log-log coordinates.
    Table { deltas: Vec<f64>, values: Vec<f64> },
}

/// A modulus of continuity `ω_α` tagged with its class parameter `α`.
#[derive(Clone, Debug, PartialEq)]
pub struct ModulusSpec {
    alpha: f64,
    family: ModulusFamily,
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(Error::InvalidModulus(format!("α = {alpha} outside [0, 1]")));
    }
    Ok(())
}

impl ModulusSpec {
    pub fn power(alpha: f64) -> Result<Self> {
        check_alpha(alpha)?;
        Ok(Self {
            alpha,
            family: ModulusFamily::Power,
        })
    }

    pub fn power_log(alpha: f64, gamma: f64) -> Result<Self> {
        check_alpha(alpha)?;
        if !(gamma >= 0.0 && gamma.is_finite()) {
            return Err(Error::InvalidModulus(format!("γ = {gamma} must be nonnegative")));
        }
        Ok(Self {
            alpha,
            family: ModulusFamily::PowerLog { gamma },
        })
    }

    /// A tabulated modulus. Only the table structure is validated here; the
    /// modulus axioms are reported by [`ModulusSpec::axioms`].
    pub fn table(alpha: f64, deltas: Vec<f64>, values: Vec<f64>) -> Result<Self> {
        check_alpha(alpha)?;
        if deltas.len() != values.len() || deltas.len() < 2 {
            return Err(Error::InvalidModulus(
                "table needs at least two (δ, ω) rows".into(),
            ));
        }
        if deltas.iter().any(|&d| !(d > 0.0 && d.is_finite()))
            || values.iter().any(|&v| !(v > 0.0 && v.is_finite()))
        {
            return Err(Error::InvalidModulus(
                "table entries must be positive and finite".into(),
            ));
        }
        if deltas.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::InvalidModulus("δ column must be strictly increasing".into()));
        }
        Ok(Self {
            alpha,
            family: ModulusFamily::Table { deltas, values },
        })
    }

    /// Two whitespace- or comma-separated columns `δ ω(δ)` per line.
    pub fn from_file(path: impl AsRef<Path>, alpha: f64) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        let (mut deltas, mut values) = (Vec::new(), Vec::new());
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line
                .split(|c: char| c == ',' || c.is_whitespace())
                .filter(|s| !s.is_empty())
                .collect();
            let parse = |s: &str| {
                s.parse::<f64>().map_err(|e| Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: e.to_string(),
                })
            };
            if cols.len() != 2 {
                return Err(Error::Parse {
                    path: path.to_path_buf(),
                    line: i + 1,
                    message: format!("expected two columns, found {}", cols.len()),
                });
            }
            deltas.push(parse(cols[0])?);
            values.push(parse(cols[1])?);
        }
        Self::table(alpha, deltas, values)
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn family(&self) -> &ModulusFamily {
        &self.family
    }

    pub fn family_name(&self) -> &'static str {
        match self.family {
            ModulusFamily::Power => "power",
            ModulusFamily::PowerLog { .. } => "powerlog",
            ModulusFamily::Table { .. } => "table",
        }
    }

    /// `ω(δ)`; zero for `δ ≤ 0`.
    pub fn eval(&self, delta: f64) -> f64 {
        if delta <= 0.0 {
            return 0.0;
        }
        match &self.family {
            ModulusFamily::Power => delta.powf(self.alpha),
            ModulusFamily::PowerLog { gamma } => {
                delta.powf(self.alpha) * (1.0 + delta.ln().abs()).powf(*gamma)
            }
            ModulusFamily::Table { deltas, values } => table_eval(deltas, values, delta),
        }
    }

    /// Axiom check on the dyadic points `π 2^{-k}`, `k = 0..=60`.
    pub fn axioms(&self) -> AxiomReport {
        let points: Vec<f64> = (0..=60).rev().map(|k| PI * 0.5f64.powi(k)).collect();
        let mut violations = Vec::new();
        for w in points.windows(2) {
            let (lo, hi) = (self.eval(w[0]), self.eval(w[1]));
            if hi < lo * (1.0 - 1e-12) {
                violations.push(format!("decreasing: ω({:.3e}) = {lo:.6e} > ω({:.3e}) = {hi:.6e}", w[0], w[1]));
            }
        }
        let nondecreasing = violations.is_empty();
        let mut subadditive = true;
        for &d in &points[..points.len() - 1] {
            // ω lives on (0, π]; the last point is π itself
            let (single, double) = (self.eval(d), self.eval(2.0 * d));
            if double > 2.0 * single * (1.0 + 1e-12) {
                subadditive = false;
                violations.push(format!("not subadditive at δ = {d:.3e}: ω(2δ) = {double:.6e} > 2ω(δ)"));
            }
        }
        let vanishes_at_zero = self.eval(points[0]) <= 1e-6 * self.eval(PI);
        AxiomReport {
            nondecreasing,
            subadditive,
            vanishes_at_zero,
            violations,
        }
    }
}

fn table_eval(deltas: &[f64], values: &[f64], delta: f64) -> f64 {
    let last = deltas.len() - 1;
    if delta >= deltas[last] {
        return values[last];
    }
    // segment index; below the table the first segment is extrapolated
    let i = match deltas.iter().position(|&d| d > delta) {
        Some(0) | None => 0,
        Some(p) => p - 1,
    };
    let (x0, x1) = (deltas[i].ln(), deltas[i + 1].ln());
    let (y0, y1) = (values[i].ln(), values[i + 1].ln());
    (y0 + (y1 - y0) * (delta.ln() - x0) / (x1 - x0)).exp()
}

/// Outcome of the modulus-of-continuity axiom check.
#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub nondecreasing: bool,
    pub subadditive: bool,
    /// `ω(δ) → 0` as `δ → 0`; not expected of the `α = 0` power modulus.
    pub vanishes_at_zero: bool,
    pub violations: Vec<String>,
}

impl AxiomReport {
    pub fn ok(&self) -> bool {
        self.nondecreasing && self.subadditive
    }
}

/// Witness for condition (i) at one `α′`.
#[derive(Clone, Debug, Serialize)]
pub struct GrowthWitness {
    pub alpha_prime: f64,
    pub mu: Option<u32>,
}

/// Witness for condition (ii) at one `v`.
#[derive(Clone, Debug, Serialize)]
pub struct DecayWitness {
    pub v: u32,
    pub threshold: Option<usize>,
}

/// Leindler-class membership report for `ω ∈ M_α`.
#[derive(Clone, Debug, Serialize)]
pub struct MembershipReport {
    pub alpha: f64,
    pub n_max: usize,
    pub axioms: AxiomReport,
    /// `2^{μα′} ω(2^{-n-μ}) > 2 ω(2^{-n})` for all `n ≤ n_max`.
    pub condition_i: Vec<GrowthWitness>,
    /// `2^{vα} ω(2^{-n-v}) < 2 ω(2^{-n})` for `N(v) < n ≤ n_max`.
    pub condition_ii: Vec<DecayWitness>,
    /// The same search with the inequality reversed (`>`), for comparison.
    pub condition_ii_reversed: Vec<DecayWitness>,
    pub member: bool,
}

const STRICT: f64 = 1e-12;

/// Search witnesses for the two dyadic conditions defining `M_α`.
pub fn class_membership_check(omega: &ModulusSpec, alpha: f64, n_max: usize) -> Result<MembershipReport> {
    check_alpha(alpha)?;
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let w = |k: usize| omega.eval(0.5f64.powi(k as i32));
    let axioms = omega.axioms();

    let mut primes: Vec<f64> = [alpha + 0.1, alpha + 0.25, 1.0]
        .into_iter()
        .filter(|&p| p > alpha && p <= 1.0 + 1e-12)
        .map(|p| p.min(1.0))
        .collect();
    primes.dedup_by(|x, y| (*x - *y).abs() < 1e-12);

    let condition_i: Vec<GrowthWitness> = primes
        .into_iter()
        .map(|alpha_prime| {
            let mu = (1..=20u32).find(|&mu| {
                let scale = 2f64.powf(mu as f64 * alpha_prime);
                (1..=n_max).all(|n| scale * w(n + mu as usize) > 2.0 * w(n) * (1.0 + STRICT))
            });
            GrowthWitness { alpha_prime, mu }
        })
        .collect();

    let decay = |strictly_less: bool| -> Vec<DecayWitness> {
        (1..=8u32)
            .map(|v| {
                let scale = 2f64.powf(v as f64 * alpha);
                let holds = |n: usize| {
                    let (lhs, rhs) = (scale * w(n + v as usize), 2.0 * w(n));
                    if strictly_less {
                        lhs < rhs * (1.0 - STRICT)
                    } else {
                        lhs > rhs * (1.0 + STRICT)
                    }
                };
                // smallest N < n_max with the inequality on (N, n_max]
                let threshold = (0..n_max).find(|&big_n| (big_n + 1..=n_max).all(holds));
                DecayWitness { v, threshold }
            })
            .collect()
    };
    let condition_ii = decay(true);
    let condition_ii_reversed = decay(false);

    let member = axioms.ok()
        && condition_i.iter().all(|c| c.mu.is_some())
        && condition_ii.iter().all(|c| c.threshold.is_some());
    Ok(MembershipReport {
        alpha,
        n_max,
        axioms,
        condition_i,
        condition_ii,
        condition_ii_reversed,
        member,
    })
}

/// Which grid shifts enter a discrete sup.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum ShiftSet {
    /// Every shift `1 ≤ j ≤ M/2`.
    #[default]
    All,
    /// Dyadic shifts `j = 1, 2, 4, ..., ≤ M/2`.
    Dyadic,
}

impl ShiftSet {
    fn indices(self, m: usize, max_j: usize) -> Vec<usize> {
        let top = max_j.min(m / 2);
        match self {
            ShiftSet::All => (1..=top).collect(),
            ShiftSet::Dyadic => std::iter::successors(Some(1usize), |j| Some(j * 2))
                .take_while(|&j| j <= top)
                .collect(),
        }
    }
}

/// Lane-wise max of `|x - y|`; the fixed lane count lets the loop vectorize.
fn max_abs_diff(xs: &[f64], ys: &[f64]) -> f64 {
    const LANES: usize = 8;
    let mut lanes = [0.0f64; LANES];
    let mut xc = xs.chunks_exact(LANES);
    let mut yc = ys.chunks_exact(LANES);
    for (x, y) in (&mut xc).zip(&mut yc) {
        for i in 0..LANES {
            lanes[i] = lanes[i].max((x[i] - y[i]).abs());
        }
    }
    let rest = xc
        .remainder()
        .iter()
        .zip(yc.remainder())
        .fold(0.0f64, |acc, (x, y)| acc.max((x - y).abs()));
    lanes.iter().fold(rest, |acc, &v| acc.max(v))
}

/// `max_i |v[i + j] - v[i]|` over the periodic grid.
fn max_shift_difference(values: &Samples, j: usize) -> f64 {
    match values {
        Samples::Real(v) => {
            let m = v.len();
            max_abs_diff(&v[j..], &v[..m - j]).max(max_abs_diff(&v[..j], &v[m - j..]))
        }
        Samples::Complex(v) => {
            let m = v.len();
            let head = v[j..].iter().zip(&v[..m - j]);
            let tail = v[..j].iter().zip(&v[m - j..]);
            head.chain(tail)
                .fold(0.0f64, |acc, (x, y)| acc.max((x - y).norm_sqr()))
                .sqrt()
        }
    }
}

enum Samples {
    Real(Vec<f64>),
    Complex(Vec<Complex64>),
}

impl Samples {
    fn of(f: &SampledFunction) -> Self {
        if f.is_real() {
            Samples::Real(f.values().iter().map(|v| v.re).collect())
        } else {
            Samples::Complex(f.values().to_vec())
        }
    }

    /// Upper bound for every pairwise difference.
    fn oscillation(&self) -> f64 {
        match self {
            Samples::Real(v) => {
                let (lo, hi) = v.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &x| (lo.min(x), hi.max(x)));
                hi - lo
            }
            Samples::Complex(v) => 2.0 * v.iter().fold(0.0f64, |acc, z| acc.max(z.norm())),
        }
    }
}

/// `max_j D_j / ω(2πj/M)` over all shifts, scanning shifts in increasing
/// order and stopping once `oscillation / ω(d_j)` cannot beat the running
/// sup. Exact, since ω is nondecreasing.
fn pruned_seminorm(f: &SampledFunction, omega: &ModulusSpec) -> f64 {
    const BLOCK: usize = 128;
    let m = f.grid_size();
    let samples = Samples::of(f);
    let oscillation = samples.oscillation();
    let mut best = 0.0f64;
    let mut start = 1;
    while start <= m / 2 {
        if oscillation <= best * omega.eval(grid_point(start, m)) {
            break;
        }
        let end = (start + BLOCK).min(m / 2 + 1);
        let local = (start..end)
            .into_par_iter()
            .map(|j| {
                let d = max_shift_difference(&samples, j);
                if d == 0.0 {
                    0.0
                } else {
                    d / omega.eval(grid_point(j, m))
                }
            })
            .reduce(|| 0.0, f64::max);
        best = best.max(local);
        start = end;
    }
    best
}

/// Per-shift maxima `D_j` of a sampled function.
#[derive(Clone, Debug)]
pub struct ShiftProfile {
    grid_size: usize,
    shifts: Vec<usize>,
    maxima: Vec<f64>,
}

impl ShiftProfile {
    pub fn new(f: &SampledFunction, set: ShiftSet) -> Self {
        Self::up_to(f, set, usize::MAX)
    }

    fn up_to(f: &SampledFunction, set: ShiftSet, max_j: usize) -> Self {
        let m = f.grid_size();
        let samples = Samples::of(f);
        let shifts = set.indices(m, max_j);
        let maxima = shifts
            .par_iter()
            .map(|&j| max_shift_difference(&samples, j))
            .collect();
        Self {
            grid_size: m,
            shifts,
            maxima,
        }
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Shift lengths `2πj/M` in radians.
    pub fn deltas(&self) -> Vec<f64> {
        self.shifts.iter().map(|&j| grid_point(j, self.grid_size)).collect()
    }

    /// Discrete `ω(f, δ)`: the largest `D_j` with `2πj/M ≤ δ`.
    pub fn modulus(&self, delta: f64) -> f64 {
        let m = self.grid_size as f64;
        let limit = (delta * m / TAU * (1.0 + 1e-12)).floor();
        self.shifts
            .iter()
            .zip(&self.maxima)
            .take_while(|(&j, _)| j as f64 <= limit)
            .fold(0.0, |acc, (_, &d)| acc.max(d))
    }

    /// `max_j D_j / ω(2πj/M)`.
    pub fn seminorm(&self, omega: &ModulusSpec) -> f64 {
        self.shifts
            .iter()
            .zip(&self.maxima)
            .map(|(&j, &d)| {
                if d == 0.0 {
                    0.0
                } else {
                    d / omega.eval(grid_point(j, self.grid_size))
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Discrete modulus of continuity `ω(f, δ)`.
///
/// Uses the grid shifts not exceeding `δ`; when `f` carries an evaluator the
/// exact shift `δ` is added as one more candidate, evaluated at the grid
/// points.
pub fn modulus_of_continuity(f: &SampledFunction, delta: f64) -> f64 {
    if delta <= 0.0 {
        return 0.0;
    }
    let m = f.grid_size();
    let max_j = (delta * m as f64 / TAU * (1.0 + 1e-12)).floor() as usize;
    let grid = ShiftProfile::up_to(f, ShiftSet::All, max_j).modulus(delta);
    match f.evaluator() {
        Some(eval) if delta < PI => {
            let exact = (0..m)
                .into_par_iter()
                .map(|i| (eval(grid_point(i, m) + delta) - f.values()[i]).norm())
                .reduce(|| 0.0, f64::max);
            grid.max(exact)
        }
        _ => grid,
    }
}

/// Discrete generalized Hölder seminorm `A^ω(f)` over all grid shifts.
pub fn holder_seminorm(f: &SampledFunction, omega: &ModulusSpec) -> f64 {
    pruned_seminorm(f, omega)
}

/// `‖f‖_ω = ‖f‖_∞ + A^ω(f)`.
pub fn holder_norm(f: &SampledFunction, omega: &ModulusSpec) -> f64 {
    f.sup_norm() + holder_seminorm(f, omega)
}

/// Uniform norm and seminorm with the shifts and grid that produced them.
#[derive(Clone, Debug, Serialize)]
pub struct HolderMeasurement {
    pub uniform_norm: f64,
    pub seminorm: f64,
    pub delta_grid: Vec<f64>,
    pub grid_size: usize,
}

impl HolderMeasurement {
    pub fn norm(&self) -> f64 {
        self.uniform_norm + self.seminorm
    }
}

pub fn holder_measurement(f: &SampledFunction, omega: &ModulusSpec, shifts: ShiftSet) -> HolderMeasurement {
    let m = f.grid_size();
    let seminorm = match shifts {
        ShiftSet::All => pruned_seminorm(f, omega),
        ShiftSet::Dyadic => ShiftProfile::new(f, shifts).seminorm(omega),
    };
    HolderMeasurement {
        uniform_norm: f.sup_norm(),
        seminorm,
        delta_grid: shifts.indices(m, m / 2).into_iter().map(|j| grid_point(j, m)).collect(),
        grid_size: m,
    }
}

/// One row of the modulus-equivalence comparison.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceRow {
    pub delta: f64,
    pub omega_f: f64,
    pub omega_composed: f64,
    /// `ω(f∘θ_a^{-1}, δ) / ω(f, δ)`; absent when both moduli vanish.
    pub ratio: Option<f64>,
}

/// Two-sided comparison `((1-|a|)/2) ω(f,δ) ≤ ω(f∘θ_a^{-1},δ) ≤ (2/(1-|a|)) ω(f,δ)`.
#[derive(Clone, Debug, Serialize)]
pub struct EquivalenceReport {
    pub lower_factor: f64,
    pub upper_factor: f64,
    pub min_ratio: Option<f64>,
    pub max_ratio: Option<f64>,
    pub rows: Vec<EquivalenceRow>,
    pub holds: bool,
}

/// Compare moduli of `f` and `f ∘ θ_a^{-1}` on matching `M`-point grids.
pub fn modulus_equivalence_check(
    a: &MoebiusParameter,
    f: &SampledFunction,
    deltas: &[f64],
) -> Result<EquivalenceReport> {
    if deltas.iter().any(|&d| !(d > 0.0)) {
        return Err(Error::InvalidArgument("shifts must be positive".into()));
    }
    let eval = f.evaluator().ok_or_else(|| {
        Error::InvalidArgument("modulus equivalence needs a function with an evaluator".into())
    })?;
    let m = f.grid_size();
    let composed = SampledFunction::from_values(phase_samples(a, |x| eval(x), m))?;
    let max_delta = deltas.iter().cloned().fold(0.0, f64::max);
    let max_j = (max_delta * m as f64 / TAU * (1.0 + 1e-12)).floor() as usize;
    let pf = ShiftProfile::up_to(f, ShiftSet::All, max_j);
    let pc = ShiftProfile::up_to(&composed, ShiftSet::All, max_j);

    let r = a.modulus();
    let (lower_factor, upper_factor) = ((1.0 - r) / 2.0, 2.0 / (1.0 - r));
    let mut rows = Vec::with_capacity(deltas.len());
    let mut holds = true;
    for &delta in deltas {
        let (omega_f, omega_composed) = (pf.modulus(delta), pc.modulus(delta));
        let ratio = if omega_f == 0.0 && omega_composed == 0.0 {
            None
        } else {
            Some(omega_composed / omega_f)
        };
        if let Some(q) = ratio {
            holds &= q >= lower_factor && q <= upper_factor;
        }
        rows.push(EquivalenceRow {
            delta,
            omega_f,
            omega_composed,
            ratio,
        });
    }
    let ratios = rows.iter().filter_map(|r| r.ratio);
    let min_ratio = ratios.clone().reduce(f64::min);
    let max_ratio = ratios.reduce(f64::max);
    Ok(EquivalenceReport {
        lower_factor,
        upper_factor,
        min_ratio,
        max_ratio,
        rows,
        holds,
    })
}

/// `sup_m (Σ_{n≤m} a_n) / a_m` for a positive sequence.
pub(crate) fn partial_sum_constant(seq: &[f64]) -> f64 {
    let mut acc = 0.0;
    let mut sup = 0.0f64;
    for &a in seq {
        acc += a;
        sup = sup.max(acc / a);
    }
    sup
}

/// Empirical constants of the two dyadic sums comparing `ω_β` with `ω_α`.
#[derive(Clone, Debug, Serialize)]
pub struct Lemma1Report {
    pub n_max: usize,
    /// `sup_n Σ_{k=1}^{n} r_k / r_n` with `r_k = ω_β(2^{-k})/ω_α(2^{-k})`.
    pub head_constant: f64,
    /// `sup_n Σ_{k≥n} q_k / q_n` with `q_k = ω_α(2^{-k})/ω_β(2^{-k})`.
    pub tail_constant: f64,
}

impl Lemma1Report {
    pub fn constant(&self) -> f64 {
        self.head_constant.max(self.tail_constant)
    }
}

/// Evaluate the head sum of `ω_β/ω_α` and the tail sum of `ω_α/ω_β` over
/// dyadic points and report the smallest constants bounding them by their
/// last (resp. first) term for `n ≤ n_max`.
pub fn lemma1_sum_check(omega_alpha: &ModulusSpec, omega_beta: &ModulusSpec, n_max: usize) -> Result<Lemma1Report> {
    if omega_beta.alpha() >= omega_alpha.alpha() {
        return Err(Error::InvalidArgument(format!(
            "need β < α, got α = {}, β = {}",
            omega_alpha.alpha(),
            omega_beta.alpha()
        )));
    }
    if n_max == 0 {
        return Err(Error::InvalidArgument("n_max must be positive".into()));
    }
    let ratio = |k: usize| {
        let d = 0.5f64.powi(k as i32);
        omega_beta.eval(d) / omega_alpha.eval(d)
    };
    let head: Vec<f64> = (1..=n_max).map(ratio).collect();
    let head_constant = partial_sum_constant(&head);

    let mut tail_constant = 0.0f64;
    for n in 1..=n_max {
        let first = 1.0 / ratio(n);
        let mut acc = 0.0;
        for k in n..n + 1000 {
            let term = 1.0 / ratio(k);
            if !term.is_finite() {
                break;
            }
            acc += term;
            if term < 1e-17 * acc {
                break;
            }
        }
        tail_constant = tail_constant.max(acc / first);
    }
    Ok(Lemma1Report {
        n_max,
        head_constant,
        tail_constant,
    })
}
