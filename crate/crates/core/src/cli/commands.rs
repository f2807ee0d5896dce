//! The five subcommands. Each returns its rendered artifact; writing and exit
//! codes are handled by the caller.

use std::path::Path;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use crate::bounds::{loglog_slope, running_max_drift, thm1_bound, verify_rates, Branch, ErrorReport, RateOptions};
use crate::corpus::DEFAULT_CERTIFICATION_GRID;
use crate::error::{Error, Result};
use crate::holder::{class_membership_check, lemma1_sum_check, modulus_equivalence_check};
use crate::phase::{grid_point, MoebiusParameter};
use crate::sampling::{coefficients, inner_product, SampledFunction};
use crate::summation::{lebesgue_constant, vp_mean, vp_mean_by_averaging, VPSchedule};

use super::config::{ExperimentConfig, SweepConfig};
use super::output::{json, Fixed, Format, Table};

/// `t, θ_a(t), p_a(t)` and the round-trip residual on the `M`-point grid.
pub fn basis(cfg: &ExperimentConfig) -> Table {
    let a = cfg.a;
    let mut table = Table::new(vec!["t", "theta_a", "p_a", "roundtrip_error"]);
    for j in 0..cfg.grid {
        let t = grid_point(j, cfg.grid);
        let theta = a.theta(t);
        table.push(vec![
            t.into(),
            theta.into(),
            a.poisson_weight(t).into(),
            (a.theta_inverse(theta) - t).into(),
        ]);
    }
    table
}

/// Fitted slopes and ratio drifts of an `approx` run.
#[derive(Clone, Debug, Serialize)]
pub struct RateSummary {
    pub slope_uniform: Option<Fixed>,
    pub slope_holder: Option<Fixed>,
    pub drift_uniform: Option<Fixed>,
    pub drift_holder: Option<Fixed>,
}

impl RateSummary {
    fn of(reports: &[ErrorReport]) -> Self {
        let ns: Vec<usize> = reports.iter().map(|r| r.n).collect();
        let x: Vec<f64> = ns.iter().map(|&n| n as f64).collect();
        let uniform: Vec<f64> = reports.iter().map(|r| r.err_uniform).collect();
        let holder: Vec<f64> = reports.iter().map(|r| r.err_holder).collect();
        let ratios_u: Vec<Option<f64>> = reports.iter().map(|r| r.ratio_uniform).collect();
        let ratios_h: Vec<Option<f64>> = reports.iter().map(|r| r.ratio_holder).collect();
        Self {
            slope_uniform: loglog_slope(&x, &uniform).map(Fixed),
            slope_holder: loglog_slope(&x, &holder).map(Fixed),
            drift_uniform: running_max_drift(&ns, &ratios_u).map(Fixed),
            drift_holder: running_max_drift(&ns, &ratios_h).map(Fixed),
        }
    }
}

/// Certify the corpus entry, then measure errors and bounds for every order.
pub fn approx(cfg: &ExperimentConfig) -> Result<(Table, RateSummary)> {
    cfg.corpus.certify(DEFAULT_CERTIFICATION_GRID)?;
    let options = RateOptions {
        shifts: cfg.shifts,
        orientation: cfg.orientation,
    };
    let reports = verify_rates(
        &cfg.a,
        cfg.corpus.evaluator(),
        &cfg.omega_alpha,
        &cfg.omega_beta,
        &cfg.schedule,
        &cfg.orders,
        cfg.grid,
        options,
    )?;
    let mut table = Table::new(vec![
        "n",
        "lambda_n",
        "err_uniform",
        "err_holder_beta",
        "bound_thm3",
        "bound_thm4",
        "ratio3",
        "ratio4",
        "branch",
    ]);
    for r in &reports {
        table.push(vec![
            r.n.into(),
            r.lambda.into(),
            r.err_uniform.into(),
            r.err_holder.into(),
            r.bound_uniform.into(),
            r.bound_holder.into(),
            r.ratio_uniform.into(),
            r.ratio_holder.into(),
            r.branch.label().into(),
        ]);
    }
    Ok((table, RateSummary::of(&reports)))
}

/// `‖V_n‖` against `3 + ln((2n - λ_n)/λ_n)` for every order.
pub fn lebesgue(cfg: &ExperimentConfig) -> Result<Table> {
    let mut table = Table::new(vec!["n", "lambda_n", "lebesgue_constant", "bound_thm1", "ratio"]);
    for &n in &cfg.orders {
        let lambda = cfg.schedule.lambda(n)?;
        let norm = lebesgue_constant(n, lambda)?;
        let bound = thm1_bound(n, lambda, 1.0)?;
        table.push(vec![n.into(), lambda.into(), norm.into(), bound.into(), (norm / bound).into()]);
    }
    Ok(table)
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: &'static str,
    pub passed: bool,
    pub measured: Fixed,
    pub threshold: Fixed,
    pub detail: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub a: MoebiusParameter,
    pub corpus: String,
    pub branch: Branch,
    pub checks: Vec<Check>,
    pub passed: bool,
}

fn check(name: &'static str, measured: f64, threshold: f64, passed: bool, detail: impl Into<String>) -> Check {
    Check {
        name,
        passed,
        measured: Fixed(measured),
        threshold: Fixed(threshold),
        detail: detail.into(),
    }
}

fn orthonormality(a: &MoebiusParameter) -> Result<Check> {
    let (m, top) = (1024, 16i32);
    let basis: Vec<SampledFunction> = (-top..=top)
        .map(|k| SampledFunction::from_fn(m, |x| Complex64::from_polar(1.0, k as f64 * a.theta(x))))
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (j, f) in basis.iter().enumerate() {
        for (k, g) in basis.iter().enumerate() {
            let target = if j == k { 1.0 } else { 0.0 };
            worst = worst.max((inner_product(a, f, g)? - target).norm());
        }
    }
    Ok(check("orthonormality", worst, 1e-10, worst <= 1e-10, format!("|j|,|k| ≤ {top}, M = {m}")))
}

fn projection(a: &MoebiusParameter) -> Result<Check> {
    let degree = 8;
    let truth: Vec<Complex64> = (-degree..=degree)
        .map(|k: i32| Complex64::from_polar(1.0 / (1.0 + (k * k) as f64), k as f64))
        .collect();
    let series = truth.clone();
    let a_copy = *a;
    let f = move |x: f64| {
        let t = a_copy.theta(x);
        series
            .iter()
            .enumerate()
            .map(|(i, c)| c * Complex64::from_polar(1.0, (i as i32 - degree) as f64 * t))
            .sum::<Complex64>()
    };
    let c = coefficients(a, f, degree as usize, 64)?;
    let worst = c
        .as_slice()
        .iter()
        .zip(&truth)
        .fold(0.0f64, |acc, (u, v)| acc.max((u - v).norm()));
    Ok(check("projection", worst, 1e-12, worst <= 1e-12, "degree-8 polynomial, M = 64"))
}

fn multiplier_equivalence(cfg: &ExperimentConfig) -> Result<Check> {
    let c = coefficients(&cfg.a, |x| cfg.corpus.eval(x), 64, 512)?;
    let mut worst = 0.0f64;
    for schedule in [VPSchedule::ConstantOne, VPSchedule::Half, VPSchedule::Full] {
        for n in [1usize, 7, 32, 65] {
            for x in [0.3, 2.0, 5.5] {
                let d = vp_mean(&c, n, &schedule, x)? - vp_mean_by_averaging(&c, n, &schedule, x)?;
                worst = worst.max(d.norm());
            }
        }
    }
    Ok(check("multiplier_equivalence", worst, 1e-12, worst <= 1e-12, "schedules one/half/full, n ≤ 65"))
}

fn lebesgue_domination() -> Result<Check> {
    let mut worst = 0.0f64;
    for schedule in [VPSchedule::ConstantOne, VPSchedule::Half, VPSchedule::Full] {
        for n in 1..=128 {
            let lambda = schedule.lambda(n)?;
            worst = worst.max(lebesgue_constant(n, lambda)? / thm1_bound(n, lambda, 1.0)?);
        }
    }
    Ok(check("lebesgue_domination", worst, 1.0, worst <= 1.0, "max ‖V_n‖ / (3 + ln((2n-λ)/λ)), n ≤ 128"))
}

fn modulus_equivalence(cfg: &ExperimentConfig) -> Result<Check> {
    let f = cfg.corpus.sample(2048)?;
    let deltas: Vec<f64> = (1..=10).map(|k| std::f64::consts::PI * 0.5f64.powi(k)).collect();
    let report = modulus_equivalence_check(&cfg.a, &f, &deltas)?;
    let lo = report.min_ratio.unwrap_or(1.0);
    let hi = report.max_ratio.unwrap_or(1.0);
    Ok(check(
        "modulus_equivalence",
        hi.max(1.0 / lo),
        report.upper_factor,
        report.holds,
        format!(
            "ratios in [{lo:.4}, {hi:.4}] ⊂ [{:.4}, {:.4}]",
            report.lower_factor, report.upper_factor
        ),
    ))
}

fn lemma1(cfg: &ExperimentConfig) -> Result<Check> {
    let k20 = lemma1_sum_check(&cfg.omega_alpha, &cfg.omega_beta, 20)?.constant();
    let k40 = lemma1_sum_check(&cfg.omega_alpha, &cfg.omega_beta, 40)?.constant();
    let change = (k40 - k20).abs() / k20;
    Ok(check(
        "lemma1_sums",
        change,
        0.05,
        k40.is_finite() && change < 0.05,
        format!("K(20) = {k20:.6}, K(40) = {k40:.6}"),
    ))
}

fn membership(cfg: &ExperimentConfig) -> Result<Check> {
    let alpha = cfg.omega_alpha.alpha();
    let report = class_membership_check(&cfg.omega_alpha, alpha, 40)?;
    let mus: Vec<String> = report
        .condition_i
        .iter()
        .map(|w| match w.mu {
            Some(mu) => format!("α′={:.2}: μ={mu}", w.alpha_prime),
            None => format!("α′={:.2}: no μ", w.alpha_prime),
        })
        .collect();
    let detail = if report.axioms.violations.is_empty() {
        mus.join(", ")
    } else {
        format!("{}; {}", mus.join(", "), report.axioms.violations.join("; "))
    };
    Ok(check("class_membership", alpha, alpha, report.member, detail))
}

fn certification(cfg: &ExperimentConfig) -> Check {
    match cfg.corpus.certify(DEFAULT_CERTIFICATION_GRID) {
        Ok(c) => check("corpus_certification", c.relative_change, 0.05, true, format!("A = {:.6e}", c.seminorm_refined)),
        Err(e) => check("corpus_certification", f64::NAN, 0.05, false, e.to_string()),
    }
}

/// The invariant suite on the configured parameter, corpus entry and moduli.
pub fn verify(cfg: &ExperimentConfig) -> Result<VerifyReport> {
    let checks = vec![
        orthonormality(&cfg.a)?,
        projection(&cfg.a)?,
        multiplier_equivalence(cfg)?,
        lebesgue_domination()?,
        modulus_equivalence(cfg)?,
        lemma1(cfg)?,
        membership(cfg)?,
        certification(cfg),
    ];
    let passed = checks.iter().all(|c| c.passed);
    Ok(VerifyReport {
        a: cfg.a,
        corpus: cfg.corpus.name().to_string(),
        branch: Branch::select(cfg.omega_alpha.alpha(), cfg.omega_beta.alpha()),
        checks,
        passed,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct CellRecord {
    pub index: usize,
    pub file: String,
    pub a: MoebiusParameter,
    pub schedule: String,
    pub corpus: String,
    pub alpha: Fixed,
    pub beta: Fixed,
    pub modulus: &'static str,
    pub status: &'static str,
    pub error: Option<String>,
    pub summary: Option<RateSummary>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Manifest {
    pub count: usize,
    pub failed: usize,
    pub orders: Vec<usize>,
    pub grid: usize,
    pub cells: Vec<CellRecord>,
}

/// Render `approx` for one cell in the requested format.
pub fn render_approx(table: &Table, summary: &RateSummary, format: Format) -> String {
    match format {
        Format::Csv => table.render(Format::Csv),
        Format::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                rows: &'a Table,
                summary: &'a RateSummary,
            }
            json(&Out { rows: table, summary })
        }
    }
}

/// Run every cell on the current rayon pool, write `cell_{i}` files and the
/// manifest into `dir`. Failed cells are recorded, not fatal.
pub fn sweep(cfg: &SweepConfig, dir: &Path) -> Result<Manifest> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let ext = cfg.format.extension();
    let mut results: Vec<(usize, Result<(Table, RateSummary)>)> = cfg
        .cells
        .par_iter()
        .enumerate()
        .map(|(i, cell)| (i, approx(cell)))
        .collect();
    results.sort_by_key(|(i, _)| *i);

    let mut records = Vec::with_capacity(results.len());
    for (i, result) in results {
        let cell = &cfg.cells[i];
        let file = format!("cell_{i}.{ext}");
        let (status, error, summary) = match result {
            Ok((table, summary)) => {
                let path = dir.join(&file);
                let text = render_approx(&table, &summary, cfg.format);
                std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
                ("ok", None, Some(summary))
            }
            Err(e) => ("failed", Some(e.to_string()), None),
        };
        records.push(CellRecord {
            index: i,
            file,
            a: cell.a,
            schedule: cell.schedule_label.clone(),
            corpus: cell.corpus.name().to_string(),
            alpha: Fixed(cell.omega_alpha.alpha()),
            beta: Fixed(cell.omega_beta.alpha()),
            modulus: cell.omega_alpha.family_name(),
            status,
            error,
            summary,
        });
    }
    let first = cfg.cells.first();
    let manifest = Manifest {
        count: records.len(),
        failed: records.iter().filter(|r| r.status != "ok").count(),
        orders: first.map(|c| c.orders.clone()).unwrap_or_default(),
        grid: first.map_or(0, |c| c.grid),
        cells: records,
    };
    let path = dir.join("manifest.json");
    std::fs::write(&path, json(&manifest)).map_err(|e| Error::io(&path, e))?;
    Ok(manifest)
}
