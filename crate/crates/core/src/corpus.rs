//! Test functions with known Hölder-type regularity.
//!
//! Entries are closed-form evaluators, so any grid can be sampled exactly.
//! Each carries the modulus it is certified against; [`CorpusEntry::certify`]
//! measures the seminorm on two grids and rejects entries whose value moves
//! by more than 5% under doubling.

use std::f64::consts::TAU;
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::holder::{holder_seminorm, ModulusSpec};
use crate::sampling::{Evaluator, SampledFunction};
use crate::spectral;

/// Number of octaves kept in the Weierstrass-type sums.
pub const WEIERSTRASS_TERMS: u32 = 18;

/// Relative seminorm change tolerated under grid doubling.
pub const CERTIFICATION_TOLERANCE: f64 = 0.05;

/// Grid used for certification when none is given.
pub const DEFAULT_CERTIFICATION_GRID: usize = 2048;

#[derive(Clone)]
pub struct CorpusEntry {
    name: String,
    evaluator: Evaluator,
    certified_alpha: f64,
    certified_modulus: ModulusSpec,
    notes: String,
}

impl std::fmt::Debug for CorpusEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CorpusEntry")
            .field("name", &self.name)
            .field("certified_alpha", &self.certified_alpha)
            .field("certified_modulus", &self.certified_modulus)
            .finish_non_exhaustive()
    }
}

/// Seminorms on a grid and its refinement.
#[derive(Clone, Debug, Serialize)]
pub struct Certification {
    pub name: String,
    pub grid: usize,
    pub seminorm: f64,
    pub seminorm_refined: f64,
    pub relative_change: f64,
}

impl CorpusEntry {
    pub fn new(
        name: impl Into<String>,
        evaluator: Evaluator,
        certified_modulus: ModulusSpec,
        notes: impl Into<String>,
    ) -> Self {
        Self {
            name: name.into(),
            evaluator,
            certified_alpha: certified_modulus.alpha(),
            certified_modulus,
            notes: notes.into(),
        }
    }

    /// A user function given by `M` equally spaced samples on `[0, 2π)`, one
    /// value (or `re im` pair) per line, extended to all `x` by trigonometric
    /// interpolation.
    pub fn from_table(path: impl AsRef<Path>, certified_modulus: ModulusSpec) -> Result<Self> {
        let path = path.as_ref();
        let values = read_table(path)?;
        let evaluator = trigonometric_interpolant(&values);
        Ok(Self::new(
            format!("file:{}", path.display()),
            evaluator,
            certified_modulus,
            format!("{} samples, trigonometric interpolation", values.len()),
        ))
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn evaluator(&self) -> &Evaluator {
        &self.evaluator
    }

    pub fn certified_alpha(&self) -> f64 {
        self.certified_alpha
    }

    pub fn certified_modulus(&self) -> &ModulusSpec {
        &self.certified_modulus
    }

    pub fn notes(&self) -> &str {
        &self.notes
    }

    pub fn eval(&self, x: f64) -> Complex64 {
        (self.evaluator)(x)
    }

    pub fn sample(&self, m: usize) -> Result<SampledFunction> {
        SampledFunction::from_evaluator(m, self.evaluator.clone())
    }

    /// Seminorm against the certified modulus on `m` and `2m` points.
    pub fn certify(&self, m: usize) -> Result<Certification> {
        let coarse = holder_seminorm(&self.sample(m)?, &self.certified_modulus);
        let fine = holder_seminorm(&self.sample(2 * m)?, &self.certified_modulus);
        let fail = |reason: String| Error::Certification {
            name: self.name.clone(),
            reason,
        };
        if !(coarse.is_finite() && fine.is_finite()) {
            return Err(fail(format!("seminorm not finite ({coarse}, {fine})")));
        }
        let relative_change = if coarse == 0.0 && fine == 0.0 {
            0.0
        } else {
            (fine - coarse).abs() / coarse.max(fine)
        };
        if relative_change > CERTIFICATION_TOLERANCE {
            return Err(fail(format!(
                "seminorm moved from {coarse:.6e} to {fine:.6e} between M = {m} and M = {} ({:.1}% > {:.0}%)",
                2 * m,
                100.0 * relative_change,
                100.0 * CERTIFICATION_TOLERANCE
            )));
        }
        Ok(Certification {
            name: self.name.clone(),
            grid: m,
            seminorm: coarse,
            seminorm_refined: fine,
            relative_change,
        })
    }
}

fn real(f: impl Fn(f64) -> f64 + Send + Sync + 'static) -> Evaluator {
    Arc::new(move |x| Complex64::new(f(x), 0.0))
}

fn power(alpha: f64) -> ModulusSpec {
    ModulusSpec::power(alpha).expect("built-in exponent in [0, 1]")
}

fn cusp(alpha: f64) -> CorpusEntry {
    CorpusEntry::new(
        format!("cusp_{alpha}"),
        real(move |x| (x / 2.0).sin().abs().powf(alpha)),
        power(alpha),
        format!("|sin(x/2)|^{alpha}; cusp at 0 with exact exponent {alpha}"),
    )
}

fn weierstrass(alpha: f64, modulus: ModulusSpec) -> CorpusEntry {
    let tail = 2f64.powf(-alpha * WEIERSTRASS_TERMS as f64);
    CorpusEntry::new(
        format!("weierstrass_{alpha}"),
        real(move |x| {
            (0..=WEIERSTRASS_TERMS)
                .map(|k| 2f64.powf(-alpha * k as f64) * (2f64.powi(k as i32) * x).cos())
                .sum()
        }),
        modulus,
        format!("Σ_{{k≤{WEIERSTRASS_TERMS}}} 2^(-{alpha}k) cos(2^k x); truncation error ≤ {tail:.3e}"),
    )
}

/// Names accepted by [`lookup`].
pub const BUILTIN_NAMES: [&str; 8] = [
    "const_one",
    "cusp_0.25",
    "cusp_0.5",
    "cusp_0.75",
    "weierstrass_0.5",
    "weierstrass_1",
    "lipschitz_triangle",
    "exp_cos",
];

pub fn builtin_corpus() -> Vec<CorpusEntry> {
    BUILTIN_NAMES
        .iter()
        .map(|name| lookup(name).expect("built-in name"))
        .collect()
}

pub fn lookup(name: &str) -> Result<CorpusEntry> {
    Ok(match name {
        "const_one" => CorpusEntry::new("const_one", real(|_| 1.0), power(1.0), "f ≡ 1; reproduced by every mean"),
        "cusp_0.25" => cusp(0.25),
        "cusp_0.5" => cusp(0.5),
        "cusp_0.75" => cusp(0.75),
        "weierstrass_0.5" => weierstrass(0.5, power(0.5)),
        "weierstrass_1" => weierstrass(
            1.0,
            ModulusSpec::power_log(1.0, 1.0).expect("valid power-log modulus"),
        ),
        "lipschitz_triangle" => CorpusEntry::new(
            "lipschitz_triangle",
            real(|x| {
                let r = x.rem_euclid(TAU);
                r.min(TAU - r)
            }),
            power(1.0),
            "distance to the nearest multiple of 2π; Lipschitz constant 1, kinks at 0 and π",
        ),
        "exp_cos" => CorpusEntry::new(
            "exp_cos",
            real(|x| x.cos().exp()),
            power(1.0),
            "exp(cos x); entire, coefficients decay faster than any power",
        ),
        _ => return Err(Error::UnknownCorpusEntry(name.to_string())),
    })
}

/// A built-in name or `file:PATH`; file entries are certified against
/// `modulus`.
pub fn resolve(selector: &str, modulus: &ModulusSpec) -> Result<CorpusEntry> {
    match selector.strip_prefix("file:") {
        Some(path) => CorpusEntry::from_table(path, modulus.clone()),
        None => lookup(selector),
    }
}

fn read_table(path: &Path) -> Result<Vec<Complex64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let parse_error = |message: String| Error::Parse {
            path: path.to_path_buf(),
            line: i + 1,
            message,
        };
        let cols: Vec<f64> = line
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<f64>().map_err(|e| parse_error(e.to_string())))
            .collect::<Result<_>>()?;
        match cols[..] {
            [re] => values.push(Complex64::new(re, 0.0)),
            [re, im] => values.push(Complex64::new(re, im)),
            _ => return Err(parse_error(format!("expected 1 or 2 columns, found {}", cols.len()))),
        }
    }
    if values.len() < crate::sampling::MIN_GRID {
        return Err(Error::GridTooSmall {
            grid: values.len(),
            required: crate::sampling::MIN_GRID,
        });
    }
    Ok(values)
}

/// The trigonometric polynomial of degree `⌊M/2⌋` through `M` equispaced
/// samples; for even `M` the Nyquist coefficient is split between `±M/2`.
fn trigonometric_interpolant(values: &[Complex64]) -> Evaluator {
    let m = values.len();
    let half = m / 2;
    let spectrum = spectral::forward(values);
    let scale = 1.0 / m as f64;
    let mut coeffs: Vec<Complex64> = (-(half as isize)..=half as isize)
        .map(|k| spectrum[k.rem_euclid(m as isize) as usize] * scale)
        .collect();
    if m.is_multiple_of(2) {
        let nyquist = spectrum[half] * scale * 0.5;
        coeffs[0] = nyquist;
        coeffs[2 * half] = nyquist;
    }
    Arc::new(move |x| spectral::laurent_eval(&coeffs, x))
}
