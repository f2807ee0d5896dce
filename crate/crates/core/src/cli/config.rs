//! Experiment configuration: a flat `key = value` file overridden by flags.
//!
//! Keys are the long flag names without the leading dashes (`a-re`, `schedule`,
//! `n-start`, ...). List-valued keys (`a-re`, `a-im`, `schedule`, `corpus`,
//! `alpha`, `beta`) take comma-separated values; only `sweep` accepts more
//! than one.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use crate::bounds::RatioOrientation;
use crate::corpus::{resolve, CorpusEntry};
use crate::error::{Error, Result};
use crate::holder::{ModulusSpec, ShiftSet};
use crate::phase::MoebiusParameter;
use crate::summation::VPSchedule;

use super::output::Format;

/// Largest `|a|` the driver accepts; beyond it `p_a` exceeds 39 and the
/// `x`-grid no longer resolves the means at default sizes.
pub const MAX_DRIVER_MODULUS: f64 = 0.95;

pub const KEYS: [&str; 18] = [
    "a-re",
    "a-im",
    "schedule",
    "n-start",
    "n-stop",
    "n-geom",
    "n-step",
    "grid",
    "alpha",
    "beta",
    "modulus",
    "gamma",
    "corpus",
    "out",
    "format",
    "jobs",
    "coarse-shifts",
    "orientation",
];

/// Raw `key → value` settings before validation.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct RawConfig(BTreeMap<String, String>);

impl RawConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text, path)
    }

    pub fn parse(text: &str, path: &Path) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let error = |message: String| Error::Parse {
                path: path.to_path_buf(),
                line: i + 1,
                message,
            };
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| error("expected `key = value`".into()))?;
            let key = key.trim();
            if !KEYS.contains(&key) {
                return Err(error(format!("unknown key `{key}`")));
            }
            map.insert(key.to_string(), value.trim().to_string());
        }
        Ok(Self(map))
    }

    pub fn set(&mut self, key: &str, value: impl Into<String>) {
        debug_assert!(KEYS.contains(&key));
        self.0.insert(key.to_string(), value.into());
    }

    pub fn get(&self, key: &str) -> Option<&str> {
        self.0.get(key).map(String::as_str)
    }

    fn parsed<T: std::str::FromStr>(&self, key: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::InvalidArgument(format!("--{key} `{v}`: {e}")))
            })
            .transpose()
    }

    fn list<T: std::str::FromStr>(&self, key: &str, default: &str) -> Result<Vec<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(key)
            .unwrap_or(default)
            .split(',')
            .map(|v| {
                v.trim()
                    .parse::<T>()
                    .map_err(|e| Error::InvalidArgument(format!("--{key} `{v}`: {e}")))
            })
            .collect()
    }

    fn names(&self, key: &str, default: &str) -> Vec<String> {
        self.get(key)
            .unwrap_or(default)
            .split(',')
            .map(|v| v.trim().to_string())
            .collect()
    }
}

/// One fully resolved experiment.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub a: MoebiusParameter,
    pub schedule: VPSchedule,
    pub schedule_label: String,
    pub orders: Vec<usize>,
    pub grid: usize,
    pub corpus: CorpusEntry,
    pub omega_alpha: ModulusSpec,
    pub omega_beta: ModulusSpec,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
    pub shifts: ShiftSet,
    pub orientation: RatioOrientation,
}

impl ExperimentConfig {
    pub fn n_max(&self) -> usize {
        *self.orders.last().expect("validated nonempty")
    }
}

/// A cartesian product of experiments sharing orders, grid and output.
#[derive(Clone, Debug)]
pub struct SweepConfig {
    pub cells: Vec<ExperimentConfig>,
    pub out: Option<PathBuf>,
    pub format: Format,
    pub jobs: usize,
}

fn orders(raw: &RawConfig) -> Result<Vec<usize>> {
    let start = raw.parsed::<usize>("n-start")?.unwrap_or(16);
    let stop = raw.parsed::<usize>("n-stop")?.unwrap_or(1024);
    let geom = raw.parsed::<usize>("n-geom")?;
    let step = raw.parsed::<usize>("n-step")?;
    if start == 0 || stop < start {
        return Err(Error::InvalidArgument(format!("empty order range {start}..={stop}")));
    }
    let orders: Vec<usize> = match (geom, step) {
        (Some(_), Some(_)) => {
            return Err(Error::InvalidArgument("--n-geom and --n-step are exclusive".into()))
        }
        (None, Some(0)) => return Err(Error::InvalidArgument("--n-step must be positive".into())),
        (None, Some(step)) => (start..=stop).step_by(step).collect(),
        (Some(g), None) if g < 2 => {
            return Err(Error::InvalidArgument("--n-geom must be at least 2".into()))
        }
        (g, None) => {
            let g = g.unwrap_or(2);
            std::iter::successors(Some(start), |&n| n.checked_mul(g))
                .take_while(|&n| n <= stop)
                .collect()
        }
    };
    Ok(orders)
}

fn modulus(raw: &RawConfig, alpha: f64) -> Result<ModulusSpec> {
    let gamma = raw.parsed::<f64>("gamma")?.unwrap_or(1.0);
    match raw.get("modulus").unwrap_or("power") {
        "power" => ModulusSpec::power(alpha),
        "powerlog" => ModulusSpec::power_log(alpha, gamma),
        other => Err(Error::InvalidModulus(format!(
            "unknown family `{other}` (expected power|powerlog)"
        ))),
    }
}

fn parameter(re: f64, im: f64) -> Result<MoebiusParameter> {
    let a = MoebiusParameter::new(re, im)?;
    if a.modulus() > MAX_DRIVER_MODULUS {
        return Err(Error::InvalidArgument(format!(
            "|a| = {} exceeds the driver limit {MAX_DRIVER_MODULUS}",
            a.modulus()
        )));
    }
    Ok(a)
}

/// Equal-length lists zip; a single value broadcasts.
fn zip_lists<T: Clone, U: Clone>(keys: (&str, &str), xs: Vec<T>, ys: Vec<U>) -> Result<Vec<(T, U)>> {
    match (xs.len(), ys.len()) {
        (a, b) if a == b => Ok(xs.into_iter().zip(ys).collect()),
        (1, _) => Ok(ys.into_iter().map(|y| (xs[0].clone(), y)).collect()),
        (_, 1) => Ok(xs.into_iter().map(|x| (x, ys[0].clone())).collect()),
        (a, b) => Err(Error::InvalidArgument(format!(
            "--{} has {a} values but --{} has {b}",
            keys.0, keys.1
        ))),
    }
}

impl SweepConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let orders = orders(raw)?;
        let n_max = *orders.last().ok_or_else(|| Error::InvalidArgument("empty order range".into()))?;
        let required = 4 * n_max + 4;
        let grid = match raw.parsed::<usize>("grid")? {
            Some(g) if g < required => return Err(Error::GridTooSmall { grid: g, required }),
            Some(g) => g,
            None => (8 * n_max).next_power_of_two(),
        };
        let format = Format::parse(raw.get("format").unwrap_or("csv"))?;
        let jobs = match raw.parsed::<usize>("jobs")? {
            Some(0) => return Err(Error::InvalidArgument("--jobs must be positive".into())),
            Some(j) => j,
            None => std::thread::available_parallelism().map_or(1, |n| n.get()),
        };
        let shifts = match raw.get("coarse-shifts") {
            None | Some("false") => ShiftSet::All,
            Some("true") => ShiftSet::Dyadic,
            Some(v) => {
                return Err(Error::InvalidArgument(format!("--coarse-shifts `{v}` (expected true|false)")))
            }
        };
        let orientation = match raw.get("orientation").unwrap_or("beta-over-alpha") {
            "beta-over-alpha" => RatioOrientation::BetaOverAlpha,
            "alpha-over-beta" => RatioOrientation::AlphaOverBeta,
            v => {
                return Err(Error::InvalidArgument(format!(
                    "--orientation `{v}` (expected beta-over-alpha|alpha-over-beta)"
                )))
            }
        };
        let out = raw.get("out").map(PathBuf::from);

        let a_values = zip_lists(("a-re", "a-im"), raw.list::<f64>("a-re", "0")?, raw.list::<f64>("a-im", "0")?)?;
        let moduli = zip_lists(("alpha", "beta"), raw.list::<f64>("alpha", "0.5")?, raw.list::<f64>("beta", "0.25")?)?;
        let schedules = raw.names("schedule", "full");
        let corpora = raw.names("corpus", "cusp_0.5");

        let mut cells = Vec::new();
        for &(re, im) in &a_values {
            let a = parameter(re, im)?;
            for label in &schedules {
                let schedule = VPSchedule::parse(label)?;
                schedule.lambda(n_max)?;
                for name in &corpora {
                    for &(alpha, beta) in &moduli {
                        if !(0.0..=1.0).contains(&beta) || beta >= alpha {
                            return Err(Error::InvalidModulus(format!(
                                "need 0 ≤ β < α ≤ 1, got α = {alpha}, β = {beta}"
                            )));
                        }
                        let omega_alpha = modulus(raw, alpha)?;
                        let omega_beta = ModulusSpec::power(beta)?;
                        let corpus = resolve(name, &omega_alpha)?;
                        cells.push(ExperimentConfig {
                            a,
                            schedule: schedule.clone(),
                            schedule_label: label.clone(),
                            orders: orders.clone(),
                            grid,
                            corpus,
                            omega_alpha,
                            omega_beta,
                            out: out.clone(),
                            format,
                            jobs,
                            shifts,
                            orientation,
                        });
                    }
                }
            }
        }
        Ok(Self {
            cells,
            out,
            format,
            jobs,
        })
    }
}

impl ExperimentConfig {
    pub fn from_raw(raw: &RawConfig) -> Result<Self> {
        let mut sweep = SweepConfig::from_raw(raw)?;
        if sweep.cells.len() != 1 {
            return Err(Error::InvalidArgument(format!(
                "configuration describes {} experiments; use `sweep` for lists",
                sweep.cells.len()
            )));
        }
        Ok(sweep.cells.remove(0))
    }
}
