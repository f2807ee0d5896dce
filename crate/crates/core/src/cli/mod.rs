//! The `nlvp` command-line driver.

pub mod commands;
pub mod config;
pub mod output;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use crate::error::{Error, Result};
use config::{ExperimentConfig, RawConfig, SweepConfig};
use output::{emit, json};

#[derive(Debug, Parser)]
#[command(name = "nlvp", version, about = "de la Vallée-Poussin means in a Möbius-phase Fourier basis")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dump θ_a, p_a and the phase round-trip residual on the grid.
    Basis(Options),
    /// Errors and bounds of V_n^a for one corpus entry.
    Approx(Options),
    /// Run the invariant suite and emit a JSON report.
    Verify(Options),
    /// Run the product a × schedule × corpus × moduli into a directory.
    Sweep(Options),
    /// Lebesgue constants against their bound.
    Lebesgue(Options),
}

/// Flags shared by every subcommand. Each overrides the same key in `--config`.
#[derive(Debug, Default, Args)]
pub struct Options {
    /// Flat `key = value` file; keys are the flag names.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_re: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub a_im: Option<String>,
    /// one|half|full|file:PATH
    #[arg(long)]
    pub schedule: Option<String>,
    #[arg(long)]
    pub n_start: Option<String>,
    #[arg(long)]
    pub n_stop: Option<String>,
    /// Geometric ratio of the order range (default 2).
    #[arg(long)]
    pub n_geom: Option<String>,
    /// Arithmetic step of the order range.
    #[arg(long)]
    pub n_step: Option<String>,
    #[arg(long)]
    pub grid: Option<String>,
    #[arg(long)]
    pub alpha: Option<String>,
    #[arg(long)]
    pub beta: Option<String>,
    /// power|powerlog
    #[arg(long)]
    pub modulus: Option<String>,
    #[arg(long)]
    pub gamma: Option<String>,
    /// NAME or file:PATH
    #[arg(long)]
    pub corpus: Option<String>,
    #[arg(long)]
    pub out: Option<String>,
    /// csv|json
    #[arg(long)]
    pub format: Option<String>,
    #[arg(long)]
    pub jobs: Option<String>,
    /// Restrict Hölder shifts to dyadic ones.
    #[arg(long)]
    pub coarse_shifts: bool,
    /// beta-over-alpha|alpha-over-beta
    #[arg(long)]
    pub orientation: Option<String>,
}

impl Options {
    /// The config file, if any, with flags layered on top.
    pub fn resolve(&self) -> Result<RawConfig> {
        let mut raw = match &self.config {
            Some(path) => RawConfig::from_file(path)?,
            None => RawConfig::default(),
        };
        let flags = [
            ("a-re", &self.a_re),
            ("a-im", &self.a_im),
            ("schedule", &self.schedule),
            ("n-start", &self.n_start),
            ("n-stop", &self.n_stop),
            ("n-geom", &self.n_geom),
            ("n-step", &self.n_step),
            ("grid", &self.grid),
            ("alpha", &self.alpha),
            ("beta", &self.beta),
            ("modulus", &self.modulus),
            ("gamma", &self.gamma),
            ("corpus", &self.corpus),
            ("out", &self.out),
            ("format", &self.format),
            ("jobs", &self.jobs),
            ("orientation", &self.orientation),
        ];
        for (key, value) in flags {
            if let Some(v) = value {
                raw.set(key, v.clone());
            }
        }
        if self.coarse_shifts {
            raw.set("coarse-shifts", "true");
        }
        Ok(raw)
    }
}

/// How a run ended, mapped onto the process exit status.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Outcome {
    Success = 0,
    Validation = 1,
    Numeric = 2,
    Io = 3,
}

impl From<Outcome> for ExitCode {
    fn from(o: Outcome) -> Self {
        ExitCode::from(o as u8)
    }
}

pub fn classify(error: &Error) -> Outcome {
    match error {
        Error::Io { .. } => Outcome::Io,
        Error::ExchangeNotConverged { .. } | Error::Certification { .. } => Outcome::Numeric,
        _ => Outcome::Validation,
    }
}

fn with_pool<T: Send>(jobs: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("cannot start {jobs} worker threads: {e}")))?;
    Ok(pool.install(f))
}

/// Run one parsed command.
pub fn execute(command: &Command) -> Result<Outcome> {
    match command {
        Command::Basis(opts) => {
            let cfg = ExperimentConfig::from_raw(&opts.resolve()?)?;
            let text = commands::basis(&cfg).render(cfg.format);
            emit(cfg.out.as_deref(), &text)?;
            Ok(Outcome::Success)
        }
        Command::Approx(opts) => {
            let cfg = ExperimentConfig::from_raw(&opts.resolve()?)?;
            let (table, summary) = with_pool(cfg.jobs, || commands::approx(&cfg))??;
            emit(cfg.out.as_deref(), &commands::render_approx(&table, &summary, cfg.format))?;
            Ok(Outcome::Success)
        }
        Command::Verify(opts) => {
            let cfg = ExperimentConfig::from_raw(&opts.resolve()?)?;
            let report = with_pool(cfg.jobs, || commands::verify(&cfg))??;
            emit(cfg.out.as_deref(), &json(&report))?;
            Ok(if report.passed { Outcome::Success } else { Outcome::Numeric })
        }
        Command::Sweep(opts) => {
            let cfg = SweepConfig::from_raw(&opts.resolve()?)?;
            let dir = cfg
                .out
                .clone()
                .ok_or_else(|| Error::InvalidArgument("sweep needs --out DIR".into()))?;
            let manifest = with_pool(cfg.jobs, || commands::sweep(&cfg, Path::new(&dir)))??;
            Ok(if manifest.failed == 0 { Outcome::Success } else { Outcome::Numeric })
        }
        Command::Lebesgue(opts) => {
            let cfg = ExperimentConfig::from_raw(&opts.resolve()?)?;
            let text = commands::lebesgue(&cfg)?.render(cfg.format);
            emit(cfg.out.as_deref(), &text)?;
            Ok(Outcome::Success)
        }
    }
}

/// Parse `args` (including the program name) and run; errors go to stderr.
pub fn run<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { Outcome::Validation } else { Outcome::Success }.into();
        }
    };
    match execute(&cli.command) {
        Ok(outcome) => outcome.into(),
        Err(e) => {
            eprintln!("nlvp: {e}");
            classify(&e).into()
        }
    }
}
