//! Config-driven runs, bound sweeps and certification reports.
//!
//! Every output carries the hash of the resolved configuration and the tool
//! version, and is byte-identical for the same configuration and seed no
//! matter how many worker threads run it.

mod certify;
mod config;
mod run;
mod sweep;

pub use certify::{
    blindness_suite, cheating_devices, cmd_certify, composition_suite, correctness_suite, nosignaling_suite, random_spec,
    scripted_devices, security_spec, security_suite, SuiteReport, DEFAULT_BATCHES, DEFAULT_BLINDNESS_STATES,
    DEFAULT_COMPOSITION_TRIALS, DEFAULT_NOSIGNALING_TRIALS, DEFAULT_PAIRS, DEFAULT_VIEW_PAIRS, MAX_REJECTIONS, MIN_POWER,
    NOSIGNALING_LEVEL, PLANTED_STRENGTH,
};
pub use config::{
    input_mode, parse_variant, CertifyConfig, ExperimentConfig, OneOrMany, RunConfig, Source, Suite, SweepConfig, DEFAULT_ANGLE,
    SEED_ENV,
};
pub use run::{cmd_run, RunOutcome, RunSummary, FIDELITY_TOL};
pub use sweep::{cmd_bound_sweep, Skipped, SweepOutcome, SweepRow};

use crate::error::{Error, Result};
use std::io::Write;

pub const VERSION: &str = concat!("blindsim ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExitStatus {
    Pass = 0,
    CheckFailed = 1,
    ConfigError = 2,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }

    pub fn from_pass(pass: bool) -> Self {
        if pass {
            ExitStatus::Pass
        } else {
            ExitStatus::CheckFailed
        }
    }

    /// Bad input of any kind is a configuration error; anything raised
    /// while the numerics run counts as a failed check.
    pub fn for_error(e: &Error) -> Self {
        match e {
            Error::Config(_)
            | Error::Io(_)
            | Error::Json(_)
            | Error::Csv(_)
            | Error::Attack(_)
            | Error::Protocol(_)
            | Error::Pattern(_)
            | Error::Permutation(_)
            | Error::TooManyQubits { .. } => ExitStatus::ConfigError,
            _ => ExitStatus::CheckFailed,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Run,
    BoundSweep,
    Certify,
}

/// Runs `f` on a pool of `workers` threads, or on the global pool.
pub fn with_workers<T: Send>(workers: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T> {
    match workers {
        None => Ok(f()),
        Some(0) => Err(Error::Config("--workers must be at least 1".into())),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| Error::Config(format!("cannot start {n} workers: {e}")))?;
            Ok(pool.install(f))
        }
    }
}

fn emit(out: &Option<std::path::PathBuf>, bytes: &[u8], stdout: &mut dyn Write) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, bytes)?,
        None => stdout.write_all(bytes)?,
    }
    Ok(())
}

/// Executes `command` for a configuration whose seed is already resolved.
/// Primary output goes to `cfg.out` or `stdout`; short notes go to `notes`.
pub fn execute(command: Command, cfg: &ExperimentConfig, stdout: &mut dyn Write, notes: &mut dyn Write) -> Result<ExitStatus> {
    match command {
        Command::Run => {
            let rc = RunConfig::resolve(cfg)?;
            let outcome = with_workers(cfg.workers, || cmd_run(&rc))??;
            emit(&cfg.out, &outcome.transcript, stdout)?;
            writeln!(stdout, "{}", outcome.summary_line())?;
            Ok(ExitStatus::from_pass(outcome.summary.pass))
        }
        Command::BoundSweep => {
            let sc = SweepConfig::resolve(cfg)?;
            let outcome = with_workers(cfg.workers, || cmd_bound_sweep(&sc))??;
            for s in &outcome.skipped {
                writeln!(notes, "skipped N={} d={}: {}", s.n, s.d, s.reason)?;
            }
            emit(&cfg.out, &outcome.csv, stdout)?;
            if outcome.violations > 0 {
                writeln!(notes, "{} rows exceed the bound", outcome.violations)?;
            }
            Ok(ExitStatus::from_pass(outcome.violations == 0))
        }
        Command::Certify => {
            let cc = CertifyConfig::resolve(cfg)?;
            let report = with_workers(cfg.workers, || cmd_certify(&cc))??;
            let mut json = serde_json::to_vec_pretty(&report)?;
            json.push(b'\n');
            emit(&cfg.out, &json, stdout)?;
            for c in &report.checks {
                let verdict = if c.pass { "pass" } else { "FAIL" };
                writeln!(notes, "{verdict} {}: measured {:e}, bound {:e}", c.check, c.measured, c.bound)?;
            }
            Ok(ExitStatus::from_pass(report.pass))
        }
    }
}
