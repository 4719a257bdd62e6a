use blindsim::experiments::{
    execute, parse_variant, Command, ExitStatus, ExperimentConfig, OneOrMany, Source, Suite, SEED_ENV,
};
use blindsim::{Error, Result};
use clap::{Args, Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "blindsim", version, about = "Blind quantum computation with a measuring client: runs, bound sweeps and certification")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one protocol instance and write its transcript.
    Run(Common),
    /// Sweep Pauli attacks against the verification bound.
    BoundSweep(Common),
    /// Run a certification suite and write its report.
    Certify {
        /// correctness, blindness, security, composition, nosignaling or all
        suite: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// JSON file with the same keys as the flags; flags take precedence.
    #[arg(long)]
    config: Option<PathBuf>,
    /// noverify or verify
    #[arg(long)]
    variant: Option<String>,
    /// Qubits Bob sends; a comma-separated list for bound-sweep.
    #[arg(long = "N")]
    n: Option<String>,
    /// Code distances, comma-separated.
    #[arg(long)]
    d: Option<String>,
    /// Attack supports swept by bound-sweep, comma-separated (may be empty).
    #[arg(long)]
    support: Option<String>,
    /// `honest` or a JSON attack file.
    #[arg(long)]
    bob: Option<String>,
    /// `honest` or a JSON device file.
    #[arg(long)]
    device: Option<String>,
    #[arg(long)]
    trials: Option<u64>,
    #[arg(long)]
    batches: Option<usize>,
    /// Falls back to the config file, then BLINDSIM_SEED, then a fresh seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    /// Chain measurement angles, comma-separated.
    #[arg(long, allow_hyphen_values = true)]
    angles: Option<String>,
    /// Use a signaling backend in the no-signaling suite.
    #[arg(long)]
    planted: bool,
}

fn list<T: std::str::FromStr>(s: &str, what: &str) -> Result<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| t.parse().map_err(|_| Error::Config(format!("bad {what} value `{t}`"))))
        .collect()
}

impl Common {
    fn into_config(self, suite: Option<Suite>) -> Result<ExperimentConfig> {
        let file = match &self.config {
            Some(p) => ExperimentConfig::from_file(p)?,
            None => ExperimentConfig::default(),
        };
        let flags = ExperimentConfig {
            variant: self.variant.as_deref().map(parse_variant).transpose()?,
            n: self.n.as_deref().map(|s| list(s, "N").map(OneOrMany::Many)).transpose()?,
            d: self.d.as_deref().map(|s| list(s, "d").map(OneOrMany::Many)).transpose()?,
            support: self.support.as_deref().map(|s| list(s, "support")).transpose()?,
            bob: self.bob.map(Source::Named),
            device: self.device.map(Source::Named),
            trials: self.trials,
            batches: self.batches,
            seed: self.seed,
            out: self.out,
            workers: self.workers,
            angles: self.angles.as_deref().map(|s| list(s, "angle")).transpose()?,
            input: None,
            suite,
            planted: self.planted.then_some(true),
        };
        let mut cfg = file.overlay(flags);
        cfg.resolve_seed(std::env::var(SEED_ENV).ok().as_deref())?;
        Ok(cfg)
    }
}

fn dispatch(cli: Cli) -> Result<ExitStatus> {
    let (command, cfg) = match cli.command {
        Cmd::Run(c) => (Command::Run, c.into_config(None)?),
        Cmd::BoundSweep(c) => (Command::BoundSweep, c.into_config(None)?),
        Cmd::Certify { suite, common } => (Command::Certify, common.into_config(suite.as_deref().map(str::parse).transpose()?)?),
    };
    execute(command, &cfg, &mut std::io::stdout().lock(), &mut std::io::stderr())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { ExitStatus::ConfigError.code() as u8 } else { 0 });
        }
    };
    match dispatch(cli) {
        Ok(status) => ExitCode::from(status.code() as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(ExitStatus::for_error(&e).code() as u8)
        }
    }
}
