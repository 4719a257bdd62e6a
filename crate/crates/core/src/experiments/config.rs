use crate::adversary::AdversaryStrategy;
use crate::error::{Error, Result};
use crate::protocol::{DeviceBehavior, InputMode, Variant};
use crate::security::config_hash;
use rand::Rng;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};
use std::str::FromStr;

pub const SEED_ENV: &str = "BLINDSIM_SEED";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Correctness,
    Blindness,
    Security,
    Composition,
    Nosignaling,
    All,
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        serde_json::from_value(serde_json::Value::String(s.into())).map_err(|_| Error::Config(format!("unknown suite `{s}`")))
    }
}

pub fn parse_variant(s: &str) -> Result<Variant> {
    serde_json::from_value(serde_json::Value::String(s.into()))
        .map_err(|_| Error::Config(format!("unknown variant `{s}`, expected noverify or verify")))
}

/// A single value or a list, so `"N": 6` and `"N": [3, 6]` both work.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OneOrMany {
    One(usize),
    Many(Vec<usize>),
}

impl OneOrMany {
    pub fn to_vec(&self) -> Vec<usize> {
        match self {
            OneOrMany::One(v) => vec![*v],
            OneOrMany::Many(v) => v.clone(),
        }
    }
}

/// `"honest"`, a path to a JSON file, or the JSON object inline.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Source<T> {
    Named(String),
    Inline(T),
}

impl<T: Clone + DeserializeOwned> Source<T> {
    pub fn load(&self, honest: T) -> Result<T> {
        match self {
            Source::Inline(v) => Ok(v.clone()),
            Source::Named(s) if s == "honest" => Ok(honest),
            Source::Named(path) => {
                let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {path}: {e}")))?;
                serde_json::from_str(&text).map_err(|e| Error::Config(format!("{path}: {e}")))
            }
        }
    }
}

/// Everything the CLI accepts, as flags or as a JSON file with the same keys.
/// Flags override the file; unset fields fall back to per-command defaults.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub variant: Option<Variant>,
    #[serde(rename = "N", default, skip_serializing_if = "Option::is_none")]
    pub n: Option<OneOrMany>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<OneOrMany>,
    /// Attack supports swept by `bound-sweep`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bob: Option<Source<AdversaryStrategy>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub device: Option<Source<DeviceBehavior>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub batches: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    /// Measurement angles of the chain program used by `run`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub angles: Option<Vec<f64>>,
    /// Alice's input qubit as `[re, im]` amplitude pairs.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub input: Option<Vec<[f64; 2]>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub suite: Option<Suite>,
    /// Replace the quantum backend of the no-signaling suite by one that signals.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub planted: Option<bool>,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }

    /// `over` wins wherever it sets a field.
    pub fn overlay(self, over: ExperimentConfig) -> Self {
        Self {
            variant: over.variant.or(self.variant),
            n: over.n.or(self.n),
            d: over.d.or(self.d),
            support: over.support.or(self.support),
            bob: over.bob.or(self.bob),
            device: over.device.or(self.device),
            trials: over.trials.or(self.trials),
            batches: over.batches.or(self.batches),
            seed: over.seed.or(self.seed),
            out: over.out.or(self.out),
            workers: over.workers.or(self.workers),
            angles: over.angles.or(self.angles),
            input: over.input.or(self.input),
            suite: over.suite.or(self.suite),
            planted: over.planted.or(self.planted),
        }
    }

    /// The explicit seed, else `env` (the value of `BLINDSIM_SEED`), else a
    /// fresh random one. The result is written back so it gets recorded.
    pub fn resolve_seed(&mut self, env: Option<&str>) -> Result<u64> {
        let seed = match (self.seed, env) {
            (Some(s), _) => s,
            (None, Some(v)) => v.trim().parse().map_err(|_| Error::Config(format!("{SEED_ENV}={v} is not a u64")))?,
            (None, None) => rand::rng().random(),
        };
        self.seed = Some(seed);
        Ok(seed)
    }

    fn seed(&self) -> Result<u64> {
        self.seed.ok_or_else(|| Error::Config("seed not resolved".into()))
    }

    fn single_n(&self, default: usize) -> Result<usize> {
        match self.n.as_ref().map(OneOrMany::to_vec) {
            None => Ok(default),
            Some(v) if v.len() == 1 => Ok(v[0]),
            Some(v) => Err(Error::Config(format!("expected a single N, got {v:?}"))),
        }
    }
}

/// Fully resolved `run` configuration; its hash identifies the outputs.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub variant: Variant,
    #[serde(rename = "N")]
    pub n: usize,
    pub bob: AdversaryStrategy,
    pub device: DeviceBehavior,
    pub angles: Vec<f64>,
    pub input: Vec<[f64; 2]>,
    pub seed: u64,
}

pub const DEFAULT_ANGLE: f64 = std::f64::consts::FRAC_PI_4;

/// A one-vertex chain has no room for the joint input measurement, so it
/// starts from |+⟩ instead of Alice's qubit.
pub fn input_mode(resource: usize) -> InputMode {
    if resource == 1 {
        InputMode::Folded
    } else {
        InputMode::Teleported
    }
}

impl RunConfig {
    pub fn resolve(cfg: &ExperimentConfig) -> Result<Self> {
        let variant = cfg.variant.unwrap_or(Variant::Verify);
        let n = cfg.single_n(6)?;
        let resource = match variant {
            Variant::Noverify => n,
            Variant::Verify => {
                if n == 0 || n % 3 != 0 {
                    return Err(Error::Config(format!("the verified protocol needs N divisible by 3, got {n}")));
                }
                n / 3
            }
        };
        if resource == 0 {
            return Err(Error::Config("N must be positive".into()));
        }
        let measured = match input_mode(resource) {
            InputMode::Teleported => resource,
            InputMode::Folded => resource - 1,
        };
        let angles = cfg.angles.clone().unwrap_or_else(|| vec![DEFAULT_ANGLE; measured]);
        if angles.len() != measured {
            return Err(Error::Config(format!("{} angles given, the program measures {measured}", angles.len())));
        }
        let input = cfg.input.clone().unwrap_or(vec![[1.0, 0.0], [0.0, 0.0]]);
        if input.len() != 2 {
            return Err(Error::Config(format!("input must be one qubit, got {} amplitudes", input.len())));
        }
        Ok(Self {
            variant,
            n,
            bob: cfg.bob.as_ref().map_or(Ok(AdversaryStrategy::honest()), |b| b.load(AdversaryStrategy::honest()))?,
            device: cfg.device.as_ref().map_or(Ok(DeviceBehavior::Honest), |d| d.load(DeviceBehavior::Honest))?,
            angles,
            input,
            seed: cfg.seed()?,
        })
    }

    pub fn hash(&self) -> String {
        config_hash(&("run", self))
    }
}

/// Fully resolved `bound-sweep` configuration.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepConfig {
    #[serde(rename = "N")]
    pub n: Vec<usize>,
    pub d: Vec<usize>,
    pub support: Vec<usize>,
    pub trials: u64,
    pub seed: u64,
}

impl SweepConfig {
    pub fn resolve(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Self {
            n: cfg.n.as_ref().map_or(vec![3, 6, 9], OneOrMany::to_vec),
            d: cfg.d.as_ref().map_or(vec![1, 3], OneOrMany::to_vec),
            support: cfg.support.clone().unwrap_or(vec![1, 2]),
            trials: cfg.trials.unwrap_or(100_000),
            seed: cfg.seed()?,
        })
    }

    pub fn hash(&self) -> String {
        config_hash(&("bound-sweep", self))
    }
}

/// Fully resolved `certify` configuration. `trials` means instances for
/// composition, trials per batch for no-signaling and pairs for
/// correctness; unset means the suite's default.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CertifyConfig {
    pub suite: Suite,
    pub trials: Option<u64>,
    pub batches: Option<usize>,
    pub planted: bool,
    pub seed: u64,
}

impl CertifyConfig {
    pub fn resolve(cfg: &ExperimentConfig) -> Result<Self> {
        Ok(Self {
            suite: cfg.suite.ok_or_else(|| Error::Config("no suite given".into()))?,
            trials: cfg.trials,
            batches: cfg.batches,
            planted: cfg.planted.unwrap_or(false),
            seed: cfg.seed()?,
        })
    }

    pub fn hash(&self) -> String {
        config_hash(&("certify", self))
    }
}
