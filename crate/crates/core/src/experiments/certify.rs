use super::{input_mode, CertifyConfig, Suite, VERSION};
use crate::adversary::strategy_library;
use crate::error::Result;
use crate::linalg::random::random_state;
use crate::linalg::StateVector;
use crate::protocol::{ClientProgram, DeviceBehavior, InputMode, Variant};
use crate::security::{
    adversarial_family, check_blindness_noverify, check_bob_view_noverify, check_correctness, check_decomposition,
    check_security_verify, config_hash, nosignaling_batches, parallel_composition_check, serial_composition_check, Backend,
    CaseResult, CheckReport, SystemSpec,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const DEFAULT_PAIRS: usize = 50;
pub const DEFAULT_BLINDNESS_STATES: usize = 50;
pub const DEFAULT_VIEW_PAIRS: usize = 20;
pub const DEFAULT_COMPOSITION_TRIALS: usize = 200;
pub const DEFAULT_NOSIGNALING_TRIALS: u64 = 100_000;
pub const DEFAULT_BATCHES: usize = 50;
pub const NOSIGNALING_LEVEL: f64 = 0.01;
/// Batches allowed to reject at `NOSIGNALING_LEVEL` out of `DEFAULT_BATCHES`.
pub const MAX_REJECTIONS: usize = 3;
pub const PLANTED_STRENGTH: f64 = 0.03;
pub const MIN_POWER: f64 = 0.99;

/// The JSON document written by `certify`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: Suite,
    pub version: String,
    pub config_hash: String,
    pub seed: u64,
    pub pass: bool,
    pub checks: Vec<CheckReport>,
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

fn angles(count: usize, rng: &mut ChaCha20Rng) -> Vec<f64> {
    (0..count).map(|_| rng.random_range(-std::f64::consts::PI..std::f64::consts::PI)).collect()
}

/// Wrong angles, skipped correction and a scripted always-accept output.
pub fn scripted_devices(rng: &mut ChaCha20Rng) -> Vec<DeviceBehavior> {
    vec![
        DeviceBehavior::WrongAngles { offset: rng.random_range(0.1..1.0) },
        DeviceBehavior::SkipCorrection,
        DeviceBehavior::always_accept(&random_state(1, rng)),
    ]
}

/// A random teleported chain program for `variant` at `n` qubits sent.
pub fn random_spec(variant: Variant, n: usize, device: DeviceBehavior, rng: &mut ChaCha20Rng) -> Result<SystemSpec> {
    let m = match variant {
        Variant::Noverify => n,
        Variant::Verify => n / 3,
    };
    let program = ClientProgram::chain(m, &angles(m, rng), InputMode::Teleported)?;
    SystemSpec::new(variant, n, program, device)
}

/// One report per check with one case per sub-report.
fn fold(check: &str, seed: u64, reports: Vec<(String, CheckReport)>) -> CheckReport {
    let hashes: Vec<&str> = reports.iter().map(|(_, r)| r.config_hash.as_str()).collect();
    let hash = config_hash(&hashes);
    let cases = reports
        .into_iter()
        .map(|(label, r)| CaseResult { label, measured: r.measured, bound: r.bound, pass: r.pass })
        .collect();
    CheckReport::from_cases(check, hash, seed, cases)
}

/// Real against S(f=0) for `pairs` random programs per variant at N = 6,
/// each with the honest device and three scripted ones.
pub fn correctness_suite(pairs: usize, seed: u64) -> Result<Vec<CheckReport>> {
    [Variant::Noverify, Variant::Verify]
        .into_iter()
        .enumerate()
        .map(|(v, variant)| {
            let reports = (0..pairs as u64)
                .into_par_iter()
                .map(|i| {
                    let mut rng = rng_for(seed, ((v as u64) << 32) | i);
                    let spec = random_spec(variant, 6, DeviceBehavior::Honest, &mut rng)?;
                    let s: u64 = rng.random();
                    std::iter::once(DeviceBehavior::Honest)
                        .chain(scripted_devices(&mut rng))
                        .map(|device| {
                            let w = device.w();
                            Ok((format!("pair {i}, w={w}"), check_correctness(&spec.with_device(device)?, s)?))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<Vec<_>>>()?;
            Ok(fold(&format!("correctness-{}", variant_name(variant)), seed, reports.into_iter().flatten().collect()))
        })
        .collect()
}

fn variant_name(v: Variant) -> &'static str {
    match v {
        Variant::Noverify => "noverify",
        Variant::Verify => "verify",
    }
}

/// π_A R against Sσ over `states` adversarial inputs for the honest and two
/// misbehaving devices, and Bob's side under program swap for `pairs` pairs.
pub fn blindness_suite(states: usize, pairs: usize, seed: u64) -> Result<Vec<CheckReport>> {
    let mut rng = rng_for(seed, 0);
    let base = random_spec(Variant::Noverify, 6, DeviceBehavior::Honest, &mut rng)?;
    let devices = vec![DeviceBehavior::Honest, DeviceBehavior::WrongAngles { offset: 0.37 }, DeviceBehavior::SkipCorrection];
    let family = adversarial_family(&base, states, seed)?;
    let reports = devices
        .par_iter()
        .map(|d| Ok((format!("w={}", d.w()), check_blindness_noverify(&base.with_device(d.clone())?, &family, seed)?)))
        .collect::<Result<Vec<_>>>()?;
    let mut out = vec![fold("blindness", seed, reports)];
    let programs = (0..pairs)
        .map(|_| {
            let u = ClientProgram::chain(3, &angles(3, &mut rng), InputMode::Teleported)?;
            let u2 = ClientProgram::chain(3, &angles(3, &mut rng), InputMode::Teleported)?;
            Ok((u, u2))
        })
        .collect::<Result<Vec<_>>>()?;
    out.push(check_bob_view_noverify(&programs, &devices, seed)?);
    Ok(out)
}

/// The verified-protocol spec used by the security suite.
pub fn security_spec(n: usize, device: DeviceBehavior) -> Result<SystemSpec> {
    let m = n / 3;
    let mode = input_mode(m);
    let measured = if mode == InputMode::Teleported { m } else { m - 1 };
    let program = ClientProgram::chain(m, &vec![0.9; measured], mode)?;
    SystemSpec::new(Variant::Verify, n, program, device)
}

/// Devices with w ≠ 0 used by the security suite.
pub fn cheating_devices() -> Vec<DeviceBehavior> {
    vec![
        DeviceBehavior::WrongAngles { offset: 0.4 },
        DeviceBehavior::SkipCorrection,
        DeviceBehavior::always_accept(&StateVector::basis(1, 0)),
        DeviceBehavior::FlagFlip,
    ]
}

/// The strategy library at N = 3 and 6 against 2δ with the honest device,
/// exact equality for every w ≠ 0, and the flagged-output decomposition.
pub fn security_suite(seed: u64) -> Result<Vec<CheckReport>> {
    let mut out = Vec::new();
    for n in [3, 6] {
        let library = strategy_library(n);
        let spec = security_spec(n, DeviceBehavior::Honest)?;
        out.push(check_security_verify(&spec, &library, seed)?);
        let cheating = cheating_devices()
            .into_par_iter()
            .map(|d| {
                let w = d.w();
                Ok((format!("N={n}, w={w}"), check_security_verify(&spec.with_device(d)?, &library, seed)?))
            })
            .collect::<Result<Vec<_>>>()?;
        out.push(fold("security-cheating-device", seed, cheating));
        out.push(check_decomposition(&spec, &library, seed)?);
    }
    Ok(out)
}

pub fn composition_suite(trials: usize, seed: u64) -> Result<Vec<CheckReport>> {
    Ok(vec![serial_composition_check(trials, seed)?, parallel_composition_check(trials, seed)?])
}

/// `batches` honest Bell-pair batches (at most `MAX_REJECTIONS` scaled to
/// the batch count may reject) and the planted control, whose observed power
/// must reach `MIN_POWER`. With `planted` the main run uses the signaling
/// backend, which must then fail.
pub fn nosignaling_suite(batches: usize, trials: u64, seed: u64, planted: bool) -> Result<Vec<CheckReport>> {
    let planted_backend = Backend::PlantedSignaling { strength: PLANTED_STRENGTH };
    let backend = if planted { planted_backend } else { Backend::Quantum };
    let hash = config_hash(&(batches, trials, backend));
    let main = nosignaling_batches(batches, trials, seed, NOSIGNALING_LEVEL, backend)?;
    let allowed = (MAX_REJECTIONS * batches).div_ceil(DEFAULT_BATCHES);
    let mut honest = CheckReport::single("nosignaling", hash.clone(), seed, main.rejections as f64, allowed as f64);
    honest.cases = main
        .min_p_values
        .iter()
        .enumerate()
        .map(|(i, &p)| CaseResult { label: format!("batch {i}: min p"), measured: p, bound: NOSIGNALING_LEVEL, pass: p >= NOSIGNALING_LEVEL })
        .collect();
    let control = nosignaling_batches(batches, trials, seed ^ 0x5157_4e41_4c00_0000, NOSIGNALING_LEVEL, planted_backend)?;
    let power = control.rejections as f64 / batches.max(1) as f64;
    // measured as the miss rate so that "measured <= bound" means pass
    let control_report = CheckReport::single("nosignaling-planted-power", hash, seed, 1.0 - power, 1.0 - MIN_POWER);
    Ok(vec![honest, control_report])
}

fn suite_checks(cfg: &CertifyConfig, suite: Suite) -> Result<Vec<CheckReport>> {
    let seed = cfg.seed;
    match suite {
        Suite::Correctness => correctness_suite(cfg.trials.map_or(DEFAULT_PAIRS, |t| t as usize), seed),
        Suite::Blindness => blindness_suite(DEFAULT_BLINDNESS_STATES, DEFAULT_VIEW_PAIRS, seed),
        Suite::Security => security_suite(seed),
        Suite::Composition => composition_suite(cfg.trials.map_or(DEFAULT_COMPOSITION_TRIALS, |t| t as usize), seed),
        Suite::Nosignaling => nosignaling_suite(
            cfg.batches.unwrap_or(DEFAULT_BATCHES),
            cfg.trials.unwrap_or(DEFAULT_NOSIGNALING_TRIALS),
            seed,
            cfg.planted,
        ),
        Suite::All => {
            let mut all = Vec::new();
            for s in [Suite::Correctness, Suite::Blindness, Suite::Security, Suite::Composition, Suite::Nosignaling] {
                all.extend(suite_checks(cfg, s)?);
            }
            Ok(all)
        }
    }
}

/// Runs the named suite. `trials` applies to every suite that takes it, so
/// with `all` it is usually left unset.
pub fn cmd_certify(cfg: &CertifyConfig) -> Result<SuiteReport> {
    let checks = suite_checks(cfg, cfg.suite)?;
    Ok(SuiteReport {
        suite: cfg.suite,
        version: VERSION.into(),
        config_hash: cfg.hash(),
        seed: cfg.seed,
        pass: checks.iter().all(|c| c.pass),
        checks,
    })
}
