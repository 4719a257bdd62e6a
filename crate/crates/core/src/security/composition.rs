use super::report::{CaseResult, CheckReport};
use crate::error::Result;
use crate::linalg::random::{random_channel, random_unitary};
use crate::linalg::{channel_distance_with, KrausChannel, SearchConfig};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub const COMPOSITION_TOL: f64 = 1e-9;

/// Distance used for every ε here: raw trace norm with a probe as large as
/// the input, maximized by restarted ascent.
pub fn construction_distance(a: &KrausChannel, b: &KrausChannel, seed: u64) -> Result<f64> {
    let cfg = SearchConfig { restarts: 8, seed, ..SearchConfig::default() };
    Ok(channel_distance_with(a, b, a.dim_in(), &cfg)?.estimate.raw_trace_norm)
}

/// Converters act after a system, simulators before it.
pub fn attach_converter(system: &KrausChannel, converter: &KrausChannel) -> Result<KrausChannel> {
    system.then(converter)
}

pub fn attach_simulator(system: &KrausChannel, simulator: &KrausChannel) -> Result<KrausChannel> {
    simulator.then(system)
}

/// (1 − t) a + t b.
pub fn mix(a: &KrausChannel, b: &KrausChannel, t: f64) -> Result<KrausChannel> {
    let mut kraus: Vec<_> = a.kraus().iter().map(|k| k.scale((1.0 - t).sqrt())).collect();
    if t > 0.0 {
        kraus.extend(b.kraus().iter().map(|k| k.scale(t.sqrt())));
    }
    KrausChannel::new(kraus)
}

/// Measured distances of one composition instance.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CompositionMargin {
    pub eps: f64,
    pub eps_prime: f64,
    pub composed: f64,
}

impl CompositionMargin {
    pub fn slack(&self) -> f64 {
        self.eps + self.eps_prime - self.composed
    }

    pub fn holds(&self) -> bool {
        self.composed <= self.eps + self.eps_prime + COMPOSITION_TOL
    }
}

/// ε = d(πR, Sσ), ε' = d(π'S, Tσ') and the distance of the composed pair
/// d(π'πR, Tσ'σ).
#[allow(clippy::too_many_arguments)]
pub fn serial_composition(
    pi: &KrausChannel,
    r: &KrausChannel,
    s: &KrausChannel,
    pi2: &KrausChannel,
    t: &KrausChannel,
    sigma: &KrausChannel,
    sigma2: &KrausChannel,
    seed: u64,
) -> Result<CompositionMargin> {
    let eps = construction_distance(&attach_converter(r, pi)?, &attach_simulator(s, sigma)?, seed)?;
    let eps_prime = construction_distance(&attach_converter(s, pi2)?, &attach_simulator(t, sigma2)?, seed)?;
    let real = attach_converter(&attach_converter(r, pi)?, pi2)?;
    let ideal = attach_simulator(&attach_simulator(t, sigma2)?, sigma)?;
    let composed = construction_distance(&real, &ideal, seed)?;
    Ok(CompositionMargin { eps, eps_prime, composed })
}

/// ε = d(πR, Sσ), ε' = d(π'R', S'σ') and d(πR ⊗ π'R', Sσ ⊗ S'σ').
pub fn parallel_composition(
    real: &KrausChannel,
    ideal: &KrausChannel,
    real2: &KrausChannel,
    ideal2: &KrausChannel,
    seed: u64,
) -> Result<CompositionMargin> {
    let eps = construction_distance(real, ideal, seed)?;
    let eps_prime = construction_distance(real2, ideal2, seed)?;
    let composed = construction_distance(&real.tensor(real2)?, &ideal.tensor(ideal2)?, seed)?;
    Ok(CompositionMargin { eps, eps_prime, composed })
}

/// Per-instance seed: stream `index` of `seed`.
pub fn instance_seed(seed: u64, index: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng.random()
}

/// One qubit channels for a serial triple. S is built ε-close to πRσ⁻¹ and T
/// ε'-close to π'Sσ'⁻¹, so both distances are small but nonzero.
pub struct SerialInstance {
    pub pi: KrausChannel,
    pub r: KrausChannel,
    pub s: KrausChannel,
    pub pi2: KrausChannel,
    pub t: KrausChannel,
    pub sigma: KrausChannel,
    pub sigma2: KrausChannel,
}

pub fn random_serial_instance(seed: u64) -> Result<SerialInstance> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let r = random_channel(2, 2, 2, &mut rng);
    let pi = random_channel(2, 2, 2, &mut rng);
    let su = random_unitary(2, &mut rng);
    let sigma = KrausChannel::unitary(su.clone())?;
    let undo = KrausChannel::unitary(su.adjoint())?;
    let noise = random_channel(2, 2, 2, &mut rng);
    let s = mix(&undo.then(&r)?.then(&pi)?, &noise, rng.random_range(0.0..0.3))?;
    let pi2 = random_channel(2, 2, 2, &mut rng);
    let su2 = random_unitary(2, &mut rng);
    let sigma2 = KrausChannel::unitary(su2.clone())?;
    let undo2 = KrausChannel::unitary(su2.adjoint())?;
    let noise2 = random_channel(2, 2, 2, &mut rng);
    let t = mix(&undo2.then(&s)?.then(&pi2)?, &noise2, rng.random_range(0.0..0.3))?;
    Ok(SerialInstance { pi, r, s, pi2, t, sigma, sigma2 })
}

/// A one-qubit construction (πR, Sσ) at a random small distance.
pub fn random_construction(seed: u64) -> Result<(KrausChannel, KrausChannel)> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let r = random_channel(2, 2, 2, &mut rng);
    let pi = random_channel(2, 2, 2, &mut rng);
    let su = random_unitary(2, &mut rng);
    let noise = random_channel(2, 2, 2, &mut rng);
    let real = r.then(&pi)?;
    let s = mix(&KrausChannel::unitary(su.adjoint())?.then(&real)?, &noise, rng.random_range(0.0..0.3))?;
    let ideal = KrausChannel::unitary(su)?.then(&s)?;
    Ok((real, ideal))
}

fn report(check: &str, seed: u64, margins: Vec<(u64, CompositionMargin)>) -> CheckReport {
    let cases = margins
        .into_iter()
        .map(|(s, m)| CaseResult::new(format!("seed {s}: eps={:.6} eps'={:.6}", m.eps, m.eps_prime), m.composed, m.eps + m.eps_prime + COMPOSITION_TOL))
        .collect();
    CheckReport::from_cases(check, super::report::config_hash(&(check, seed)), seed, cases)
}

/// `trials` random serial triples; instance `i` uses `instance_seed(seed, i)`.
pub fn serial_composition_check(trials: usize, seed: u64) -> Result<CheckReport> {
    let margins = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = instance_seed(seed, i);
            let inst = random_serial_instance(s)?;
            let m = serial_composition(&inst.pi, &inst.r, &inst.s, &inst.pi2, &inst.t, &inst.sigma, &inst.sigma2, s)?;
            Ok((s, m))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report("serial-composition", seed, margins))
}

/// `trials` random pairs of one-qubit constructions composed in parallel.
pub fn parallel_composition_check(trials: usize, seed: u64) -> Result<CheckReport> {
    let margins = (0..trials as u64)
        .into_par_iter()
        .map(|i| {
            let s = instance_seed(seed, i);
            let (a, b) = random_construction(s)?;
            let (c, d) = random_construction(s ^ 0x9e37_79b9_7f4a_7c15)?;
            Ok((s, parallel_composition(&a, &b, &c, &d, s)?))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(report("parallel-composition", seed, margins))
}
