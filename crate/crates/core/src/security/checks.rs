use super::decomposition::{decompose_flagged_output, FlaggedOutputDecomposition};
use super::report::{config_hash, CaseResult, CheckReport};
use super::systems::{
    apply_with_reference, build_ideal_system, build_real_system, AdversaryPort, IdealFunctionality, IdealMode, SimulatorSigma,
    SystemSpec,
};
use crate::adversary::{delta_for_strategy, AdversaryStrategy, CodeConfig, ProtocolConfig};
use crate::error::{Error, Result};
use crate::linalg::random::{random_density, random_state};
use crate::linalg::{
    channel_distance, partial_trace_matrix, trace_norm, CMatrix, CVector, DensityOperator, KrausChannel, StateVector,
};
use crate::protocol::{run_noverify, BobImplementation, ClientInput, ClientProgram, DeviceBehavior, Variant, VerificationFlag};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Tolerance for the claims that hold with equality.
pub const EXACT_TOL: f64 = 1e-9;
/// Numerical slack on top of the 2δ bound.
pub const SECURITY_SLACK: f64 = 1e-6;

/// Raw trace-norm gap between two channels with a `probe_dim` reference:
/// maximally entangled probe, then a pure-probe ascent where affordable.
pub fn channel_gap(a: &KrausChannel, b: &KrausChannel, probe_dim: usize) -> Result<f64> {
    Ok(channel_distance(a, b, probe_dim)?.estimate.raw_trace_norm)
}

fn state_gap(a: &CMatrix, b: &CMatrix) -> f64 {
    trace_norm(&(a - b))
}

fn rng_for(seed: u64, stream: u64) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// The intended map on Alice's input, with the verdict attached in the
/// verified variant.
pub fn target_channel(spec: &SystemSpec) -> Result<KrausChannel> {
    let v = spec.program.target_operator()?;
    match spec.variant {
        Variant::Noverify => KrausChannel::new(vec![v]),
        Variant::Verify => KrausChannel::new(vec![v.kronecker(&VerificationFlag::ACCEPT.ket())]),
    }
}

/// π_A R π_B with honest Bob against S with f = 0.
pub fn check_correctness(spec: &SystemSpec, seed: u64) -> Result<CheckReport> {
    let bob = spec.honest_bob();
    let port = AdversaryPort::Strategy(&bob);
    let real = build_real_system(spec, port)?;
    let ideal = build_ideal_system(&IdealFunctionality::new(spec.clone()), IdealMode::SwitchOff)?;
    let din = spec.input_dim(port);
    let mut cases = vec![CaseResult::new("real vs S(f=0)", channel_gap(&real, &ideal, din)?, EXACT_TOL)];
    if spec.device.is_honest() {
        cases.push(CaseResult::new("real vs target", channel_gap(&real, &target_channel(spec)?, din)?, EXACT_TOL));
    }
    let rho = random_density(din, din, &mut rng_for(seed, 0));
    let gap = state_gap(&real.apply_matrix(rho.matrix()), &ideal.apply_matrix(rho.matrix()));
    cases.push(CaseResult::new("random input", gap, EXACT_TOL));
    Ok(CheckReport::from_cases("correctness", config_hash(spec), seed, cases))
}

/// A state the distinguisher feeds in: reference ⊗ Alice's input ⊗ the
/// register on Bob's interface.
#[derive(Clone, Debug)]
pub struct AdversarialInput {
    pub label: String,
    pub ref_dim: usize,
    pub state: DensityOperator,
}

/// Mixed family of inputs for the open interface: the honest resource,
/// random product states and states entangled with a reference.
pub fn adversarial_family(spec: &SystemSpec, count: usize, seed: u64) -> Result<Vec<AdversarialInput>> {
    let din = spec.program.input_dim();
    let m = spec.program.n_resource();
    let honest = crate::mbqc::build_cluster(&spec.program.resource)?;
    let mut out = Vec::with_capacity(count);
    for i in 0..count {
        let mut rng = rng_for(seed, i as u64);
        let rho_in = random_density(din, 2, &mut rng);
        let (label, ref_dim, state) = match i % 5 {
            0 => ("honest resource", 1, rho_in.matrix().kronecker(honest.to_density().matrix())),
            1 => ("random pure register", 1, rho_in.matrix().kronecker(random_state(m, &mut rng).to_density().matrix())),
            2 => ("random mixed register", 1, rho_in.matrix().kronecker(random_density(1 << m, 3, &mut rng).matrix())),
            3 => {
                let n = (din << m).trailing_zeros() as usize + 1;
                ("entangled with reference", 2, random_state(n, &mut rng).to_density().into_matrix())
            }
            _ => ("mixed, entangled with reference", 2, random_density(2 * (din << m), 3, &mut rng).into_matrix()),
        };
        out.push(AdversarialInput { label: format!("{label} #{i}"), ref_dim, state: DensityOperator::new(state)? });
    }
    Ok(out)
}

/// π_A R against Sσ with Bob's interface open, over `family` and the
/// entangled probe of twice the input dimension.
pub fn check_blindness_noverify(spec: &SystemSpec, family: &[AdversarialInput], seed: u64) -> Result<CheckReport> {
    if spec.variant != Variant::Noverify {
        return Err(Error::Config("blindness is certified on the protocol without verification".into()));
    }
    let real = build_real_system(spec, AdversaryPort::Open)?;
    let ideal = build_ideal_system(
        &IdealFunctionality::new(spec.clone()),
        IdealMode::Simulated { sigma: &SimulatorSigma, port: AdversaryPort::Open },
    )?;
    let mut cases = Vec::with_capacity(family.len() + 1);
    for input in family {
        let a = apply_with_reference(&real, input.state.matrix(), input.ref_dim)?;
        let b = apply_with_reference(&ideal, input.state.matrix(), input.ref_dim)?;
        cases.push(CaseResult::new(&input.label, state_gap(&a, &b), EXACT_TOL));
    }
    let probe = 2 * spec.input_dim(AdversaryPort::Open);
    cases.push(CaseResult::new("entangled probe", channel_gap(&real, &ideal, probe)?, EXACT_TOL));
    Ok(CheckReport::from_cases("blindness", config_hash(spec), seed, cases))
}

/// Bob keeps one qubit entangled with the register he sends. What he holds
/// afterwards must not depend on Alice's program or device, and the messages
/// he sees must be identical when only the program changes.
pub fn check_bob_view_noverify(
    pairs: &[(ClientProgram, ClientProgram)],
    devices: &[DeviceBehavior],
    seed: u64,
) -> Result<CheckReport> {
    let mut cases = Vec::new();
    for (i, (u, u2)) in pairs.iter().enumerate() {
        if u.n_resource() != u2.n_resource() || u.input != u2.input {
            return Err(Error::Config(format!("program pair {i} differs in shape")));
        }
        let mut rng = rng_for(seed, i as u64);
        let m = u.n_resource();
        let din = u.input_dim();
        let phi = random_state(din.trailing_zeros() as usize, &mut rng);
        let g = random_state(m + 1, &mut rng);
        // |Ψ⟩ over Bob's qubit ⊗ Alice's input ⊗ the register
        let dr = 1usize << m;
        let psi = CVector::from_fn(2 * din * dr, |idx, _| {
            let (b, rest) = (idx / (din * dr), idx % (din * dr));
            let (a, r) = (rest / dr, rest % dr);
            phi.amplitudes()[a] * g.amplitudes()[b * dr + r]
        });
        let joint = StateVector::new(psi)?.to_density();
        let bob_before = partial_trace_matrix(g.to_density().matrix(), &[2, dr], &[0])?;
        for device in devices {
            let mut held = Vec::new();
            for program in [u, u2] {
                let spec = SystemSpec::new(Variant::Noverify, m, program.clone(), device.clone())?;
                let ch = build_real_system(&spec, AdversaryPort::Open)?;
                let out = apply_with_reference(&ch, joint.matrix(), 2)?;
                held.push(partial_trace_matrix(&out, &[2, out.nrows() / 2], &[0])?);
            }
            let gap = state_gap(&held[0], &held[1]).max(state_gap(&held[0], &bob_before));
            cases.push(CaseResult::new(format!("pair {i}, w={}: Bob's qubit", device.w()), gap, EXACT_TOL));
        }
        let sent = random_state(m, &mut rng);
        for (label, bob) in [("honest Bob", BobImplementation::Honest { graph: u.resource.clone() }), ("state-sending Bob", BobImplementation::SendState { state: sent })] {
            let mut views = Vec::new();
            for program in [u, u2] {
                let input = match u.input {
                    crate::protocol::InputMode::Folded => ClientInput::Folded,
                    crate::protocol::InputMode::Teleported => ClientInput::Qubit(phi.clone()),
                };
                let (_, t) = run_noverify(&input, program, &DeviceBehavior::Honest, &bob, seed ^ i as u64)?;
                let mut buf = Vec::new();
                t.bob_view().write_jsonl(&mut buf)?;
                views.push(buf);
            }
            let differs = if views[0] == views[1] { 0.0 } else { 1.0 };
            cases.push(CaseResult::new(format!("pair {i}: {label} transcript"), differs, EXACT_TOL));
        }
    }
    Ok(CheckReport::from_cases("bob-view", config_hash(pairs), seed, cases))
}

fn protocol_config(spec: &SystemSpec) -> Result<ProtocolConfig> {
    Ok(ProtocolConfig {
        n: spec.n,
        code: CodeConfig::standard(spec.n, 1)?,
        program: spec.program.clone(),
        device: spec.device.clone(),
    })
}

/// Pure states over a qubit reference ⊗ Alice's input, the distinguisher's
/// inputs for the verified variant.
pub fn distinguisher_inputs(spec: &SystemSpec, count: usize, seed: u64) -> Vec<DensityOperator> {
    let din = spec.program.input_dim();
    let n = (2 * din).trailing_zeros() as usize;
    (0..count).map(|i| random_state(n, &mut rng_for(seed, i as u64)).to_density()).collect()
}

fn ideal_output(spec: &SystemSpec, input: &DensityOperator) -> Result<DensityOperator> {
    let v = KrausChannel::new(vec![spec.program.target_operator()?])?;
    DensityOperator::new(apply_with_reference(&v, input.matrix(), 2)?)
}

/// For each strategy: the real verified system against Sσ, bounded by 2δ
/// with the honest device and by equality otherwise.
pub fn check_security_verify(spec: &SystemSpec, strategies: &[AdversaryStrategy], seed: u64) -> Result<CheckReport> {
    if spec.variant != Variant::Verify {
        return Err(Error::Config("the 2δ bound concerns the verified protocol".into()));
    }
    let s = IdealFunctionality::new(spec.clone());
    let cfg = protocol_config(spec)?;
    let inputs = distinguisher_inputs(spec, 4, seed);
    let mut cases = Vec::with_capacity(strategies.len());
    for strategy in strategies {
        let bob = strategy.to_bob(spec.n, &spec.program.resource)?;
        let port = AdversaryPort::Strategy(&bob);
        let real = build_real_system(spec, port)?;
        let ideal = build_ideal_system(&s, IdealMode::Simulated { sigma: &SimulatorSigma, port })?;
        let mut gap = channel_gap(&real, &ideal, spec.input_dim(port))?;
        for input in &inputs {
            let a = apply_with_reference(&real, input.matrix(), 2)?;
            let b = apply_with_reference(&ideal, input.matrix(), 2)?;
            gap = gap.max(state_gap(&a, &b));
        }
        let bound = if spec.device.is_honest() { 2.0 * delta_for_strategy(strategy, &cfg)? + SECURITY_SLACK } else { EXACT_TOL };
        cases.push(CaseResult::new(&strategy.description, gap, bound));
    }
    Ok(CheckReport::from_cases("security", config_hash(spec), seed, cases))
}

/// Decomposes the real verified output on a few distinguisher inputs.
pub fn decompose_strategy(spec: &SystemSpec, strategy: &AdversaryStrategy, seed: u64) -> Result<Vec<FlaggedOutputDecomposition>> {
    let bob = strategy.to_bob(spec.n, &spec.program.resource)?;
    let real = build_real_system(spec, AdversaryPort::Strategy(&bob))?;
    distinguisher_inputs(spec, 3, seed)
        .iter()
        .map(|input| {
            let out = DensityOperator::new(apply_with_reference(&real, input.matrix(), 2)?)?;
            decompose_flagged_output(&out, &ideal_output(spec, input)?)
        })
        .collect()
}

/// Reconstruction of every decomposed output, and α = δ = 0 on honest runs.
pub fn check_decomposition(spec: &SystemSpec, strategies: &[AdversaryStrategy], seed: u64) -> Result<CheckReport> {
    let mut cases = Vec::new();
    for strategy in strategies {
        let parts = decompose_strategy(spec, strategy, seed)?;
        let worst = parts.iter().map(|p| p.reconstruction_error).fold(0.0, f64::max);
        cases.push(CaseResult::new(format!("{}: reconstruction", strategy.description), worst, EXACT_TOL));
        if matches!(strategy.kind, crate::adversary::StrategyKind::Honest) {
            let excess = parts.iter().map(|p| p.alpha + p.delta).fold(0.0, f64::max);
            cases.push(CaseResult::new(format!("{}: alpha + delta", strategy.description), excess, 0.0));
        }
    }
    Ok(CheckReport::from_cases("decomposition", config_hash(spec), seed, cases))
}
