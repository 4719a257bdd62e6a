use super::{BobImplementation, ClientProgram, DeviceBehavior, OneWayChannel, Transcript, Variant};
use crate::error::{Error, Result};
use crate::linalg::{qubit, CMatrix, DensityOperator, KrausChannel, StateVector};
use crate::mbqc::{build_cluster, correct_byproduct, execute, ByproductFrame, OutcomeSource};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

/// Alice's input `ρ_in`.
#[derive(Clone, Debug, PartialEq)]
pub enum ClientInput {
    /// Classically described; already part of the program.
    Folded,
    /// A qubit Alice holds.
    Qubit(StateVector),
}

impl ClientInput {
    pub(crate) fn check(&self, program: &ClientProgram) -> Result<()> {
        match (self, program.input) {
            (ClientInput::Folded, super::InputMode::Folded) => Ok(()),
            (ClientInput::Qubit(s), super::InputMode::Teleported) if s.n_qubits() == 1 => Ok(()),
            _ => Err(Error::Protocol("input does not match the program's input mode".into())),
        }
    }

    pub(crate) fn kets(&self) -> Vec<crate::linalg::C64> {
        match self {
            ClientInput::Folded => vec![crate::linalg::cr(1.0)],
            ClientInput::Qubit(s) => s.amplitudes().iter().copied().collect(),
        }
    }
}

/// Runs Alice's measurements on `received` (vertex order), with the input
/// qubit appended as the last vertex. Returns the corrected output and the
/// recorded outcomes.
pub(crate) fn client_measure(
    input: &ClientInput,
    program: &ClientProgram,
    device: &DeviceBehavior,
    received: &StateVector,
    rng: &mut ChaCha20Rng,
) -> Result<(StateVector, Vec<u8>)> {
    let n = program.n_resource();
    if received.n_qubits() != n {
        return Err(Error::Protocol(format!("Bob sent {} qubits, expected {n}", received.n_qubits())));
    }
    if let Some(out) = device.scripted_output(program.output_dim())? {
        return Ok((out, Vec::new()));
    }
    let program = program.with_angle_offset(device.angle_offset());
    let mut m = received.as_column();
    let mut total_qubits = n;
    if let Some(iv) = program.input_vertex() {
        let ket = CMatrix::from_column_slice(2, 1, &input.kets());
        m = m.kronecker(&ket);
        total_qubits += 1;
        qubit::apply_cz(&mut m, total_qubits, iv, program.entry);
    }
    let state = StateVector::new(m.column(0).into_owned())?;
    let graph = program.extended_graph();
    let run = execute(
        &graph,
        &program.pattern,
        &state,
        &ByproductFrame::identity(graph.vertex_count),
        &mut OutcomeSource::Sample(rng),
    )?;
    let out = if device.corrects() { correct_byproduct(&run.output_state, &run.frame)? } else { run.output_state };
    Ok((out, run.outcomes))
}

/// One run of the protocol without verification.
pub fn run_noverify(
    input: &ClientInput,
    program: &ClientProgram,
    device: &DeviceBehavior,
    bob: &BobImplementation,
    seed: u64,
) -> Result<(DensityOperator, Transcript)> {
    program.validate()?;
    input.check(program)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let n = program.n_resource();
    let mut transcript = Transcript::new(Variant::Noverify, n, seed);
    transcript.bob_local("prepare", &bob.describe());
    let sent = bob.prepare_noverify(&mut rng)?;
    if sent.n_qubits() != n {
        return Err(Error::Protocol(format!("Bob sent {} qubits, expected {n}", sent.n_qubits())));
    }
    let mut channel = OneWayChannel::new();
    for v in 0..n {
        channel.send(format!("g:{v}"));
        transcript.bob_send(&format!("g:{v}"));
    }
    let mut arrived = 0;
    while channel.receive().is_some() {
        arrived += 1;
    }
    debug_assert_eq!(arrived, n);
    let (out, outcomes) = client_measure(input, program, device, &sent, &mut rng)?;
    for (step, o) in program.pattern.steps.iter().zip(&outcomes) {
        transcript.alice_private("measure", &format!("{}:{:?}:{o}", step.vertex, step.basis));
    }
    transcript.alice_private("output", &format!("{:?}", out.amplitudes().as_slice()));
    transcript.secrets.outcomes = outcomes;
    Ok((out.to_density(), transcript))
}

/// Alice's side as a channel from `ρ_in ⊗ g'` to `ρ_out`.
pub fn noverify_client_channel(program: &ClientProgram, device: &DeviceBehavior) -> Result<KrausChannel> {
    let din = program.input_dim() << program.n_resource();
    if let Some(out) = device.scripted_output(program.output_dim())? {
        return Ok(KrausChannel::replacement(din, &out.to_density()));
    }
    let ops = program.with_angle_offset(device.angle_offset()).branch_operators(None, device.corrects())?;
    KrausChannel::new(ops)
}

/// The protocol with Bob plugged in, as a channel on `ρ_in`.
pub fn noverify_system_channel(
    program: &ClientProgram,
    device: &DeviceBehavior,
    bob: &BobImplementation,
) -> Result<KrausChannel> {
    let honest = build_cluster(&program.resource)?;
    let attach = bob.attach_channel(&honest, program.input_dim())?;
    attach.then(&noverify_client_channel(program, device)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates;
    use crate::protocol::{bob_honest_noverify, InputMode};

    #[test]
    fn honest_identity_program_on_zero() {
        // X-measured chain of 3 gives H·H = I; input |0⟩ teleported
        let p = ClientProgram::chain(2, &[0.0, 0.0], InputMode::Teleported).unwrap();
        let zero = StateVector::basis(1, 0);
        for seed in 0..8 {
            let (rho, t) =
                run_noverify(&ClientInput::Qubit(zero.clone()), &p, &DeviceBehavior::Honest, &bob_honest_noverify(p.resource.clone()), seed)
                    .unwrap();
            assert!((rho.fidelity_with_pure(&zero) - 1.0).abs() < 1e-10);
            assert_eq!(t.bob_view().n_qubits_sent, 2);
        }
    }

    #[test]
    fn folded_hadamard_on_zero() {
        // Folded input |+⟩ then angles (0, 0): H·H|+⟩... use one X step: H|+⟩ = |0⟩,
        // then H again gives |+⟩.
        let p = ClientProgram::chain(3, &[0.0, 0.0], InputMode::Folded).unwrap();
        let plus = StateVector::product(&[gates::PLUS]).unwrap();
        for seed in 0..8 {
            let (rho, _) =
                run_noverify(&ClientInput::Folded, &p, &DeviceBehavior::Honest, &bob_honest_noverify(p.resource.clone()), seed)
                    .unwrap();
            assert!((rho.fidelity_with_pure(&plus) - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn wrong_qubit_count_is_an_error() {
        let p = ClientProgram::chain(3, &[0.1, 0.2], InputMode::Folded).unwrap();
        let bob = BobImplementation::SendState { state: StateVector::zeros(2) };
        assert!(run_noverify(&ClientInput::Folded, &p, &DeviceBehavior::Honest, &bob, 1).is_err());
        let bob = BobImplementation::SendState { state: StateVector::zeros(3) };
        assert!(run_noverify(&ClientInput::Folded, &p, &DeviceBehavior::Honest, &bob, 1).is_ok());
    }

    #[test]
    fn system_channel_is_the_target_unitary() {
        let angles = [0.4, -0.3, 1.7, 2.9];
        let p = ClientProgram::chain(4, &angles, InputMode::Teleported).unwrap();
        let ch = noverify_system_channel(&p, &DeviceBehavior::Honest, &bob_honest_noverify(p.resource.clone())).unwrap();
        let u = KrausChannel::unitary(p.target_operator().unwrap()).unwrap();
        let d = crate::linalg::channel_distance(&ch, &u, 2).unwrap();
        assert!(d.half() < 1e-9);
    }
}
