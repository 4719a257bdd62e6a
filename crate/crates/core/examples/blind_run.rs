use blindsim::linalg::StateVector;
use blindsim::protocol::{run_noverify, BobImplementation, ClientInput, ClientProgram, DeviceBehavior, InputMode};

fn main() -> blindsim::Result<()> {
    let input = ClientInput::Qubit(StateVector::basis(1, 0));
    let bob_view = |angles: &[f64]| -> blindsim::Result<Vec<u8>> {
        let program = ClientProgram::chain(4, angles, InputMode::Teleported)?;
        let bob = BobImplementation::Honest { graph: program.resource.clone() };
        let (out, transcript) = run_noverify(&input, &program, &DeviceBehavior::Honest, &bob, 42)?;
        let ideal = program.target_operator()? * StateVector::basis(1, 0).as_column();
        let fidelity = (ideal.adjoint() * out.matrix() * &ideal)[(0, 0)].re;
        println!("angles {angles:?}: fidelity {fidelity:.12}, {} events", transcript.events.len());
        let mut view = Vec::new();
        transcript.bob_view().write_jsonl(&mut view)?;
        Ok(view)
    };
    let a = bob_view(&[0.1, 0.2, 0.3, 0.4])?;
    let b = bob_view(&[2.0, -1.0, 0.5, 3.0])?;
    println!("Bob's transcript is the same for both programs: {}", a == b);
    print!("{}", String::from_utf8_lossy(&a));
    Ok(())
}
