use blindsim::adversary::{AdversaryStrategy, Pauli, PauliAttack};
use blindsim::linalg::StateVector;
use blindsim::protocol::{run_verify, ClientInput, ClientProgram, DeviceBehavior, InputMode};

fn main() -> blindsim::Result<()> {
    let n = 6;
    let program = ClientProgram::chain(2, &[0.9, -0.4], InputMode::Teleported)?;
    let input = ClientInput::Qubit(StateVector::basis(1, 0));
    let ideal = program.target_operator()? * StateVector::basis(1, 0).as_column();

    for strategy in [AdversaryStrategy::honest(), AdversaryStrategy::pauli(&PauliAttack::single(1, Pauli::Y))] {
        let bob = strategy.to_bob(n, &program.resource)?;
        let (mut rejected, mut wrong) = (0, 0);
        let runs = 60;
        for seed in 0..runs {
            let (out, flag, _) = run_verify(&input, &program, &DeviceBehavior::Honest, &bob, None, n, seed)?;
            let fidelity = (ideal.adjoint() * out.matrix() * &ideal)[(0, 0)].re;
            if !flag.is_accept() {
                rejected += 1;
            } else if fidelity < 1.0 - 1e-9 {
                wrong += 1;
            }
        }
        println!("{}: rejected {rejected}/{runs}, accepted a wrong output {wrong}/{runs}", strategy.description);
    }
    Ok(())
}
