use blindsim::adversary::{strategy_library, AdversaryStrategy, Pauli, PauliAttack};
use blindsim::experiments::security_spec;
use blindsim::protocol::DeviceBehavior;
use blindsim::security::{check_security_verify, decompose_strategy};

fn main() -> blindsim::Result<()> {
    let spec = security_spec(6, DeviceBehavior::Honest)?;
    let report = check_security_verify(&spec, &strategy_library(6), 3)?;
    for case in &report.cases {
        println!("{:<40} distance {:.6} <= {:.6}: {}", case.label, case.measured, case.bound, case.pass);
    }

    let attack = AdversaryStrategy::pauli(&PauliAttack::single(0, Pauli::Z));
    for (i, part) in decompose_strategy(&security_spec(3, DeviceBehavior::Honest)?, &attack, 3)?.into_iter().enumerate() {
        println!(
            "Z on position 0, part {i}: alpha {:.4}, delta {:.4}, ideal weight {:.4}, reconstruction error {:.1e}",
            part.alpha, part.delta, part.ideal_weight, part.reconstruction_error
        );
    }
    Ok(())
}
