use blindsim::mbqc::Basis;
use blindsim::security::{bell_pair, nosignaling_test, planted_power, Backend};

fn main() -> blindsim::Result<()> {
    let settings = [Basis::X, Basis::Z];
    for backend in [Backend::Quantum, Backend::PlantedSignaling { strength: 0.03 }] {
        let result = nosignaling_test(&bell_pair(), &settings, &settings, 100_000, 5, backend)?;
        println!("{backend:?}: p-values per Bob setting {:?}, rejects at 0.01: {}", result.p_values, result.rejects(0.01));
        for (y, table) in result.tables.iter().enumerate() {
            println!("  Bob setting {y}: counts per Alice setting {table:?}");
        }
    }
    println!("analytic power of the planted test: {:.4}", planted_power(0.03, 100_000, 0.01));
    Ok(())
}
