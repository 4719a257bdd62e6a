use blindsim::adversary::{delta_for_strategy, strategy_library, CodeConfig, ProtocolConfig};
use blindsim::protocol::{ClientProgram, DeviceBehavior, InputMode};

fn main() -> blindsim::Result<()> {
    let n = 6;
    let config = ProtocolConfig {
        n,
        code: CodeConfig::standard(n, 1)?,
        program: ClientProgram::chain(2, &[0.9, 0.9], InputMode::Teleported)?,
        device: DeviceBehavior::Honest,
    };
    for strategy in strategy_library(n) {
        let delta = delta_for_strategy(&strategy, &config)?;
        println!("{:<40} delta = {delta:.6}", strategy.description);
    }
    let json = serde_json::to_string_pretty(&strategy_library(n)[1])?;
    println!("attack file format:\n{json}");
    Ok(())
}
