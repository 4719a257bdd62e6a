use blindsim::protocol::{ClientProgram, DeviceBehavior, InputMode, Variant};
use blindsim::security::{adversarial_family, check_blindness_noverify, check_bob_view_noverify, SystemSpec};

fn main() -> blindsim::Result<()> {
    let program = ClientProgram::chain(4, &[0.3, -1.2, 2.0, 0.7], InputMode::Teleported)?;
    for device in [DeviceBehavior::Honest, DeviceBehavior::WrongAngles { offset: 0.5 }, DeviceBehavior::SkipCorrection] {
        let spec = SystemSpec::new(Variant::Noverify, 4, program.clone(), device.clone())?;
        let family = adversarial_family(&spec, 10, 1)?;
        let report = check_blindness_noverify(&spec, &family, 1)?;
        println!("w={}: worst distance {:.2e}, pass {}", device.w(), report.measured, report.pass);
    }
    let other = ClientProgram::chain(4, &[1.0, 0.0, -0.5, 2.5], InputMode::Teleported)?;
    let view = check_bob_view_noverify(&[(program, other)], &[DeviceBehavior::Honest, DeviceBehavior::SkipCorrection], 2)?;
    for case in &view.cases {
        println!("{}: {:.2e}", case.label, case.measured);
    }
    Ok(())
}
