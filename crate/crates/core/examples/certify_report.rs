use blindsim::experiments::{cmd_certify, CertifyConfig, Suite};

fn main() -> blindsim::Result<()> {
    let cfg = CertifyConfig { suite: Suite::Correctness, trials: Some(5), batches: None, planted: false, seed: 1 };
    let report = cmd_certify(&cfg)?;
    println!("{}", serde_json::to_string_pretty(&report)?);
    Ok(())
}
