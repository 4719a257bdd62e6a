use blindsim::experiments::{cmd_bound_sweep, SweepConfig};

fn main() -> blindsim::Result<()> {
    let cfg = SweepConfig { n: vec![3, 9], d: vec![1, 3], support: vec![1], trials: 20_000, seed: 3 };
    let outcome = cmd_bound_sweep(&cfg)?;
    print!("{}", String::from_utf8_lossy(&outcome.csv));
    println!("{} rows, {} over the bound", outcome.rows.len(), outcome.violations);
    Ok(())
}
