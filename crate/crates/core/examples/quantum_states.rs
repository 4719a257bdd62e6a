use blindsim::linalg::random::random_channel;
use blindsim::linalg::{channel_distance, partial_trace, trace_norm_distance, DensityOperator, KrausChannel, StateVector};
use blindsim::security::bell_pair;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn main() -> blindsim::Result<()> {
    let bell = bell_pair().to_density();
    let half = partial_trace(&bell, &[2, 2], &[0])?;
    println!("reduced Bell state purity: {:.3}", half.purity());

    let zero = StateVector::basis(1, 0).to_density();
    let one = StateVector::basis(1, 1).to_density();
    let d = trace_norm_distance(&zero, &one)?;
    println!("|0> vs |1>: raw trace norm {}, half distance {}", d.raw_trace_norm, d.half_trace_distance);

    let mut rng = ChaCha20Rng::seed_from_u64(1);
    let noisy = random_channel(2, 2, 2, &mut rng);
    let out = noisy.apply(&DensityOperator::maximally_mixed(2))?;
    println!("random channel keeps the trace: {:.12}", out.trace());

    let gap = channel_distance(&KrausChannel::identity(2), &KrausChannel::dephasing(2), 2)?;
    println!("identity vs full dephasing: {:.6} (entangled probe {:.6})", gap.estimate.raw_trace_norm, gap.entangled_probe.raw_trace_norm);
    Ok(())
}
