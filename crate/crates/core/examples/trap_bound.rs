use blindsim::adversary::{
    undetected_error_prob_bruteforce, undetected_error_prob_montecarlo, verification_bound, CodeConfig, Pauli, PauliAttack,
};

fn main() -> blindsim::Result<()> {
    for (n, d) in [(3, 1), (9, 1), (9, 3), (12, 3)] {
        let code = CodeConfig::standard(n, d)?;
        let attack = PauliAttack::new((0..d).collect(), vec![Pauli::Y; d])?;
        let exact = undetected_error_prob_bruteforce(n, &code, &attack)?;
        let mc = undetected_error_prob_montecarlo(n, &code, &attack, 100_000, 7)?;
        println!(
            "N={n:2} d={d}: exact {}/{} = {:.5}, Monte Carlo {:.5} ± {:.5}, bound {:.5}, within: {}",
            exact.numerator,
            exact.denominator,
            exact.value(),
            mc.estimate,
            mc.stderr,
            verification_bound(d),
            exact.within_bound(d)
        );
    }
    Ok(())
}
