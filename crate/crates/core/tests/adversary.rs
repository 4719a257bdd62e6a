use blindsim::adversary::*;
use blindsim::protocol::{ClientProgram, DeviceBehavior, InputMode, PermutationTag, Role};

/// Independent oracle: walk every base-3 string of length n, keep those
/// with n/3 of each symbol, and apply the trap rules directly.
fn oracle(n: usize, d: usize, attack: &[(usize, char)]) -> (u64, u64) {
    let mut hits = 0;
    let mut total = 0;
    for code in 0..3u64.pow(n as u32) {
        let mut digits = Vec::with_capacity(n);
        let mut c = code;
        for _ in 0..n {
            digits.push((c % 3) as u8);
            c /= 3;
        }
        if (0..3).any(|s| digits.iter().filter(|&&x| x == s).count() != n / 3) {
            continue;
        }
        total += 1;
        // 0 = computation, 1 = |+> trap, 2 = |0> trap
        let mut logical_hits = 0;
        let mut caught = false;
        for &(site, p) in attack {
            match digits[site] {
                0 => logical_hits += 1,
                1 => caught |= p == 'Z' || p == 'Y',
                _ => caught |= p == 'X' || p == 'Y',
            }
        }
        if logical_hits >= d && !caught {
            hits += 1;
        }
    }
    (hits, total)
}

fn as_chars(a: &PauliAttack) -> Vec<(usize, char)> {
    a.sites.iter().zip(&a.paulis).map(|(&s, p)| (s, format!("{p:?}").chars().next().unwrap())).collect()
}

#[test]
fn empty_attack_never_succeeds() {
    let p = undetected_error_prob_bruteforce(9, &CodeConfig::standard(9, 1).unwrap(), &PauliAttack::empty()).unwrap();
    assert_eq!(p.numerator, 0);
    let mc = undetected_error_prob_montecarlo(9, &CodeConfig::standard(9, 1).unwrap(), &PauliAttack::empty(), 2000, 1).unwrap();
    assert_eq!((mc.estimate, mc.stderr), (0.0, 0.0));
}

#[test]
fn single_x_at_n3_is_one_third() {
    let a = PauliAttack::single(0, Pauli::X);
    let (h, t) = oracle(3, 1, &as_chars(&a));
    assert_eq!((h, t), (2, 6));
    let p = undetected_error_prob_bruteforce(3, &CodeConfig::uncoded(), &a).unwrap();
    assert_eq!(p.numerator * t as u128, h as u128 * p.denominator);
    assert!((p.value() - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn bruteforce_matches_independent_oracle() {
    for n in [3, 6, 9] {
        for d in [1, 3] {
            let Ok(code) = CodeConfig::standard(n, d) else { continue };
            for k in 1..=2 {
                for a in PauliAttack::all_with_support(n, k).iter().step_by(5) {
                    let p = undetected_error_prob_bruteforce(n, &code, a).unwrap();
                    let (h, t) = oracle(n, d, &as_chars(a));
                    assert_eq!(p.numerator * t as u128, h as u128 * p.denominator, "n={n} d={d} {a:?}");
                }
            }
        }
    }
}

#[test]
fn three_site_attack_at_d3() {
    let code = CodeConfig::standard(9, 3).unwrap();
    let a = PauliAttack::new(vec![0, 4, 8], vec![Pauli::X, Pauli::Z, Pauli::Y]).unwrap();
    let p = undetected_error_prob_bruteforce(9, &code, &a).unwrap();
    let (h, t) = oracle(9, 3, &as_chars(&a));
    assert!(h > 0);
    assert_eq!(p.numerator * t as u128, h as u128 * p.denominator);
    assert!(p.within_bound(3));
}

#[test]
fn montecarlo_agrees_with_bruteforce() {
    let code = CodeConfig::uncoded();
    let a = PauliAttack::single(0, Pauli::X);
    let exact = undetected_error_prob_bruteforce(3, &code, &a).unwrap().value();
    let mc = undetected_error_prob_montecarlo(3, &code, &a, 100_000, 7).unwrap();
    assert!((mc.estimate - exact).abs() <= 3.0 * mc.stderr);
}

#[test]
fn montecarlo_is_independent_of_thread_count() {
    let code = CodeConfig::standard(6, 1).unwrap();
    let attacks = PauliAttack::all_with_support(6, 1);
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| undetected_error_prob_montecarlo_many(6, &code, &attacks, 20_000, 5).unwrap())
    };
    assert_eq!(run(1), run(4));
    let single = undetected_error_prob_montecarlo(6, &code, &attacks[3], 20_000, 5).unwrap();
    assert_eq!(single, run(2)[3]);
}

#[test]
fn trap_flagging_is_monotone_in_support() {
    for n in [3, 6] {
        for small in PauliAttack::all_with_support(n, 1).into_iter().chain(PauliAttack::all_with_support(n, 2)) {
            let base = trap_flag_prob_bruteforce(n, &small).unwrap().value();
            for site in 0..n {
                if small.sites.contains(&site) {
                    continue;
                }
                for p in Pauli::ALL {
                    let mut big = small.clone();
                    big.sites.push(site);
                    big.paulis.push(p);
                    assert!(trap_flag_prob_bruteforce(n, &big).unwrap().value() >= base - 1e-15);
                }
            }
        }
    }
}

#[test]
fn rejects_bad_requests() {
    assert!(undetected_error_prob_bruteforce(15, &CodeConfig::uncoded(), &PauliAttack::empty()).is_err());
    assert!(undetected_error_prob_bruteforce(6, &CodeConfig::uncoded(), &PauliAttack::single(6, Pauli::X)).is_err());
    assert!(PauliAttack::new(vec![1, 1], vec![Pauli::X, Pauli::Z]).is_err());
    assert!(undetected_error_prob_montecarlo(3, &CodeConfig::uncoded(), &PauliAttack::empty(), 10, 0).is_err());
    assert!(cheating_device(DeviceBehavior::Honest).is_err());
    assert!(cheating_device(DeviceBehavior::FlagFlip).is_ok());
}

fn n3_config() -> ProtocolConfig {
    ProtocolConfig {
        n: 3,
        code: CodeConfig::uncoded(),
        program: ClientProgram::chain(1, &[], InputMode::Folded).unwrap(),
        device: DeviceBehavior::Honest,
    }
}

fn n6_config() -> ProtocolConfig {
    ProtocolConfig {
        n: 6,
        code: CodeConfig::uncoded(),
        program: ClientProgram::chain(2, &[0.7, -1.1], InputMode::Teleported).unwrap(),
        device: DeviceBehavior::Honest,
    }
}

#[test]
fn delta_of_honest_is_zero() {
    for cfg in [n3_config(), n6_config()] {
        assert_eq!(delta_for_strategy(&AdversaryStrategy::honest(), &cfg).unwrap(), 0.0);
    }
}

#[test]
fn exact_delta_matches_oracle_for_z_at_n3() {
    let s = AdversaryStrategy::pauli(&PauliAttack::single(0, Pauli::Z));
    let exact = exact_delta(&s, &n3_config()).unwrap();
    assert!((exact - 1.0 / 3.0).abs() < 1e-12);
    assert!((delta_for_strategy(&s, &n3_config()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
    // X leaves |+> alone, so the exact value is below the conservative oracle
    let x = AdversaryStrategy::pauli(&PauliAttack::single(0, Pauli::X));
    assert_eq!(exact_delta(&x, &n3_config()).unwrap(), 0.0);
    assert!((delta_for_strategy(&x, &n3_config()).unwrap() - 1.0 / 3.0).abs() < 1e-12);
}

#[test]
fn depolarizing_delta_is_linear_in_pauli_terms() {
    for cfg in [n3_config(), n6_config()] {
        let n = cfg.n;
        let dep = AdversaryStrategy::new(StrategyKind::Depolarize { sites: (0..n).collect(), p: 1.0 }, "");
        let exact = exact_delta(&dep, &cfg).unwrap();
        let mut by_terms = 0.0;
        let mut oracle_sum = 0.0;
        let count = 4usize.pow(n as u32) as f64;
        for idx in 0..4usize.pow(n as u32) {
            let mut sites = vec![];
            let mut paulis = vec![];
            for s in 0..n {
                let v = (idx >> (2 * s)) & 3;
                if v > 0 {
                    sites.push(s);
                    paulis.push(Pauli::ALL[v - 1]);
                }
            }
            let a = PauliAttack::new(sites, paulis).unwrap();
            by_terms += exact_delta(&AdversaryStrategy::pauli(&a), &cfg).unwrap() / count;
            oracle_sum += undetected_error_prob_bruteforce(n, &cfg.code, &a).unwrap().value() / count;
        }
        assert!((exact - by_terms).abs() < 1e-12, "N = {n}");
        assert!(exact <= oracle_sum + 1e-12);
        assert!(exact <= verification_bound(1));
    }
}

#[test]
fn known_permutation_diagnostic() {
    // Z on a position the adversary knows to be a |+> trap is always caught.
    let p = PermutationTag::from_roles(&[Role::TrapPlus, Role::Computation, Role::TrapZero]).unwrap();
    let a = PauliAttack::single(0, Pauli::Z);
    let r = undetected_error_prob_over(&[p], &CodeConfig::uncoded(), &a).unwrap();
    assert_eq!(r.numerator, 0);
}

#[test]
fn strategies_round_trip_and_are_channels() {
    for s in strategy_library(6) {
        let json = serde_json::to_string(&s).unwrap();
        let back: AdversaryStrategy = serde_json::from_str(&json).unwrap();
        assert_eq!(back, s);
        if let Some(ch) = s.channel(6).unwrap() {
            assert!(ch.trace_preservation_error() < 1e-10, "{}", s.description);
        }
    }
    let parsed: AdversaryStrategy = serde_json::from_str(r#"{"kind":"pauli_attack","sites":[2],"paulis":["Y"]}"#).unwrap();
    assert_eq!(parsed.pauli_attack().unwrap(), PauliAttack::single(2, Pauli::Y));
    let bad: AdversaryStrategy = serde_json::from_str(r#"{"kind":"pauli_attack","sites":[7],"paulis":["Y"]}"#).unwrap();
    assert!(bad.channel(6).is_err());
}
