use blindsim::adversary::{
    undetected_error_prob_bruteforce, verification_bound, AdversaryStrategy, CodeConfig, Pauli, PauliAttack,
};
use blindsim::experiments::{ExperimentConfig, OneOrMany};
use blindsim::linalg::gates::{self, Gate2, PLUS};
use blindsim::linalg::random::{random_channel, random_density, random_state};
use blindsim::linalg::{max_abs_diff, partial_trace, qubit, trace_norm_distance, CMatrix, DensityOperator, StateVector};
use blindsim::mbqc::{correct_byproduct, linear_pattern, run_pattern_forced, ByproductFrame};
use blindsim::protocol::{run_verify, BobImplementation, ClientInput, ClientProgram, DeviceBehavior, InputMode, PermutationTag, Role};
use blindsim::security::homogeneity_p_value;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use std::f64::consts::PI;

fn rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}

fn circuit(angles: &[f64]) -> StateVector {
    let mut m = CMatrix::from_column_slice(2, 1, &PLUS);
    for &t in angles {
        let g: Gate2 = gates::mul(&gates::H, &gates::phase(-t));
        qubit::apply_1q(&mut m, 1, 0, &g);
    }
    StateVector::new(m.column(0).into_owned()).unwrap()
}

fn pauli() -> impl Strategy<Value = Pauli> {
    prop_oneof![Just(Pauli::X), Just(Pauli::Y), Just(Pauli::Z)]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn channels_preserve_trace_and_positivity(seed in any::<u64>(), kraus in 1usize..4) {
        let mut r = rng(seed);
        let ch = random_channel(4, 4, kraus, &mut r);
        let rho = random_density(4, 2, &mut r);
        let out = ch.apply(&rho).unwrap();
        prop_assert!((out.trace() - 1.0).abs() < 1e-10);
        prop_assert!(out.validate().is_ok());
    }

    #[test]
    fn partial_trace_of_a_product_returns_the_factor(seed in any::<u64>()) {
        let mut r = rng(seed);
        let a = random_density(2, 2, &mut r);
        let b = random_density(4, 3, &mut r);
        let ab = DensityOperator::new(a.matrix().kronecker(b.matrix())).unwrap();
        let back = partial_trace(&ab, &[2, 4], &[0]).unwrap();
        prop_assert!(max_abs_diff(back.matrix(), a.matrix()) < 1e-12);
    }

    #[test]
    fn trace_distance_is_a_bounded_metric(seed in any::<u64>()) {
        let mut r = rng(seed);
        let [a, b, c] = [0, 1, 2].map(|_| random_density(4, 2, &mut r));
        let ab = trace_norm_distance(&a, &b).unwrap().raw_trace_norm;
        let ba = trace_norm_distance(&b, &a).unwrap().raw_trace_norm;
        let ac = trace_norm_distance(&a, &c).unwrap().raw_trace_norm;
        let cb = trace_norm_distance(&c, &b).unwrap().raw_trace_norm;
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=2.0 + 1e-12).contains(&ab));
        prop_assert!(ab <= ac + cb + 1e-12);
    }

    #[test]
    fn corrected_chain_output_is_independent_of_the_branch(
        angles in prop::collection::vec(-PI..PI, 1..5),
        branch in any::<u16>(),
    ) {
        let (g, p) = linear_pattern(&angles);
        let outcomes: Vec<u8> = (0..angles.len()).map(|i| ((branch >> i) & 1) as u8).collect();
        let run = run_pattern_forced(&g, &p, &outcomes).unwrap();
        let fixed = correct_byproduct(&run.output_state, &run.frame).unwrap();
        prop_assert!(fixed.fidelity(&circuit(&angles)) >= 1.0 - 1e-9);
    }

    #[test]
    fn frames_compose_as_a_group(bits in prop::collection::vec(any::<bool>(), 2..16)) {
        let bits = if bits.len() % 2 == 1 { &bits[1..] } else { &bits[..] };
        let q = ByproductFrame::from_bits(bits).unwrap();
        prop_assert!(q.compose(&q).unwrap().is_identity());
        prop_assert_eq!(q.compose(&ByproductFrame::identity(q.len())).unwrap(), q);
    }

    #[test]
    fn sampled_labellings_are_balanced_and_ordered(seed in any::<u64>(), m in 1usize..5) {
        let p = PermutationTag::sample(3 * m, &mut rng(seed)).unwrap();
        let roles = p.roles();
        for role in [Role::Computation, Role::TrapPlus, Role::TrapZero] {
            prop_assert_eq!(roles.iter().filter(|&&r| r == role).count(), m);
        }
        prop_assert!(p.computation_positions().windows(2).all(|w| w[0] < w[1]));
        let inv = p.inverse();
        prop_assert!(p.permutation().iter().enumerate().all(|(i, &q)| inv[q] == i));
    }

    #[test]
    fn exact_probability_respects_the_bound(
        sites in prop::collection::btree_set(0usize..9, 1..4),
        paulis in prop::collection::vec(pauli(), 3),
        d in prop_oneof![Just(1usize), Just(3)],
    ) {
        let sites: Vec<usize> = sites.into_iter().collect();
        let paulis = paulis[..sites.len()].to_vec();
        let attack = PauliAttack::new(sites, paulis).unwrap();
        let p = undetected_error_prob_bruteforce(9, &CodeConfig::standard(9, d).unwrap(), &attack).unwrap();
        prop_assert!(p.within_bound(d));
        prop_assert!(p.value() <= verification_bound(d) + 1e-15);
    }

    #[test]
    fn homogeneity_p_value_ignores_row_order(table in prop::collection::vec([1u64..500, 1u64..500], 2..5)) {
        let p = homogeneity_p_value(&table);
        let mut rev = table.clone();
        rev.reverse();
        prop_assert!((0.0..=1.0).contains(&p));
        prop_assert!((p - homogeneity_p_value(&rev)).abs() < 1e-12);
    }

    #[test]
    fn strategies_round_trip_through_json(sites in prop::collection::btree_set(0usize..6, 1..4), p in pauli()) {
        let sites: Vec<usize> = sites.into_iter().collect();
        let attack = PauliAttack::new(sites.clone(), vec![p; sites.len()]).unwrap();
        let s = AdversaryStrategy::pauli(&attack);
        let back: AdversaryStrategy = serde_json::from_str(&serde_json::to_string(&s).unwrap()).unwrap();
        prop_assert_eq!(back, s);
    }

    #[test]
    fn flags_override_the_config_file(file_seed in any::<u64>(), flag_seed in proptest::option::of(any::<u64>()), n in 1usize..20) {
        let file = ExperimentConfig { seed: Some(file_seed), n: Some(OneOrMany::One(n)), ..Default::default() };
        let json = serde_json::to_string(&file).unwrap();
        let parsed: ExperimentConfig = serde_json::from_str(&json).unwrap();
        prop_assert_eq!(&parsed, &file);
        let mut merged = parsed.overlay(ExperimentConfig { seed: flag_seed, ..Default::default() });
        prop_assert_eq!(merged.resolve_seed(Some("5")).unwrap(), flag_seed.unwrap_or(file_seed));
        prop_assert_eq!(merged.n, Some(OneOrMany::One(n)));
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn verified_runs_are_reproducible(seed in any::<u64>(), theta in -PI..PI) {
        let program = ClientProgram::chain(2, &[theta, 0.3], InputMode::Teleported).unwrap();
        let input = ClientInput::Qubit(random_state(1, &mut rng(seed)));
        let bob = BobImplementation::Honest { graph: program.resource.clone() };
        let a = run_verify(&input, &program, &DeviceBehavior::Honest, &bob, None, 6, seed).unwrap();
        let b = run_verify(&input, &program, &DeviceBehavior::Honest, &bob, None, 6, seed).unwrap();
        prop_assert_eq!(a.2, b.2);
        prop_assert_eq!(a.1, b.1);
        prop_assert!(a.1.is_accept());
    }

    #[test]
    fn random_states_are_normalized(seed in any::<u64>(), n in 1usize..6) {
        let s = random_state(n, &mut rng(seed));
        prop_assert!((s.amplitudes().norm() - 1.0).abs() < 1e-12);
    }
}
