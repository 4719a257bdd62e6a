use blindsim::adversary::{strategy_library, AdversaryStrategy, Pauli, PauliAttack};
use blindsim::linalg::random::random_state;
use blindsim::linalg::{CMatrix, DensityOperator, KrausChannel, StateVector};
use blindsim::mbqc::{build_cluster, Basis};
use blindsim::protocol::{BobImplementation, ClientProgram, DeviceBehavior, InputMode, Variant};
use blindsim::security::*;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

fn noverify_spec(device: DeviceBehavior) -> SystemSpec {
    let program = ClientProgram::chain(6, &[0.3, -1.2, 2.0, 0.7, -0.4, 1.1], InputMode::Teleported).unwrap();
    SystemSpec::new(Variant::Noverify, 6, program, device).unwrap()
}

fn verify_spec(n: usize, device: DeviceBehavior) -> SystemSpec {
    let program = if n == 3 {
        ClientProgram::chain(1, &[], InputMode::Folded).unwrap()
    } else {
        ClientProgram::chain(n / 3, &vec![0.9; n / 3], InputMode::Teleported).unwrap()
    };
    SystemSpec::new(Variant::Verify, n, program, device).unwrap()
}

fn scripted() -> Vec<DeviceBehavior> {
    vec![
        DeviceBehavior::WrongAngles { offset: 0.4 },
        DeviceBehavior::SkipCorrection,
        DeviceBehavior::always_accept(&StateVector::basis(1, 1)),
    ]
}

#[test]
fn spec_validation() {
    let p = ClientProgram::chain(2, &[0.1, 0.2], InputMode::Teleported).unwrap();
    assert!(SystemSpec::new(Variant::Verify, 5, p.clone(), DeviceBehavior::Honest).is_err());
    assert!(SystemSpec::new(Variant::Verify, 9, p.clone(), DeviceBehavior::Honest).is_err());
    assert!(SystemSpec::new(Variant::Verify, 6, p.clone(), DeviceBehavior::Honest).is_ok());
    assert!(SystemSpec::new(Variant::Noverify, 3, p, DeviceBehavior::Honest).is_err());
}

#[test]
fn identical_channels_are_at_distance_zero() {
    let ch = KrausChannel::dephasing(2);
    assert_eq!(channel_gap(&ch, &ch, 2).unwrap(), 0.0);
}

#[test]
fn correctness_holds_for_every_device() {
    for device in std::iter::once(DeviceBehavior::Honest).chain(scripted()) {
        let r = check_correctness(&noverify_spec(device.clone()), 1).unwrap();
        assert!(r.pass, "noverify {device:?}: {r:?}");
        for n in [3, 6] {
            let mut devices = scripted();
            devices.push(DeviceBehavior::FlagFlip);
            for d in std::iter::once(DeviceBehavior::Honest).chain(devices) {
                let r = check_correctness(&verify_spec(n, d.clone()), 2).unwrap();
                assert!(r.pass, "verify N={n} {d:?}: {r:?}");
            }
        }
    }
}

#[test]
fn honest_noverify_is_the_target_unitary() {
    let spec = noverify_spec(DeviceBehavior::Honest);
    let bob = spec.honest_bob();
    let real = build_real_system(&spec, AdversaryPort::Strategy(&bob)).unwrap();
    assert!(channel_gap(&real, &target_channel(&spec).unwrap(), 2).unwrap() < 1e-9);
}

#[test]
fn explicit_honest_resource_matches_honest_bob() {
    let spec = noverify_spec(DeviceBehavior::Honest);
    let g = build_cluster(&spec.program.resource).unwrap();
    let sent = BobImplementation::SendState { state: g };
    let honest = spec.honest_bob();
    let a = build_real_system(&spec, AdversaryPort::Strategy(&sent)).unwrap();
    let b = build_real_system(&spec, AdversaryPort::Strategy(&honest)).unwrap();
    assert!(channel_gap(&a, &b, 2).unwrap() < 1e-12);

    let spec = verify_spec(6, DeviceBehavior::Honest);
    let identity = BobImplementation::Attack { graph: spec.program.resource.clone(), channel: KrausChannel::identity(64) };
    let a = build_real_system(&spec, AdversaryPort::Strategy(&identity)).unwrap();
    let b = build_real_system(&spec, AdversaryPort::Strategy(&spec.honest_bob())).unwrap();
    assert!(channel_gap(&a, &b, 2).unwrap() < 1e-12);
}

#[test]
fn honest_verify_never_rejects() {
    let spec = verify_spec(6, DeviceBehavior::Honest);
    let real = build_real_system(&spec, AdversaryPort::Strategy(&spec.honest_bob())).unwrap();
    for k in real.kraus() {
        for o in 0..k.nrows() / 2 {
            assert!(k.row(2 * o + 1).iter().all(|x| x.norm() < 1e-12));
        }
    }
}

#[test]
fn open_port_does_not_exist_in_the_verified_variant() {
    let spec = verify_spec(3, DeviceBehavior::Honest);
    assert!(build_real_system(&spec, AdversaryPort::Open).is_err());
    let s = IdealFunctionality::new(spec);
    assert!(build_ideal_system(&s, IdealMode::Simulated { sigma: &SimulatorSigma, port: AdversaryPort::Open }).is_err());
}

#[test]
fn simulated_ideal_forwards_any_register() {
    let spec = noverify_spec(DeviceBehavior::WrongAngles { offset: 1.3 });
    let s = IdealFunctionality::new(spec.clone());
    let g = random_state(6, &mut ChaCha20Rng::seed_from_u64(4));
    let bob = BobImplementation::SendState { state: g };
    let port = AdversaryPort::Strategy(&bob);
    let real = build_real_system(&spec, port).unwrap();
    let ideal = build_ideal_system(&s, IdealMode::Simulated { sigma: &SimulatorSigma, port }).unwrap();
    assert!(channel_gap(&real, &ideal, 2).unwrap() < 1e-9);
}

#[test]
fn blindness_over_family_and_devices() {
    for device in std::iter::once(DeviceBehavior::Honest).chain(scripted()) {
        let spec = noverify_spec(device);
        let family = adversarial_family(&spec, 10, 3).unwrap();
        let r = check_blindness_noverify(&spec, &family, 3).unwrap();
        assert!(r.pass, "{r:?}");
        assert_eq!(r.cases.len(), 11);
    }
}

#[test]
fn bob_side_is_independent_of_program_and_device() {
    let pairs: Vec<_> = [(0.2, 1.9), (-0.7, 3.0)]
        .iter()
        .map(|&(a, b)| {
            (
                ClientProgram::chain(3, &[a, 0.5, b], InputMode::Teleported).unwrap(),
                ClientProgram::chain(3, &[b, -1.0, a], InputMode::Teleported).unwrap(),
            )
        })
        .collect();
    let devices = [DeviceBehavior::Honest, DeviceBehavior::SkipCorrection];
    let r = check_bob_view_noverify(&pairs, &devices, 9).unwrap();
    assert!(r.pass, "{r:?}");
    assert_eq!(r.cases.len(), 2 * (2 + 2));
}

#[test]
fn security_bound_for_the_library() {
    for n in [3, 6] {
        let r = check_security_verify(&verify_spec(n, DeviceBehavior::Honest), &strategy_library(n), 5).unwrap();
        assert!(r.pass, "N={n}: {r:#?}");
        assert!(r.cases[0].measured < 1e-12);
    }
}

#[test]
fn cheating_device_gives_exact_equality() {
    for device in [DeviceBehavior::always_accept(&StateVector::basis(1, 0)), DeviceBehavior::FlagFlip] {
        let r = check_security_verify(&verify_spec(6, device), &strategy_library(6), 6).unwrap();
        assert!(r.pass);
        assert!(r.cases.iter().all(|c| c.measured <= 1e-9));
    }
}

#[test]
fn decomposition_of_honest_and_single_pauli_runs() {
    let spec = verify_spec(3, DeviceBehavior::Honest);
    for p in decompose_strategy(&spec, &AdversaryStrategy::honest(), 1).unwrap() {
        assert_eq!((p.alpha, p.delta), (0.0, 0.0));
        assert!(p.reconstruction_error < 1e-12);
    }
    // Z on position 0: flagged when that position is the |+> trap, wrong and
    // unflagged when it is the computation qubit; each happens 1/3 of the time.
    let z = AdversaryStrategy::pauli(&PauliAttack::single(0, Pauli::Z));
    for p in decompose_strategy(&spec, &z, 1).unwrap() {
        assert!((p.alpha - 1.0 / 3.0).abs() < 1e-9);
        assert!((p.delta - 1.0 / 3.0).abs() < 1e-9);
        assert!(p.reconstruction_error < 1e-9);
        assert!(p.eta.is_some() && p.eta_error.is_some());
    }
    let r = check_decomposition(&verify_spec(6, DeviceBehavior::Honest), &strategy_library(6), 2).unwrap();
    assert!(r.pass, "{r:#?}");
}

#[test]
fn honest_resource_through_the_simulator_is_ideal() {
    let spec = verify_spec(6, DeviceBehavior::Honest);
    let s = IdealFunctionality::new(spec.clone());
    let bob = spec.honest_bob();
    let ideal = build_ideal_system(&s, IdealMode::Simulated { sigma: &SimulatorSigma, port: AdversaryPort::Strategy(&bob) }).unwrap();
    let psi = random_state(1, &mut ChaCha20Rng::seed_from_u64(8));
    let out = ideal.apply(&psi.to_density()).unwrap();
    let v = spec.program.target_operator().unwrap();
    let sigma = DensityOperator::new(&v * psi.to_density().matrix() * v.adjoint()).unwrap();
    let p = decompose_flagged_output(&out, &sigma).unwrap();
    assert_eq!((p.alpha, p.delta), (0.0, 0.0));
    assert!((p.ideal_weight - 1.0).abs() < 1e-12);
}

#[test]
fn input_dependent_acceptance_is_reported() {
    // accept |0>, reject |1>: the acceptance probability depends on the input
    let mut k = CMatrix::zeros(4, 2);
    k[(0, 0)] = 1.0.into();
    k[(3, 1)] = 1.0.into();
    let inner = KrausChannel::new(vec![k]).unwrap();
    assert!(accept_branch_replaced(&inner, &CMatrix::identity(2, 2)).is_err());
}

#[test]
fn homogeneity_matches_hand_computation() {
    // statistic 25/3 with one degree of freedom: p = erfc(sqrt(25/6))
    let p = homogeneity_p_value(&[[30, 70], [50, 50]]);
    assert!((p - 0.003892417122778627).abs() < 1e-9);
    assert_eq!(homogeneity_p_value(&[[0, 0], [5, 5]]), 1.0);
    assert_eq!(homogeneity_p_value(&[[100, 1], [100, 2]]), 1.0);
}

#[test]
fn bell_pair_does_not_signal() {
    let settings = [Basis::X, Basis::Z];
    let r = nosignaling_test(&bell_pair(), &settings, &settings, 100_000, 1, Backend::Quantum).unwrap();
    assert!(!r.rejects(0.01), "{r:?}");
    let product = StateVector::product(&[blindsim::linalg::gates::PLUS, blindsim::linalg::gates::ZERO]).unwrap();
    let r = nosignaling_test(&product, &settings, &settings, 20_000, 2, Backend::Quantum).unwrap();
    assert!(!r.rejects(0.01));
    assert!(nosignaling_test(&bell_pair(), &settings, &settings, 100, 1, Backend::Quantum).is_err());
}

#[test]
fn planted_signal_is_caught() {
    let power = planted_power(0.03, 100_000, 0.01);
    assert!(power >= 0.99);
    let s = nosignaling_batches(20, 100_000, 3, 0.01, Backend::PlantedSignaling { strength: 0.03 }).unwrap();
    assert_eq!(s.rejections, 20);
}

#[test]
fn bell_correlations() {
    let p = joint_probabilities(&bell_pair(), &Basis::Z, &Basis::Z).unwrap();
    assert!((p[0] - 0.5).abs() < 1e-15 && (p[3] - 0.5).abs() < 1e-15 && p[1] < 1e-15);
    let p = joint_probabilities(&bell_pair(), &Basis::X, &Basis::Z).unwrap();
    assert!(p.iter().all(|&x| (x - 0.25).abs() < 1e-15));
}

#[test]
fn composition_special_cases() {
    let mut rng = ChaCha20Rng::seed_from_u64(12);
    let inst = random_serial_instance(77).unwrap();
    // identity converter with an exact second construction
    let id = KrausChannel::identity(2);
    let m = serial_composition(&inst.pi, &inst.r, &inst.s, &id, &inst.s, &inst.sigma, &id, 1).unwrap();
    assert!(m.eps_prime < 1e-12);
    assert!(m.composed <= m.eps + 1e-9);
    // both exact
    let r = blindsim::linalg::random::random_channel(2, 2, 2, &mut rng);
    let m = serial_composition(&id, &r, &r, &id, &r, &id, &id, 1).unwrap();
    assert_eq!((m.eps, m.eps_prime, m.composed), (0.0, 0.0, 0.0));
    let (a, b) = random_construction(5).unwrap();
    let m = parallel_composition(&a, &a, &a, &b, 1).unwrap();
    assert_eq!(m.eps, 0.0);
    assert!(m.composed <= m.eps_prime + 1e-9);
}

#[test]
fn composition_random_instances() {
    let r = serial_composition_check(40, 21).unwrap();
    assert!(r.pass, "{:?}", r.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
    let r = parallel_composition_check(40, 22).unwrap();
    assert!(r.pass, "{:?}", r.cases.iter().filter(|c| !c.pass).collect::<Vec<_>>());
}

#[test]
fn reports_are_reproducible() {
    let spec = verify_spec(3, DeviceBehavior::Honest);
    let a = serde_json::to_string(&check_security_verify(&spec, &strategy_library(3), 4).unwrap()).unwrap();
    let b = serde_json::to_string(&check_security_verify(&spec, &strategy_library(3), 4).unwrap()).unwrap();
    assert_eq!(a, b);
    assert!(a.contains("\"config_hash\""));
}
