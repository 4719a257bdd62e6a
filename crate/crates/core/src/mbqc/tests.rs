use super::*;
use crate::linalg::gates::{self, Gate2, ONE, PLUS, ZERO};
use crate::linalg::{cr, qubit, CMatrix, StateVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::f64::consts::{FRAC_1_SQRT_2, PI};

/// Independent oracle: apply single-qubit gates to a column vector.
fn apply_gates(start: [crate::linalg::C64; 2], gates_in_order: &[Gate2]) -> StateVector {
    let mut m = CMatrix::from_column_slice(2, 1, &start);
    for g in gates_in_order {
        qubit::apply_1q(&mut m, 1, 0, g);
    }
    StateVector::new(m.column(0).into_owned()).unwrap()
}

fn all_branches(steps: usize) -> impl Iterator<Item = Vec<Outcome>> {
    (0..1usize << steps).map(move |b| (0..steps).map(|i| ((b >> i) & 1) as u8).collect())
}

#[test]
fn single_vertex_cluster_is_plus() {
    let s = build_cluster(&GraphSpec::empty(1)).unwrap();
    assert_eq!(s, StateVector::product(&[PLUS]).unwrap());
}

#[test]
fn two_vertex_cluster() {
    let s = build_cluster(&GraphSpec::linear(2)).unwrap();
    // (|0+⟩ + |1−⟩)/√2 = (1, 1, 1, -1)/2
    let expected = [0.5, 0.5, 0.5, -0.5];
    for (a, e) in s.amplitudes().iter().zip(expected) {
        assert!((a - cr(e)).norm() < 1e-15);
    }
}

#[test]
fn edge_order_irrelevant() {
    let a = GraphSpec::new(4, [(0, 1), (1, 2), (2, 3), (0, 3)], vec![0; 4]).unwrap();
    let b = GraphSpec::new(4, [(3, 0), (3, 2), (2, 1), (1, 0)], vec![0; 4]).unwrap();
    assert_eq!(build_cluster(&a).unwrap(), build_cluster(&b).unwrap());
}

#[test]
fn too_many_vertices_rejected() {
    assert!(build_cluster(&GraphSpec::empty(13)).is_err());
}

#[test]
fn x_on_plus_is_deterministic() {
    let plus = StateVector::product(&[PLUS]).unwrap();
    assert!(matches!(
        measure_site(&plus, 0, &Basis::X, &mut OutcomeSource::Forced(&[1])),
        Err(crate::Error::ZeroProbability { .. })
    ));
    let mut rng = ChaCha20Rng::seed_from_u64(9);
    for _ in 0..50 {
        let (o, _) = measure_site(&plus, 0, &Basis::X, &mut OutcomeSource::Sample(&mut rng)).unwrap();
        assert_eq!(outcome_sign(o), 1);
    }
}

#[test]
fn forced_zero_probability_outcome_errors() {
    let (g, p) = (GraphSpec::empty(2), MeasurementPattern {
        steps: vec![Step { vertex: 0, basis: Basis::X, x_deps: vec![], z_deps: vec![] }],
        output_vertices: vec![1],
        output_frames: vec![OutputFrame::default()],
    });
    assert!(matches!(run_pattern_forced(&g, &p, &[1]), Err(crate::Error::ZeroProbability { .. })));
    assert!(run_pattern_forced(&g, &p, &[0]).is_ok());
}

#[test]
fn unbiased_measurements() {
    let plus = StateVector::product(&[PLUS]).unwrap();
    let zero = StateVector::product(&[ZERO]).unwrap();
    let g = GraphSpec::empty(1);
    let reg = Register::from_state(&plus, vec![0]);
    let p0 = reg.project(0, &gates::z_ket(0)).unwrap().weight();
    assert!((p0 - 0.5).abs() < 1e-15);
    for k in 0..16 {
        let theta = 2.0 * PI * k as f64 / 16.0;
        let reg = Register::from_state(&zero, vec![0]);
        let w = reg.project(0, &gates::xy_ket(theta, 0)).unwrap().weight();
        assert!((w - 0.5).abs() < 1e-15);
    }
    let _ = g;
}

#[test]
fn two_chain_x_gives_hadamard() {
    // Oracle: H|+⟩ = |0⟩.
    let expected = apply_gates(PLUS, &[gates::H]);
    assert!((expected.fidelity(&StateVector::product(&[ZERO]).unwrap()) - 1.0).abs() < 1e-15);
    let (g, p) = linear_pattern(&[0.0]);
    for b in all_branches(1) {
        let run = run_pattern_forced(&g, &p, &b).unwrap();
        let fixed = correct_byproduct(&run.output_state, &run.frame).unwrap();
        assert!((fixed.fidelity(&expected) - 1.0).abs() < 1e-12, "branch {b:?}");
    }
}

#[test]
fn three_chain_gives_phase_rotation() {
    for k in 0..8 {
        let theta = 0.37 + k as f64 * 0.71;
        // Oracle: angles (−θ, 0) realize H·H·diag(1, e^{iθ}) = diag(1, e^{iθ}).
        let expected = apply_gates(PLUS, &[gates::phase(theta)]);
        let (g, p) = linear_pattern(&[-theta, 0.0]);
        for b in all_branches(2) {
            let run = run_pattern_forced(&g, &p, &b).unwrap();
            let fixed = correct_byproduct(&run.output_state, &run.frame).unwrap();
            assert!((fixed.fidelity(&expected) - 1.0).abs() < 1e-12);
        }
    }
}

#[test]
fn empty_pattern_is_identity() {
    let g = GraphSpec::linear(3);
    let p = MeasurementPattern::empty(&g);
    let run = run_pattern(&g, &p, 1).unwrap();
    assert_eq!(run.output_state, build_cluster(&g).unwrap());
    assert!(run.frame.is_identity());
    assert!(run.outcomes.is_empty());
}

#[test]
fn random_chain_patterns_every_branch() {
    let mut rng = ChaCha20Rng::seed_from_u64(11);
    for _ in 0..20 {
        let angles: Vec<f64> = (0..4).map(|_| rng.random_range(-PI..PI)).collect();
        let oracle: Vec<Gate2> = angles.iter().map(|&t| gates::mul(&gates::H, &gates::phase(-t))).collect();
        let expected = apply_gates(PLUS, &oracle);
        let (g, p) = linear_pattern(&angles);
        for b in all_branches(4) {
            let run = run_pattern_forced(&g, &p, &b).unwrap();
            let fixed = correct_byproduct(&run.output_state, &run.frame).unwrap();
            assert!(fixed.fidelity(&expected) >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn ladder_matches_circuit_oracle() {
    let mut rng = ChaCha20Rng::seed_from_u64(5);
    for _ in 0..5 {
        let angles: Vec<[f64; 2]> = (0..2).map(|_| [rng.random_range(-PI..PI), rng.random_range(-PI..PI)]).collect();
        // Oracle circuit: CZ, then per column H·P(−θ) on each wire followed by CZ.
        let mut m = CMatrix::from_column_slice(4, 1, &[cr(0.5); 4]);
        qubit::apply_cz(&mut m, 2, 0, 1);
        for col in &angles {
            for (w, &t) in col.iter().enumerate() {
                qubit::apply_1q(&mut m, 2, w, &gates::mul(&gates::H, &gates::phase(-t)));
            }
            qubit::apply_cz(&mut m, 2, 0, 1);
        }
        let expected = StateVector::new(m.column(0).into_owned()).unwrap();
        let (g, p) = ladder_pattern(&angles);
        for b in all_branches(4) {
            let run = run_pattern_forced(&g, &p, &b).unwrap();
            let fixed = correct_byproduct(&run.output_state, &run.frame).unwrap();
            assert!(fixed.fidelity(&expected) >= 1.0 - 1e-9);
        }
    }
}

#[test]
fn z_measurement_cuts_the_chain() {
    // Z on the middle of a 3-chain leaves |+⟩|+⟩ up to Z byproducts on both ends.
    let g = GraphSpec::linear(3);
    let order = [(1, Basis::Z)];
    let p = compile_with_flow(&g, &order, &Default::default(), &[0, 2]).unwrap();
    for b in all_branches(1) {
        let run = run_pattern_forced(&g, &p, &b).unwrap();
        let fixed = correct_byproduct(&run.output_state, &run.frame).unwrap();
        assert!((fixed.fidelity(&StateVector::plus(2)) - 1.0).abs() < 1e-12);
    }
}

#[test]
fn initial_x_frame_flips_z_outcome() {
    let g = GraphSpec::empty(2);
    let p = compile_with_flow(&g, &[(0, Basis::Z)], &Default::default(), &[1]).unwrap();
    let state = StateVector::product(&[ONE, PLUS]).unwrap();
    let mut initial = ByproductFrame::identity(2);
    initial.x[0] = true;
    let mut rng = ChaCha20Rng::seed_from_u64(0);
    let run = execute(&g, &p, &state, &initial, &mut OutcomeSource::Sample(&mut rng)).unwrap();
    // The frame says the physical |1⟩ is X|0⟩, so the recorded outcome is 0.
    assert_eq!(run.outcomes, vec![0]);
}

#[test]
fn branch_enumeration_matches_forced_runs() {
    let (g, p) = linear_pattern(&[0.3, -1.1]);
    let cluster = build_cluster(&g).unwrap();
    let reg = Register::from_state(&cluster, (0..3).collect());
    let mut total = 0.0;
    for_each_branch(&reg, &p, &ByproductFrame::identity(3), &mut |out, outcomes, frame| {
        let forced = run_pattern_forced(&g, &p, outcomes).unwrap();
        assert_eq!(&forced.frame, frame);
        let w = out.weight();
        assert!((w - forced.probability).abs() < 1e-12);
        total += w;
        Ok(())
    })
    .unwrap();
    assert!((total - 1.0).abs() < 1e-12);
    let _ = FRAC_1_SQRT_2;
}

#[test]
fn lazy_execution_matches_full_state() {
    let angles: Vec<[f64; 2]> = vec![[0.3, -0.8], [1.9, 0.2], [-2.4, 0.6]];
    let (g, p) = ladder_pattern(&angles);
    for b in all_branches(6) {
        let full = run_pattern_forced(&g, &p, &b).unwrap();
        let lazy = execute_lazy(&g, &p, &mut OutcomeSource::Forced(&b)).unwrap();
        assert_eq!(full.frame, lazy.frame);
        assert!((full.probability - lazy.probability).abs() < 1e-12);
        assert!((full.output_state.fidelity(&lazy.output_state) - 1.0).abs() < 1e-12);
    }
}
