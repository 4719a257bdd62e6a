//! Real and ideal systems, the simulator, and the numerical certification
//! of correctness, blindness, verifiable security and composition.

mod checks;
mod composition;
mod decomposition;
mod nosignaling;
mod report;
mod systems;

pub use checks::{
    adversarial_family, channel_gap, check_blindness_noverify, check_bob_view_noverify, check_correctness,
    check_decomposition, check_security_verify, decompose_strategy, distinguisher_inputs, target_channel,
    AdversarialInput, EXACT_TOL, SECURITY_SLACK,
};
pub use composition::{
    attach_converter, attach_simulator, construction_distance, instance_seed, mix, parallel_composition,
    parallel_composition_check, random_construction, random_serial_instance, serial_composition,
    serial_composition_check, CompositionMargin, SerialInstance, COMPOSITION_TOL,
};
pub use decomposition::{decompose_flagged_output, FlaggedOutputDecomposition, ZERO_SNAP};
pub use nosignaling::{
    bell_pair, homogeneity_p_value, joint_probabilities, nosignaling_batches, nosignaling_test, planted_power, Backend,
    BatchSummary, NoSignalingResult, MIN_EXPECTED, MIN_TRIALS,
};
pub use report::{config_hash, CaseResult, CheckReport};
pub use systems::{
    accept_branch_replaced, apply_with_reference, build_ideal_system, build_real_system, AdversaryPort, IdealFunctionality,
    IdealMode, SimulatorSigma, SystemSpec,
};
