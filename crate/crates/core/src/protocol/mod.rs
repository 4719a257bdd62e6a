//! Client and server behaviour for the two protocol variants.
//!
//! Bob only ever sends qubits; Alice only ever measures. In the variant
//! without verification Bob sends a graph state and Alice runs her pattern on
//! it. In the verified variant Alice first steers a larger resource into a
//! secretly permuted product of the computation resource and trap qubits,
//! then measures those, rejecting if any trap fails.

mod bob;
mod channel;
mod device;
mod noverify;
mod permutation;
mod program;
mod transcript;
mod verify;

pub use bob::{bob_honest_noverify, sample_kraus, BobImplementation};
pub use channel::{Direction, OneWayChannel, SendEvent};
pub use device::DeviceBehavior;
pub use noverify::{noverify_client_channel, noverify_system_channel, run_noverify, ClientInput};
pub use permutation::{PermutationTag, Role};
pub use program::{ClientProgram, InputMode};
pub use transcript::{bob_view, payload_hash, AliceSecrets, BobView, Event, RunMeta, Sender, Transcript, Variant};
pub use verify::{
    build_psi_p, computation_channel, pauli_weights, twirl_branches, TwirlBranch, phase2_program, reduce_pauli_weights, run_phase1, run_phase2, run_verify,
    stabilizer_element, twirled_attack, verify_output_literal, verify_resource, verify_system_channel, Phase1Run,
    PreparationGraph, VerificationFlag,
};
