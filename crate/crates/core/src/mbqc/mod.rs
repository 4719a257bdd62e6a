//! Measurement-based computation on graph states.
//!
//! Patterns carry explicit byproduct dependencies: the angle of each step is
//! adapted as `(-1)^{sx} θ + sz π`, and the outputs end up under a Pauli
//! frame σ_q that the caller corrects with [`correct_byproduct`].

mod engine;
mod frame;
mod graph;
mod pattern;

pub use engine::{
    build_cluster, build_open_cluster, chain_step_unitary, execute, execute_lazy, for_each_branch, measure_site, outcome_sign,
    output_frame, physical_ket, recorded_outcome, run_pattern, run_pattern_forced, seeded_rng, step_frame, Outcome,
    OutcomeSource, PatternRun, Register,
};
pub use frame::{correct_byproduct, ByproductFrame, Correctable};
pub use graph::GraphSpec;
pub use pattern::{compile_with_flow, ladder_pattern, linear_pattern, Basis, MeasurementPattern, OutputFrame, Step};

#[cfg(test)]
mod tests;
