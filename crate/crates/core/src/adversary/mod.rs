//! Malicious servers and devices, and the trap-detection oracles used to
//! bound how often a wrong result slips through.

mod oracle;
mod strategy;

pub use oracle::{
    attack_outcome, trap_flag_prob_bruteforce, undetected_error_prob_bruteforce, undetected_error_prob_montecarlo,
    undetected_error_prob_montecarlo_many, undetected_error_prob_over, verification_bound, AttackOutcome, CodeConfig,
    ExactProbability, MonteCarloEstimate, Pauli, PauliAttack, MAX_BRUTEFORCE_N, MC_CHUNK,
};
pub use strategy::{
    cheating_device, delta_for_strategy, exact_delta, strategy_library, AdaptiveStep, AdversaryStrategy,
    ProtocolConfig, StrategyKind, MAX_EXACT_DELTA_N,
};
