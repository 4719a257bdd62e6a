//! Exact small-scale simulation of blind quantum computation with a
//! measurement-only client.
//!
//! The server prepares a resource state and streams its qubits one way to the
//! client, who only measures. Modules:
//!
//! - [`linalg`]: dense states, channels and distance measures.
//! - [`mbqc`]: cluster states, adaptive measurement patterns and byproduct frames.
//! - [`protocol`]: client and server behaviour for both protocol variants.
//! - [`adversary`]: attack library and trap-detection oracles.
//! - [`security`]: real and ideal systems, simulators and the certification checks.
//! - [`experiments`]: config-driven runs, sweeps and reports used by the CLI.

pub mod error;
pub mod linalg;
pub mod mbqc;
pub mod protocol;
pub mod adversary;
pub mod security;
pub mod experiments;

pub use error::{Error, Result};
