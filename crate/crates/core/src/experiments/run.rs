use super::{input_mode, RunConfig, VERSION};
use crate::error::Result;
use crate::linalg::{c, CMatrix, CVector, StateVector};
use crate::protocol::{run_noverify, run_verify, ClientInput, ClientProgram, InputMode, RunMeta, Variant};
use serde::{Deserialize, Serialize};

pub const FIDELITY_TOL: f64 = 1e-9;

/// Last line written by `run`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub summary: bool,
    pub config_hash: String,
    pub version: String,
    pub seed: u64,
    pub variant: Variant,
    #[serde(rename = "N")]
    pub n: usize,
    /// Verdict `e` of the verified variant.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub e: Option<u8>,
    /// ⟨ψ_ideal|ρ_out|ψ_ideal⟩.
    pub fidelity: f64,
    /// Only an all-honest run can fail: it must accept with fidelity 1.
    pub pass: bool,
}

pub struct RunOutcome {
    pub transcript: Vec<u8>,
    pub summary: RunSummary,
}

impl RunOutcome {
    pub fn summary_line(&self) -> String {
        serde_json::to_string(&self.summary).expect("summary serializes")
    }
}

/// One protocol instance on a chain program, teleporting Alice's qubit in
/// whenever the chain has more than one vertex.
pub fn cmd_run(cfg: &RunConfig) -> Result<RunOutcome> {
    let resource = match cfg.variant {
        Variant::Noverify => cfg.n,
        Variant::Verify => cfg.n / 3,
    };
    let mode = input_mode(resource);
    let program = ClientProgram::chain(resource, &cfg.angles, mode)?;
    let (client_input, input) = match mode {
        InputMode::Folded => (ClientInput::Folded, CMatrix::identity(1, 1)),
        InputMode::Teleported => {
            let q = StateVector::normalized(CVector::from_iterator(2, cfg.input.iter().map(|&[re, im]| c(re, im))))?;
            let column = q.as_column();
            (ClientInput::Qubit(q), column)
        }
    };
    let bob = cfg.bob.to_bob(cfg.n, &program.resource)?;
    let (out, e, transcript) = match cfg.variant {
        Variant::Noverify => {
            let (out, t) = run_noverify(&client_input, &program, &cfg.device, &bob, cfg.seed)?;
            (out, None, t)
        }
        Variant::Verify => {
            let (out, flag, t) = run_verify(&client_input, &program, &cfg.device, &bob, None, cfg.n, cfg.seed)?;
            (out, Some(flag.0), t)
        }
    };
    let ideal = program.target_operator()? * input;
    let fidelity = (ideal.adjoint() * out.matrix() * &ideal)[(0, 0)].re;
    let honest = bob.is_honest() && cfg.device.is_honest();
    let pass = !honest || (e.unwrap_or(0) == 0 && fidelity >= 1.0 - FIDELITY_TOL);

    let config_hash = cfg.hash();
    let meta = RunMeta { config_hash: config_hash.clone(), version: VERSION.into(), seed: cfg.seed };
    let mut bytes = Vec::new();
    transcript.write_jsonl(&meta, &mut bytes)?;
    Ok(RunOutcome {
        transcript: bytes,
        summary: RunSummary {
            summary: true,
            config_hash,
            version: VERSION.into(),
            seed: cfg.seed,
            variant: cfg.variant,
            n: cfg.n,
            e,
            fidelity,
            pass,
        },
    })
}
