use crate::error::{Error, Result};
use crate::linalg::{CMatrix, KrausChannel, StateVector};
use crate::mbqc::{build_cluster, GraphSpec};
use rand::Rng;

/// What Bob does with the resource he is supposed to send.
#[derive(Clone, Debug)]
pub enum BobImplementation {
    /// Prepares the graph state of `graph` and sends it qubit by qubit.
    Honest { graph: GraphSpec },
    /// Sends `state` no matter what.
    SendState { state: StateVector },
    /// Prepares honestly, then applies `channel` to the register before sending.
    Attack { graph: GraphSpec, channel: KrausChannel },
}

pub fn bob_honest_noverify(graph: GraphSpec) -> BobImplementation {
    BobImplementation::Honest { graph }
}

/// Picks one Kraus branch with its Born weight and renormalizes.
pub fn sample_kraus<R: Rng + ?Sized>(channel: &KrausChannel, state: &StateVector, rng: &mut R) -> Result<StateVector> {
    if channel.dim_in() != state.dim() || channel.dim_out() != state.dim() {
        return Err(Error::DimensionMismatch(format!(
            "attack acts on dimension {}, register has {}",
            channel.dim_in(),
            state.dim()
        )));
    }
    let psi = state.amplitudes();
    let branches: Vec<_> = channel.kraus().iter().map(|k| k * psi).collect();
    let weights: Vec<f64> = branches.iter().map(|b| b.norm_squared()).collect();
    let total: f64 = weights.iter().sum();
    let mut pick = rng.random::<f64>() * total;
    for (b, w) in branches.iter().zip(&weights) {
        if *w > 0.0 && pick < *w {
            return StateVector::normalized(b.clone());
        }
        pick -= w;
    }
    let last = weights.iter().rposition(|&w| w > 0.0).ok_or_else(|| Error::InvalidState("attack annihilates the state".into()))?;
    StateVector::normalized(branches[last].clone())
}

impl BobImplementation {
    pub fn is_honest(&self) -> bool {
        matches!(self, BobImplementation::Honest { .. })
    }

    /// Short public description of Bob's own choice.
    pub fn describe(&self) -> String {
        match self {
            BobImplementation::Honest { graph } => format!("honest:{}v:{}e", graph.vertex_count, graph.edges.len()),
            BobImplementation::SendState { state } => format!("send_state:{}q", state.n_qubits()),
            BobImplementation::Attack { graph, channel } => {
                format!("attack:{}v:{}kraus", graph.vertex_count, channel.kraus().len())
            }
        }
    }

    /// The register Bob sends when his honest resource would be `honest`.
    pub fn emit<R: Rng + ?Sized>(&self, honest: &StateVector, rng: &mut R) -> Result<StateVector> {
        match self {
            BobImplementation::Honest { .. } => Ok(honest.clone()),
            BobImplementation::SendState { state } => Ok(state.clone()),
            BobImplementation::Attack { channel, .. } => sample_kraus(channel, honest, rng),
        }
    }

    /// The state sent in the protocol without verification.
    pub fn prepare_noverify<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<StateVector> {
        match self {
            BobImplementation::Honest { graph } | BobImplementation::Attack { graph, .. } => {
                self.emit(&build_cluster(graph)?, rng)
            }
            BobImplementation::SendState { state } => Ok(state.clone()),
        }
    }

    /// Kraus operators `|g'_k⟩` of what Bob sends, given the honest register.
    pub fn resource_kets(&self, honest: &StateVector) -> Result<Vec<CMatrix>> {
        match self {
            BobImplementation::Honest { .. } => Ok(vec![honest.as_column()]),
            BobImplementation::SendState { state } => Ok(vec![state.as_column()]),
            BobImplementation::Attack { channel, .. } => {
                if channel.dim_in() != honest.dim() {
                    return Err(Error::DimensionMismatch("attack does not match the register".into()));
                }
                Ok(channel.kraus().iter().map(|k| k * honest.as_column()).collect())
            }
        }
    }

    /// Bob's resource as a preparation attached to Alice's input:
    /// ρ_in ↦ ρ_in ⊗ g'.
    pub fn attach_channel(&self, honest: &StateVector, dim_in: usize) -> Result<KrausChannel> {
        let kets = self.resource_kets(honest)?;
        let id = CMatrix::identity(dim_in, dim_in);
        KrausChannel::new(kets.iter().map(|k| id.kronecker(k)).collect())
    }
}
