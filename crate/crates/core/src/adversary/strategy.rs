use super::oracle::{undetected_error_prob_bruteforce, CodeConfig, Pauli, PauliAttack};
use crate::error::{Error, Result};
use crate::linalg::random::{random_channel, random_state};
use crate::linalg::{c, choi_distance, gates, CMatrix, KrausChannel, StateVector};
use crate::mbqc::{ByproductFrame, GraphSpec};
use crate::protocol::{computation_channel, twirl_branches, BobImplementation, ClientProgram, DeviceBehavior};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use serde::{Deserialize, Serialize};

/// One step of an adaptive attack: Bob measures `site` in the eigenbasis of
/// `basis` and, on the minus outcome, applies `on_minus`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdaptiveStep {
    pub site: usize,
    pub basis: Pauli,
    #[serde(default)]
    pub on_minus: Vec<(usize, Pauli)>,
}

/// What a malicious Bob does, always through his legal interface: he
/// prepares something and sends it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StrategyKind {
    Honest,
    /// Sends |0…0⟩, or a random pure state drawn from `seed`.
    WrongResource {
        #[serde(default)]
        seed: Option<u64>,
    },
    PauliAttack { sites: Vec<usize>, paulis: Vec<Pauli> },
    /// Kraus matrices given row-major as `[re, im]` pairs.
    ChannelAttack { kraus: Vec<Vec<Vec<[f64; 2]>>> },
    /// Random channel on the whole register.
    RandomChannel { seed: u64, kraus_count: usize },
    /// Each listed site is fully depolarized with probability `p`.
    Depolarize { sites: Vec<usize>, p: f64 },
    Adaptive { script: Vec<AdaptiveStep> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AdversaryStrategy {
    #[serde(flatten)]
    pub kind: StrategyKind,
    #[serde(default)]
    pub description: String,
}

fn pauli_string(n: usize, ops: &[(usize, Pauli)]) -> Result<CMatrix> {
    let mut f = ByproductFrame::identity(n);
    for &(s, p) in ops {
        if s >= n {
            return Err(Error::Attack(format!("site {s} outside 0..{n}")));
        }
        let (x, z) = p.bits();
        f.x[s] ^= x;
        f.z[s] ^= z;
    }
    Ok(f.operator())
}

fn single_site(n: usize, site: usize, g: &CMatrix) -> CMatrix {
    let mut out = CMatrix::identity(1, 1);
    for j in 0..n {
        out = if j == site { out.kronecker(g) } else { out.kronecker(&CMatrix::identity(2, 2)) };
    }
    out
}

fn eigen_projector(p: Pauli, minus: bool) -> CMatrix {
    let m = match p {
        Pauli::X => gates::to_matrix(&gates::X),
        Pauli::Y => gates::to_matrix(&gates::Y),
        Pauli::Z => gates::to_matrix(&gates::Z),
    };
    let id = CMatrix::identity(2, 2);
    let s = if minus { -1.0 } else { 1.0 };
    (id + m.scale(s)).scale(0.5)
}

impl AdversaryStrategy {
    pub fn new(kind: StrategyKind, description: impl Into<String>) -> Self {
        Self { kind, description: description.into() }
    }

    pub fn honest() -> Self {
        Self::new(StrategyKind::Honest, "honest")
    }

    pub fn pauli(attack: &PauliAttack) -> Self {
        let desc = attack.sites.iter().zip(&attack.paulis).map(|(s, p)| format!("{p:?}{s}")).collect::<Vec<_>>().join("");
        Self::new(StrategyKind::PauliAttack { sites: attack.sites.clone(), paulis: attack.paulis.clone() }, desc)
    }

    pub fn pauli_attack(&self) -> Option<PauliAttack> {
        match &self.kind {
            StrategyKind::PauliAttack { sites, paulis } => Some(PauliAttack { sites: sites.clone(), paulis: paulis.clone() }),
            _ => None,
        }
    }

    /// The attack as a channel on an `n`-qubit register, if it is one.
    pub fn channel(&self, n: usize) -> Result<Option<KrausChannel>> {
        let dim = 1usize << n;
        let ch = match &self.kind {
            StrategyKind::Honest | StrategyKind::WrongResource { .. } => return Ok(None),
            StrategyKind::PauliAttack { sites, paulis } => {
                PauliAttack::new(sites.clone(), paulis.clone())?.validate(n)?;
                let ops: Vec<(usize, Pauli)> = sites.iter().copied().zip(paulis.iter().copied()).collect();
                KrausChannel::unitary(pauli_string(n, &ops)?)?
            }
            StrategyKind::ChannelAttack { kraus } => {
                let mats = kraus
                    .iter()
                    .map(|rows| {
                        if rows.len() != dim || rows.iter().any(|r| r.len() != dim) {
                            return Err(Error::Attack(format!("Kraus matrices must be {dim}x{dim}")));
                        }
                        Ok(CMatrix::from_fn(dim, dim, |i, j| c(rows[i][j][0], rows[i][j][1])))
                    })
                    .collect::<Result<Vec<_>>>()?;
                KrausChannel::new(mats).map_err(|e| Error::Attack(e.to_string()))?
            }
            StrategyKind::RandomChannel { seed, kraus_count } => {
                let mut rng = ChaCha20Rng::seed_from_u64(*seed);
                random_channel(dim, dim, (*kraus_count).max(1), &mut rng)
            }
            StrategyKind::Depolarize { sites, p } => {
                if !(0.0..=1.0).contains(p) {
                    return Err(Error::Attack(format!("depolarizing probability {p} outside [0, 1]")));
                }
                if let Some(&s) = sites.iter().find(|&&s| s >= n) {
                    return Err(Error::Attack(format!("site {s} outside 0..{n}")));
                }
                let local = [(1.0 - 0.75 * p, None), (p / 4.0, Some(Pauli::X)), (p / 4.0, Some(Pauli::Y)), (p / 4.0, Some(Pauli::Z))];
                let local: Vec<_> = local.into_iter().filter(|(w, _)| *w > 0.0).collect();
                let mut terms: Vec<(f64, Vec<(usize, Pauli)>)> = vec![(1.0, vec![])];
                for &s in sites {
                    terms = terms
                        .into_iter()
                        .flat_map(|(w, ops)| {
                            local.iter().map(move |&(lw, q)| {
                                let mut ops = ops.clone();
                                ops.extend(q.map(|q| (s, q)));
                                (w * lw, ops)
                            })
                        })
                        .collect();
                }
                let mats = terms.into_iter().map(|(w, ops)| Ok((w, pauli_string(n, &ops)?))).collect::<Result<Vec<_>>>()?;
                KrausChannel::mixed_unitary_trusted(mats)?
            }
            StrategyKind::Adaptive { script } => {
                let mut ch = KrausChannel::identity(dim);
                for step in script {
                    if step.site >= n {
                        return Err(Error::Attack(format!("site {} outside 0..{n}", step.site)));
                    }
                    let plus = single_site(n, step.site, &eigen_projector(step.basis, false));
                    let minus = single_site(n, step.site, &eigen_projector(step.basis, true));
                    let fix = pauli_string(n, &step.on_minus)?;
                    ch = ch.then(&KrausChannel::new(vec![plus, fix * minus])?)?;
                }
                ch
            }
        };
        Ok(Some(ch))
    }

    /// Bob's implementation for a register of `n` qubits whose honest
    /// preparation is the graph state of `graph`.
    pub fn to_bob(&self, n: usize, graph: &GraphSpec) -> Result<BobImplementation> {
        match &self.kind {
            StrategyKind::Honest => Ok(BobImplementation::Honest { graph: graph.clone() }),
            StrategyKind::WrongResource { seed } => Ok(BobImplementation::SendState {
                state: match seed {
                    None => StateVector::zeros(n),
                    Some(s) => random_state(n, &mut ChaCha20Rng::seed_from_u64(*s)),
                },
            }),
            _ => Ok(BobImplementation::Attack { graph: graph.clone(), channel: self.channel(n)?.expect("attack kinds carry a channel") }),
        }
    }
}

/// The verified protocol as seen by [`delta_for_strategy`].
#[derive(Clone, Debug)]
pub struct ProtocolConfig {
    pub n: usize,
    pub code: CodeConfig,
    pub program: ClientProgram,
    pub device: DeviceBehavior,
}

/// Largest N for the exact density-operator evaluation of general strategies.
pub const MAX_EXACT_DELTA_N: usize = 6;

/// Pr[e = 0 and the output is wrong] in the verified protocol.
///
/// Pauli attacks go to the combinatorial oracle, which counts any hit on a
/// logical computation qubit as a wrong output. Everything else is evaluated
/// exactly from the twirled evolution (uncoded, N ≤ 6): a branch is wrong
/// when its channel differs from the program's isometry by more than 1e-9.
pub fn delta_for_strategy(strategy: &AdversaryStrategy, config: &ProtocolConfig) -> Result<f64> {
    if let Some(attack) = strategy.pauli_attack() {
        return Ok(undetected_error_prob_bruteforce(config.n, &config.code, &attack)?.value());
    }
    exact_delta(strategy, config)
}

/// The exact evaluation, for any strategy (Pauli ones included).
pub fn exact_delta(strategy: &AdversaryStrategy, config: &ProtocolConfig) -> Result<f64> {
    if config.code.d != 1 || config.n > MAX_EXACT_DELTA_N {
        return Err(Error::Config(format!(
            "exact evaluation needs an uncoded run with N <= {MAX_EXACT_DELTA_N}, got d = {}, N = {}",
            config.code.d, config.n
        )));
    }
    let program = &config.program;
    let ideal = KrausChannel::new(vec![program.target_operator()?])?;
    if let Some(out) = config.device.scripted_output(program.output_dim())? {
        let scripted = KrausChannel::replacement(program.input_dim(), &out.to_density());
        return Ok(if choi_distance(&scripted, &ideal)? > 1e-9 { 1.0 } else { 0.0 });
    }
    let bob = strategy.to_bob(config.n, &program.resource)?;
    let mut delta = 0.0;
    let mut cache = std::collections::BTreeMap::new();
    for b in twirl_branches(&bob, config.n)? {
        if b.flagged ^ config.device.flips_flag() {
            continue;
        }
        let wrong = match cache.get(&(b.cx, b.cz)) {
            Some(&w) => w,
            None => {
                let ch = computation_channel(program, &config.device, b.cx, b.cz)?;
                let w = choi_distance(&ch, &ideal)? > 1e-9;
                cache.insert((b.cx, b.cz), w);
                w
            }
        };
        if wrong {
            delta += b.weight;
        }
    }
    Ok(delta)
}

/// A misbehaving measurement device; the honest one is refused.
pub fn cheating_device(behavior: DeviceBehavior) -> Result<DeviceBehavior> {
    if behavior.is_honest() {
        return Err(Error::Config("the honest device is not a cheating device; use the honest path".into()));
    }
    Ok(behavior)
}

/// A spread of strategies for an `n`-qubit register: the honest one, wrong
/// resources, Pauli, depolarizing, random and adaptive attacks.
pub fn strategy_library(n: usize) -> Vec<AdversaryStrategy> {
    let mut lib = vec![
        AdversaryStrategy::honest(),
        AdversaryStrategy::new(StrategyKind::WrongResource { seed: None }, "send |0...0>"),
        AdversaryStrategy::new(StrategyKind::WrongResource { seed: Some(11) }, "send a random state"),
    ];
    for (site, p) in [(0, Pauli::Z), (n - 1, Pauli::X), (n / 2, Pauli::Y)] {
        lib.push(AdversaryStrategy::pauli(&PauliAttack::single(site, p)));
    }
    lib.push(AdversaryStrategy::pauli(&PauliAttack { sites: vec![0, 1], paulis: vec![Pauli::Y, Pauli::Z] }));
    lib.push(AdversaryStrategy::new(StrategyKind::Depolarize { sites: (0..n).collect(), p: 1.0 }, "depolarize everything"));
    lib.push(AdversaryStrategy::new(StrategyKind::Depolarize { sites: vec![1], p: 0.5 }, "half-depolarize one site"));
    lib.push(AdversaryStrategy::new(StrategyKind::RandomChannel { seed: 3, kraus_count: 2 }, "random channel"));
    lib.push(AdversaryStrategy::new(
        StrategyKind::Adaptive {
            script: vec![AdaptiveStep { site: 0, basis: Pauli::Z, on_minus: vec![(n - 1, Pauli::X)] }],
        },
        "measure the first qubit, flip the last on minus",
    ));
    lib
}
