use super::noverify::ClientInput;
use super::{
    BobImplementation, ClientProgram, DeviceBehavior, InputMode, OneWayChannel, PermutationTag, Role, Transcript,
    Variant,
};
use crate::error::{Error, Result};
use crate::linalg::{qubit, CMatrix, DensityOperator, KrausChannel, StateVector, C64};
use crate::mbqc::{
    build_cluster, compile_with_flow, execute, execute_lazy, Basis, ByproductFrame, GraphSpec, MeasurementPattern,
    OutcomeSource, OutputFrame, Step,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use std::collections::BTreeMap;

/// Verification flag: 0 accept, 1 reject. Embedded as |e_0⟩ = |0⟩, |e_1⟩ = |1⟩.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct VerificationFlag(pub u8);

impl VerificationFlag {
    pub const ACCEPT: Self = Self(0);
    pub const REJECT: Self = Self(1);

    pub fn ket(self) -> CMatrix {
        let mut k = CMatrix::zeros(2, 1);
        k[(self.0 as usize, 0)] = C64::new(1.0, 0.0);
        k
    }

    pub fn is_accept(self) -> bool {
        self.0 == 0
    }
}

fn third(n: usize) -> Result<usize> {
    if n == 0 || n % 3 != 0 {
        return Err(Error::Config(format!("N = {n} must be a positive multiple of 3")));
    }
    Ok(n / 3)
}

/// P(|g⟩ ⊗ |+⟩^{⊗N/3} ⊗ |0⟩^{⊗N/3}), qubits in position order.
pub fn build_psi_p(p: &PermutationTag, g_graph: &GraphSpec, n: usize) -> Result<StateVector> {
    let m = third(n)?;
    if p.n() != n || g_graph.vertex_count != m {
        return Err(Error::DimensionMismatch(format!(
            "tag over {} positions and a {}-vertex resource for N = {n}",
            p.n(),
            g_graph.vertex_count
        )));
    }
    let g = build_cluster(g_graph)?;
    let traps = StateVector::product(
        &std::iter::repeat_n(crate::linalg::gates::PLUS, m)
            .chain(std::iter::repeat_n(crate::linalg::gates::ZERO, m))
            .collect::<Vec<_>>(),
    )?;
    let canonical = g.as_column().kronecker(&traps.as_column());
    let permuted = qubit::permute_qubits(&canonical, n, &p.inverse());
    StateVector::new(permuted.column(0).into_owned())
}

/// Stabilizer generator of Ψ_P for each canonical qubit, as a Pauli frame.
fn stabilizer_generators(p: &PermutationTag, g_graph: &GraphSpec) -> Vec<ByproductFrame> {
    let n = p.n();
    let m = p.m();
    let perm = p.permutation();
    (0..n)
        .map(|i| {
            let mut f = ByproductFrame::identity(n);
            let pos = perm[i];
            if i < m {
                f.x[pos] = true;
                for u in g_graph.neighbors(i) {
                    f.z[perm[u]] = true;
                }
            } else if i < 2 * m {
                f.x[pos] = true;
            } else {
                f.z[pos] = true;
            }
            f
        })
        .collect()
}

/// Product of the generators selected by `bits`.
pub fn stabilizer_element(p: &PermutationTag, g_graph: &GraphSpec, bits: &[bool]) -> Result<ByproductFrame> {
    let mut acc = ByproductFrame::identity(p.n());
    for (gen, &b) in stabilizer_generators(p, g_graph).iter().zip(bits) {
        if b {
            acc = acc.compose(gen)?;
        }
    }
    Ok(acc)
}

/// Bob's Phase-1 resource |G⟩, independent of Alice's secrets.
///
/// Vertices: outputs `o_j = j`, one steering qubit `s_j = N + j` hanging off
/// each output, and for every pair `j < k` a two-qubit bridge
/// `o_j - b1 - b2 - o_k`. Bob keeps the outputs and sends the rest: the
/// bridges in lexicographic pair order, then the steering qubits.
#[derive(Clone, Debug)]
pub struct PreparationGraph {
    pub n: usize,
    pub graph: GraphSpec,
    /// `(j, k, b1, b2)` per pair.
    pub bridges: Vec<(usize, usize, usize, usize)>,
}

impl PreparationGraph {
    pub fn new(n: usize) -> Result<Self> {
        third(n)?;
        let mut edges = Vec::new();
        for j in 0..n {
            edges.push((j, n + j));
        }
        let mut bridges = Vec::new();
        let mut next = 2 * n;
        for j in 0..n {
            for k in j + 1..n {
                let (b1, b2) = (next, next + 1);
                next += 2;
                edges.extend([(j, b1), (b1, b2), (b2, k)]);
                bridges.push((j, k, b1, b2));
            }
        }
        let layers = (0..next).map(|v| usize::from(v < n)).collect();
        Ok(Self { n, graph: GraphSpec::new(next, edges, layers)?, bridges })
    }

    pub fn steering(&self, j: usize) -> usize {
        self.n + j
    }

    /// Labels of the qubits Bob sends in Phase 1, in order.
    pub fn send_order(&self) -> Vec<usize> {
        let mut order: Vec<usize> = self.bridges.iter().flat_map(|&(_, _, b1, b2)| [b1, b2]).collect();
        order.extend((0..self.n).map(|j| self.steering(j)));
        order
    }

    pub fn label(&self, v: usize) -> String {
        if v < self.n {
            return format!("o{v}");
        }
        if v < 2 * self.n {
            return format!("s{}", v - self.n);
        }
        let (j, k, b1, _) = self.bridges[(v - 2 * self.n) / 2];
        format!("b{}({j},{k})", if v == b1 { 1 } else { 2 })
    }

    /// Alice's Phase-1 measurements steering the outputs to σ_q|Ψ_P⟩ with a
    /// linear cluster on the computation positions.
    pub fn steering_pattern(&self, p: &PermutationTag) -> Result<MeasurementPattern> {
        if p.n() != self.n {
            return Err(Error::Protocol("permutation size does not match the resource".into()));
        }
        let comp = p.computation_positions();
        let used: Vec<(usize, usize)> = comp.windows(2).map(|w| (w[0], w[1])).collect();
        let mut order = Vec::new();
        let mut flow = BTreeMap::new();
        for &(j, k, b1, b2) in &self.bridges {
            if used.contains(&(j, k)) {
                order.push((b1, Basis::X));
                order.push((b2, Basis::X));
                flow.insert(b1, b2);
                flow.insert(b2, k);
            } else {
                order.push((b1, Basis::Z));
                order.push((b2, Basis::Z));
            }
        }
        for j in 0..self.n {
            let s = self.steering(j);
            match p.role(j) {
                Role::TrapZero => {
                    order.push((s, Basis::X));
                    flow.insert(s, j);
                }
                _ => order.push((s, Basis::Z)),
            }
        }
        compile_with_flow(&self.graph, &order, &flow, &(0..self.n).collect::<Vec<_>>())
    }
}

/// Resource layout of the verified variant: a linear cluster of N/3 qubits.
pub fn verify_resource(n: usize) -> Result<GraphSpec> {
    Ok(GraphSpec::linear(third(n)?))
}

/// Outcome of Phase 1: Bob's register, Alice's frame and her outcomes.
#[derive(Clone, Debug)]
pub struct Phase1Run {
    pub state: StateVector,
    pub q: ByproductFrame,
    pub outcomes: Vec<u8>,
    pub probability: f64,
}

pub fn run_phase1(prep: &PreparationGraph, p: &PermutationTag, source: &mut OutcomeSource<'_>) -> Result<Phase1Run> {
    let pattern = prep.steering_pattern(p)?;
    let run = execute_lazy(&prep.graph, &pattern, source)?;
    Ok(Phase1Run { state: run.output_state, q: run.frame, outcomes: run.outcomes, probability: run.probability })
}

/// Alice's Phase-2 program: her computation placed on the computation
/// positions, followed by the trap tests.
pub fn phase2_program(program: &ClientProgram, p: &PermutationTag) -> Result<(ClientProgram, Vec<usize>)> {
    let n = p.n();
    let m = p.m();
    if program.resource != GraphSpec::linear(m) {
        return Err(Error::Protocol(format!("the verified variant runs on a linear resource of {m} qubits")));
    }
    let comp = p.computation_positions();
    let map = |v: usize| if v < m { comp[v] } else { n };
    let mut edges: Vec<(usize, usize)> = program.resource.edges.iter().map(|&(a, b)| (map(a), map(b))).collect();
    edges.sort_unstable();
    let resource = GraphSpec::new(n, edges, vec![0; n])?;
    let mut steps: Vec<Step> = program
        .pattern
        .steps
        .iter()
        .map(|s| Step {
            vertex: map(s.vertex),
            basis: s.basis,
            x_deps: s.x_deps.iter().map(|&d| map(d)).collect(),
            z_deps: s.z_deps.iter().map(|&d| map(d)).collect(),
        })
        .collect();
    let mut traps = Vec::new();
    for j in 0..n {
        let basis = match p.role(j) {
            Role::Computation => continue,
            Role::TrapPlus => Basis::X,
            Role::TrapZero => Basis::Z,
        };
        traps.push(steps.len());
        steps.push(Step { vertex: j, basis, x_deps: vec![], z_deps: vec![] });
    }
    let pattern = MeasurementPattern {
        steps,
        output_vertices: program.pattern.output_vertices.iter().map(|&v| map(v)).collect(),
        output_frames: program
            .pattern
            .output_frames
            .iter()
            .map(|f| OutputFrame {
                x_deps: f.x_deps.iter().map(|&d| map(d)).collect(),
                z_deps: f.z_deps.iter().map(|&d| map(d)).collect(),
            })
            .collect(),
    };
    Ok((ClientProgram::new(resource, program.input, comp[program.entry.min(m - 1)], pattern)?, traps))
}

fn with_input(program: &ClientProgram, input: &ClientInput, received: &StateVector) -> Result<StateVector> {
    let mut m = received.as_column();
    if let Some(iv) = program.input_vertex() {
        let ket = CMatrix::from_column_slice(2, 1, &input.kets());
        m = m.kronecker(&ket);
        qubit::apply_cz(&mut m, iv + 1, iv, program.entry);
    }
    StateVector::new(m.column(0).into_owned())
}

/// Phase 2 on one received register, with Alice's frame `q` on the positions.
/// Returns the output, the flag and the outcomes.
pub fn run_phase2(
    input: &ClientInput,
    program: &ClientProgram,
    p: &PermutationTag,
    device: &DeviceBehavior,
    received: &StateVector,
    q: &ByproductFrame,
    rng: &mut ChaCha20Rng,
) -> Result<(StateVector, VerificationFlag, Vec<u8>)> {
    let n = p.n();
    if received.n_qubits() != n {
        return Err(Error::Protocol(format!("Bob sent {} qubits in Phase 2, expected {n}", received.n_qubits())));
    }
    if let Some(out) = device.scripted_output(program.output_dim())? {
        return Ok((out, VerificationFlag::ACCEPT, Vec::new()));
    }
    let (p2, traps) = phase2_program(&program.with_angle_offset(device.angle_offset()), p)?;
    let state = with_input(&p2, input, received)?;
    let graph = p2.extended_graph();
    let mut initial = ByproductFrame::identity(graph.vertex_count);
    initial.x[..n].copy_from_slice(&q.x);
    initial.z[..n].copy_from_slice(&q.z);
    if let Some(iv) = p2.input_vertex() {
        // CZ X_entry = X_entry Z_in CZ: the entry's X byproduct reaches the input.
        initial.z[iv] = initial.x[p2.entry];
    }
    let run = execute(&graph, &p2.pattern, &state, &initial, &mut OutcomeSource::Sample(rng))?;
    let frame = if device.corrects() {
        run.frame
    } else {
        let mut only_q = ByproductFrame::identity(p2.pattern.output_vertices.len());
        for (j, &o) in p2.pattern.output_vertices.iter().enumerate() {
            only_q.x[j] = initial.x[o];
            only_q.z[j] = initial.z[o];
        }
        only_q
    };
    let out = crate::mbqc::correct_byproduct(&run.output_state, &frame)?;
    let rejected = traps.iter().any(|&i| run.outcomes[i] == 1);
    let flag = VerificationFlag(u8::from(rejected ^ device.flips_flag()));
    Ok((out, flag, run.outcomes))
}

/// Bob's Phase-2 register when his honest one is `honest`.
fn bob_phase2<R: Rng + ?Sized>(bob: &BobImplementation, honest: &StateVector, rng: &mut R) -> Result<StateVector> {
    bob.emit(honest, rng)
}

/// One run of the verified protocol.
pub fn run_verify(
    input: &ClientInput,
    program: &ClientProgram,
    device: &DeviceBehavior,
    bob: &BobImplementation,
    permutation: Option<PermutationTag>,
    n: usize,
    seed: u64,
) -> Result<(DensityOperator, VerificationFlag, Transcript)> {
    third(n)?;
    program.validate()?;
    input.check(program)?;
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let p = match permutation {
        Some(p) if p.n() == n => p,
        Some(p) => return Err(Error::Protocol(format!("permutation over {} positions for N = {n}", p.n()))),
        None => PermutationTag::sample(n, &mut rng)?,
    };
    let mut t = Transcript::new(Variant::Verify, n, seed);
    t.alice_private("secret_p", &format!("{:?}", p.permutation()));
    t.bob_local("prepare", &bob.describe());

    // Phase 1: Bob streams |G⟩ minus his outputs; Alice measures as they arrive.
    let prep = PreparationGraph::new(n)?;
    let mut channel = OneWayChannel::new();
    let steering = prep.steering_pattern(&p)?;
    let phase1 = run_phase1(&prep, &p, &mut OutcomeSource::Sample(&mut rng))?;
    for (v, (step, o)) in prep.send_order().iter().zip(steering.steps.iter().zip(&phase1.outcomes)) {
        debug_assert_eq!(*v, step.vertex);
        channel.send(format!("G:{}", prep.label(*v)));
        t.bob_send(&format!("G:{}", prep.label(*v)));
        channel.receive();
        t.alice_private("measure", &format!("{}:{:?}:{o}", prep.label(*v), step.basis));
    }
    // Alice re-randomizes her frame inside the stabilizer coset.
    let bits: Vec<bool> = (0..n).map(|_| rng.random()).collect();
    let q = phase1.q.compose(&stabilizer_element(&p, &program.resource, &bits)?)?;
    t.alice_private("secret_q", &format!("{:?}", q.to_bits()));

    // Phase 2: Bob sends the outputs.
    let sent = bob_phase2(bob, &phase1.state, &mut rng)?;
    for j in 0..sent.n_qubits() {
        channel.send(format!("out:{j}"));
        t.bob_send(&format!("out:{j}"));
        channel.receive();
    }
    let (out, flag, outcomes) = run_phase2(input, program, &p, device, &sent, &q, &mut rng)?;
    t.alice_private("phase2", &format!("{outcomes:?}"));
    t.alice_private("output", &format!("{:?}:{}", out.amplitudes().as_slice(), flag.0));
    t.secrets.permutation = Some(p);
    t.secrets.q = Some(q.to_bits());
    t.secrets.outcomes = phase1.outcomes.iter().chain(&outcomes).copied().collect();
    t.secrets.flag = Some(flag.0);
    Ok((out.to_density(), flag, t))
}

/// Pauli string index `(x << n) | z` ↦ `Σ_k |Tr(P K_k)|² / 4^n`.
pub fn pauli_weights(channel: &KrausChannel) -> Result<Vec<f64>> {
    let d = channel.dim_in();
    let n = crate::linalg::qubits_for_dim(d).ok_or_else(|| Error::DimensionMismatch("not a qubit channel".into()))?;
    if channel.dim_out() != d {
        return Err(Error::DimensionMismatch("attack must map the register to itself".into()));
    }
    if n > 7 {
        return Err(Error::TooManyQubits { requested: n, cap: 7 });
    }
    let norm = (d * d) as f64;
    let mut w = vec![0.0; d * d];
    let mut v = vec![C64::new(0.0, 0.0); d];
    for k in channel.kraus() {
        for x in 0..d {
            // Tr(X^x Z^z K) = Σ_l (-1)^{z·l} K[l, l^x]: a Walsh-Hadamard transform over l
            for (l, slot) in v.iter_mut().enumerate() {
                *slot = k[(l, l ^ x)];
            }
            walsh_hadamard(&mut v);
            for (z, tr) in v.iter().enumerate() {
                w[(x << n) | z] += tr.norm_sqr() / norm;
            }
        }
    }
    Ok(w)
}

fn walsh_hadamard(v: &mut [C64]) {
    let mut h = 1;
    while h < v.len() {
        for i in (0..v.len()).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (v[j], v[j + h]);
                v[j] = a + b;
                v[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Bob's effect on the Phase-2 register after Alice's frame is averaged out:
/// weights over Pauli strings.
pub fn twirled_attack(bob: &BobImplementation, n: usize) -> Result<Vec<f64>> {
    let d = 1usize << n;
    match bob {
        BobImplementation::Honest { .. } => {
            let mut w = vec![0.0; d * d];
            w[0] = 1.0;
            Ok(w)
        }
        BobImplementation::SendState { state } => {
            if state.n_qubits() != n {
                return Err(Error::Protocol(format!("Bob sends {} qubits, expected {n}", state.n_qubits())));
            }
            Ok(vec![1.0 / (d * d) as f64; d * d])
        }
        BobImplementation::Attack { channel, .. } => pauli_weights(channel),
    }
}

/// Accumulated weight per (computation Pauli in resource order, trap flagged).
pub fn reduce_pauli_weights(weights: &[f64], n: usize, permutations: &[PermutationTag]) -> BTreeMap<(usize, usize, bool), f64> {
    let mut acc = BTreeMap::new();
    let scale = 1.0 / permutations.len() as f64;
    for p in permutations {
        let roles = p.roles();
        let comp = p.computation_positions();
        let bit = |mask: usize, pos: usize| (mask >> (n - 1 - pos)) & 1 == 1;
        for (idx, &w) in weights.iter().enumerate() {
            if w == 0.0 {
                continue;
            }
            let (x, z) = (idx >> n, idx & ((1 << n) - 1));
            let flagged = (0..n).any(|j| match roles[j] {
                Role::TrapPlus => bit(z, j),
                Role::TrapZero => bit(x, j),
                Role::Computation => false,
            });
            let (mut cx, mut cz) = (0usize, 0usize);
            for &pos in comp {
                cx = (cx << 1) | usize::from(bit(x, pos));
                cz = (cz << 1) | usize::from(bit(z, pos));
            }
            *acc.entry((cx, cz, flagged)).or_insert(0.0) += w * scale;
        }
    }
    acc
}

/// One term of the twirled Phase-2 register: the Pauli left on the
/// computation qubits (resource order, MSB first), whether a trap fired, and
/// its probability averaged over permutations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TwirlBranch {
    pub cx: usize,
    pub cz: usize,
    pub flagged: bool,
    pub weight: f64,
}

pub fn twirl_branches(bob: &BobImplementation, n: usize) -> Result<Vec<TwirlBranch>> {
    let weights = twirled_attack(bob, n)?;
    let perms = PermutationTag::enumerate(n)?;
    Ok(reduce_pauli_weights(&weights, n, &perms)
        .into_iter()
        .filter(|&(_, w)| w > 1e-15)
        .map(|((cx, cz, flagged), weight)| TwirlBranch { cx, cz, flagged, weight })
        .collect())
}

/// Alice's computation on a resource carrying Pauli (cx, cz), as a channel
/// from her input to the output.
pub fn computation_channel(program: &ClientProgram, device: &DeviceBehavior, cx: usize, cz: usize) -> Result<KrausChannel> {
    let m = program.n_resource();
    let mut frame = ByproductFrame::identity(m);
    for j in 0..m {
        frame.x[j] = (cx >> (m - 1 - j)) & 1 == 1;
        frame.z[j] = (cz >> (m - 1 - j)) & 1 == 1;
    }
    let mut g = build_cluster(&program.resource)?.as_column();
    frame.apply_to_register(&mut g, m);
    let resource = StateVector::new(g.column(0).into_owned())?;
    let ops = program.with_angle_offset(device.angle_offset()).branch_operators(Some(&resource), device.corrects())?;
    KrausChannel::new(ops)
}

/// Real verified system `ρ_in ↦ ρ_out ⊗ e`, averaged over Alice's secrets.
///
/// Alice's uniformly random frame turns whatever Bob does to the Phase-2
/// register into its Pauli twirl; traps then only contribute their flags.
pub fn verify_system_channel(
    program: &ClientProgram,
    device: &DeviceBehavior,
    bob: &BobImplementation,
    n: usize,
) -> Result<KrausChannel> {
    let m = third(n)?;
    if program.n_resource() != m {
        return Err(Error::Protocol(format!("program uses {} resource qubits, N/3 = {m}", program.n_resource())));
    }
    let din = program.input_dim();
    if let Some(out) = device.scripted_output(program.output_dim())? {
        let e0 = VerificationFlag::ACCEPT.ket();
        let flagged = DensityOperator::pure(&out).matrix().kronecker(&(&e0 * e0.adjoint()));
        return Ok(KrausChannel::replacement(din, &DensityOperator::new(flagged)?));
    }
    let mut cache: BTreeMap<(usize, usize), KrausChannel> = BTreeMap::new();
    let mut kraus = Vec::new();
    for b in twirl_branches(bob, n)? {
        if !cache.contains_key(&(b.cx, b.cz)) {
            cache.insert((b.cx, b.cz), computation_channel(program, device, b.cx, b.cz)?);
        }
        let flag = VerificationFlag(u8::from(b.flagged ^ device.flips_flag()));
        for k in cache[&(b.cx, b.cz)].kraus() {
            kraus.push(k.kronecker(&flag.ket()).scale(b.weight.sqrt()));
        }
    }
    Ok(KrausChannel::new(kraus)?.compressed())
}

/// Same system, summed literally over permutations, every Phase-1 branch,
/// Alice's stabilizer re-randomization and Bob's Kraus operators. Only
/// feasible for N = 3 with a folded input; used to cross-check the twirl.
pub fn verify_output_literal(program: &ClientProgram, device: &DeviceBehavior, attack: &KrausChannel) -> Result<DensityOperator> {
    let n = 3;
    if program.input != InputMode::Folded || program.n_resource() != 1 {
        return Err(Error::Protocol("the literal sum is only implemented for N = 3 with a folded input".into()));
    }
    let prep = PreparationGraph::new(n)?;
    let g_full = build_cluster(&prep.graph)?;
    let perms = PermutationTag::enumerate(n)?;
    let dout = program.output_dim() * 2;
    let mut rho = CMatrix::zeros(dout, dout);
    for p in &perms {
        let steering = prep.steering_pattern(p)?;
        let reg = crate::mbqc::Register::from_state(&g_full, (0..prep.graph.vertex_count).collect());
        let (p2, traps) = phase2_program(&program.with_angle_offset(device.angle_offset()), p)?;
        let graph2 = p2.extended_graph();
        let mut branches = Vec::new();
        crate::mbqc::for_each_branch(&reg, &steering, &ByproductFrame::identity(prep.graph.vertex_count), &mut |out, _, q| {
            branches.push((out.amps.clone(), q.clone()));
            Ok(())
        })?;
        for (amps, q) in &branches {
            for s in 0..(1usize << n) {
                let bits: Vec<bool> = (0..n).map(|i| (s >> i) & 1 == 1).collect();
                let qq = q.compose(&stabilizer_element(p, &program.resource, &bits)?)?;
                for a in attack.kraus() {
                    let attacked = a * amps;
                    let reg2 = crate::mbqc::Register { amps: attacked, labels: (0..n).collect() };
                    let mut initial = ByproductFrame::identity(graph2.vertex_count);
                    initial.x[..n].copy_from_slice(&qq.x);
                    initial.z[..n].copy_from_slice(&qq.z);
                    let weight = 1.0 / (perms.len() * (1 << n)) as f64;
                    crate::mbqc::for_each_branch(&reg2, &p2.pattern, &initial, &mut |out, outcomes, frame| {
                        let mut v = out.amps.clone();
                        if device.corrects() {
                            frame.correct_register(&mut v, out.n());
                        }
                        let rejected = traps.iter().any(|&i| outcomes[i] == 1) ^ device.flips_flag();
                        let kv = v.kronecker(&VerificationFlag(u8::from(rejected)).ket());
                        rho += (&kv * kv.adjoint()).scale(weight);
                        Ok(())
                    })?;
                }
            }
        }
    }
    DensityOperator::new(rho)
}
