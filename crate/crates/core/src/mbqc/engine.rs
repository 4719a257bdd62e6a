use super::{Basis, ByproductFrame, GraphSpec, MeasurementPattern, Step};
use crate::error::{Error, Result};
use crate::linalg::gates::{self, Gate2, PLUS};
use crate::linalg::{qubit, CMatrix, StateVector, C64, MAX_STATE_QUBITS};
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha20Rng;

/// Measurement outcome bit; 0 is the +1 eigenvalue.
pub type Outcome = u8;

pub fn outcome_sign(o: Outcome) -> i8 {
    if o == 0 {
        1
    } else {
        -1
    }
}

/// A labelled qubit register whose columns are carried along unchanged
/// (one column for a state, several when building operators).
#[derive(Clone, Debug)]
pub struct Register {
    pub amps: CMatrix,
    pub labels: Vec<usize>,
}

impl Register {
    pub fn from_state(state: &StateVector, labels: Vec<usize>) -> Self {
        assert_eq!(state.n_qubits(), labels.len());
        Self { amps: state.as_column(), labels }
    }

    /// Register holding the identity on `labels`: column `i` is basis state `i`.
    pub fn identity(labels: Vec<usize>) -> Self {
        let d = 1 << labels.len();
        Self { amps: CMatrix::identity(d, d), labels }
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn position(&self, vertex: usize) -> Result<usize> {
        self.labels
            .iter()
            .position(|&l| l == vertex)
            .ok_or_else(|| Error::Pattern(format!("vertex {vertex} is not in the register")))
    }

    pub fn contains(&self, vertex: usize) -> bool {
        self.labels.contains(&vertex)
    }

    pub fn add_qubit(&mut self, vertex: usize, ket: &[C64; 2]) {
        let n = self.n();
        self.amps = qubit::insert_qubit(&self.amps, n, n, ket);
        self.labels.push(vertex);
    }

    pub fn apply_1q(&mut self, vertex: usize, u: &Gate2) -> Result<()> {
        let k = self.position(vertex)?;
        let n = self.n();
        qubit::apply_1q(&mut self.amps, n, k, u);
        Ok(())
    }

    pub fn apply_cz(&mut self, a: usize, b: usize) -> Result<()> {
        let (i, j) = (self.position(a)?, self.position(b)?);
        let n = self.n();
        qubit::apply_cz(&mut self.amps, n, i, j);
        Ok(())
    }

    /// Unnormalized projection of `vertex` onto `ket`; the qubit is removed.
    pub fn project(&self, vertex: usize, ket: &[C64; 2]) -> Result<Register> {
        let k = self.position(vertex)?;
        let amps = qubit::project_out(&self.amps, self.n(), k, ket);
        let mut labels = self.labels.clone();
        labels.remove(k);
        Ok(Register { amps, labels })
    }

    pub fn weight(&self) -> f64 {
        qubit::weight(&self.amps)
    }

    /// Reorders qubits to follow `order` (a permutation of the labels).
    pub fn reordered(&self, order: &[usize]) -> Result<Register> {
        let idx: Vec<usize> = order.iter().map(|&v| self.position(v)).collect::<Result<_>>()?;
        if idx.len() != self.n() {
            return Err(Error::Pattern("reorder must list every qubit".into()));
        }
        Ok(Register { amps: qubit::permute_qubits(&self.amps, self.n(), &idx), labels: order.to_vec() })
    }

    pub fn to_state(&self) -> Result<StateVector> {
        if self.amps.ncols() != 1 {
            return Err(Error::InvalidState("register carries more than one column".into()));
        }
        StateVector::normalized(self.amps.column(0).into_owned())
    }
}

/// (Π_{(i,j)∈E} CZ_ij) |+⟩^{⊗N}
pub fn build_cluster(graph: &GraphSpec) -> Result<StateVector> {
    build_open_cluster(graph, &[], None)?.to_state()
}

/// Graph state with `inputs` holding `input_state` (in that order) instead of |+⟩.
pub fn build_open_cluster(graph: &GraphSpec, inputs: &[usize], input_state: Option<&StateVector>) -> Result<Register> {
    if graph.vertex_count > MAX_STATE_QUBITS {
        return Err(Error::TooManyQubits { requested: graph.vertex_count, cap: MAX_STATE_QUBITS });
    }
    let mut reg = match input_state {
        Some(s) => {
            if s.n_qubits() != inputs.len() {
                return Err(Error::DimensionMismatch(format!(
                    "{} input vertices but a {}-qubit input state",
                    inputs.len(),
                    s.n_qubits()
                )));
            }
            Register::from_state(s, inputs.to_vec())
        }
        None => Register::identity(inputs.to_vec()),
    };
    for v in 0..graph.vertex_count {
        if !inputs.contains(&v) {
            reg.add_qubit(v, &PLUS);
        }
    }
    for &(a, b) in &graph.edges {
        reg.apply_cz(a, b)?;
    }
    let order: Vec<usize> = (0..graph.vertex_count).collect();
    reg.reordered(&order)
}

/// How outcomes are chosen.
pub enum OutcomeSource<'a> {
    Sample(&'a mut dyn RngCore),
    /// One outcome per step, in step order; a zero-probability choice is an error.
    Forced(&'a [Outcome]),
}

/// Physical ket for outcome `raw` when the site carries frame X^x Z^z.
pub fn physical_ket(basis: &Basis, x: bool, z: bool, raw: Outcome) -> [C64; 2] {
    match basis.angle() {
        Some(theta) => {
            let sign = if x { -1.0 } else { 1.0 };
            let shift = if z { std::f64::consts::PI } else { 0.0 };
            gates::xy_ket(sign * theta + shift, raw)
        }
        None => gates::z_ket(raw),
    }
}

/// Outcome as seen by the unframed state.
pub fn recorded_outcome(basis: &Basis, x: bool, raw: Outcome) -> Outcome {
    match basis {
        Basis::Z => raw ^ u8::from(x),
        _ => raw,
    }
}

fn parity(deps: &[usize], outcomes: &[Option<Outcome>]) -> bool {
    deps.iter().fold(false, |acc, &d| acc ^ (outcomes[d] == Some(1)))
}

/// Frame bits (x, z) the step sees, given outcomes so far and an initial frame.
pub fn step_frame(step: &Step, outcomes: &[Option<Outcome>], initial: &ByproductFrame) -> (bool, bool) {
    let v = step.vertex;
    (initial.x[v] ^ parity(&step.x_deps, outcomes), initial.z[v] ^ parity(&step.z_deps, outcomes))
}

/// Byproduct on the outputs after the whole pattern.
pub fn output_frame(pattern: &MeasurementPattern, outcomes: &[Option<Outcome>], initial: &ByproductFrame) -> ByproductFrame {
    let mut frame = ByproductFrame::identity(pattern.output_vertices.len());
    for (j, (&o, deps)) in pattern.output_vertices.iter().zip(&pattern.output_frames).enumerate() {
        frame.x[j] = initial.x[o] ^ parity(&deps.x_deps, outcomes);
        frame.z[j] = initial.z[o] ^ parity(&deps.z_deps, outcomes);
    }
    frame
}

/// Measures qubit `qubit` of a normalized state. Returns the outcome and the
/// renormalized post-measurement state on the remaining qubits.
pub fn measure_site(
    state: &StateVector,
    qubit: usize,
    basis: &Basis,
    source: &mut OutcomeSource<'_>,
) -> Result<(Outcome, StateVector)> {
    if qubit >= state.n_qubits() {
        return Err(Error::Pattern(format!("qubit {qubit} out of range")));
    }
    let reg = Register::from_state(state, (0..state.n_qubits()).collect());
    let (o, post, _) = measure_register(&reg, qubit, basis, false, false, 0, source)?;
    Ok((o, post.to_state()?))
}

/// Measures one labelled qubit of a single-column register. Returns the raw
/// outcome, the renormalized register and the branch probability.
fn measure_register(
    reg: &Register,
    vertex: usize,
    basis: &Basis,
    x: bool,
    z: bool,
    step: usize,
    source: &mut OutcomeSource<'_>,
) -> Result<(Outcome, Register, f64)> {
    let total = reg.weight();
    let branch0 = reg.project(vertex, &physical_ket(basis, x, z, 0))?;
    let p0 = (branch0.weight() / total).clamp(0.0, 1.0);
    let raw: Outcome = match source {
        OutcomeSource::Sample(rng) => u8::from(rng.random::<f64>() >= p0),
        OutcomeSource::Forced(forced) => *forced
            .get(step)
            .ok_or_else(|| Error::Pattern(format!("no forced outcome for step {step}")))?,
    };
    finish_measurement(reg, vertex, basis, x, z, raw, branch0, p0)
}

#[allow(clippy::too_many_arguments)]
fn finish_measurement(
    reg: &Register,
    vertex: usize,
    basis: &Basis,
    x: bool,
    z: bool,
    raw: Outcome,
    branch0: Register,
    p0: f64,
) -> Result<(Outcome, Register, f64)> {
    let (mut post, p) = if raw == 0 {
        (branch0, p0)
    } else {
        (reg.project(vertex, &physical_ket(basis, x, z, 1))?, 1.0 - p0)
    };
    if p <= 1e-14 {
        return Err(Error::ZeroProbability { vertex, outcome: raw });
    }
    let norm = post.weight().sqrt();
    post.amps.unscale_mut(norm);
    Ok((raw, post, p))
}

/// Result of executing a pattern on one branch.
#[derive(Clone, Debug)]
pub struct PatternRun {
    /// Unmeasured qubits, in `pattern.output_vertices` order, before correction.
    pub output_state: StateVector,
    /// Byproduct on the outputs.
    pub frame: ByproductFrame,
    /// Recorded outcome per step.
    pub outcomes: Vec<Outcome>,
    /// Probability of this branch.
    pub probability: f64,
}

/// Builds the cluster for `graph`, runs `pattern` with outcomes sampled from `seed`.
pub fn run_pattern(graph: &GraphSpec, pattern: &MeasurementPattern, seed: u64) -> Result<PatternRun> {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let state = build_cluster(graph)?;
    execute(graph, pattern, &state, &ByproductFrame::identity(graph.vertex_count), &mut OutcomeSource::Sample(&mut rng))
}

/// Runs `pattern` on the branch given by `raw_outcomes` (one per step).
pub fn run_pattern_forced(graph: &GraphSpec, pattern: &MeasurementPattern, raw_outcomes: &[Outcome]) -> Result<PatternRun> {
    let state = build_cluster(graph)?;
    execute(graph, pattern, &state, &ByproductFrame::identity(graph.vertex_count), &mut OutcomeSource::Forced(raw_outcomes))
}

/// Executes `pattern` on an arbitrary state of all graph vertices (vertex `v`
/// is qubit `v`), starting from byproduct `initial` (indexed by vertex).
pub fn execute(
    graph: &GraphSpec,
    pattern: &MeasurementPattern,
    state: &StateVector,
    initial: &ByproductFrame,
    source: &mut OutcomeSource<'_>,
) -> Result<PatternRun> {
    pattern.validate(graph)?;
    if state.n_qubits() != graph.vertex_count {
        return Err(Error::DimensionMismatch(format!(
            "state has {} qubits, graph has {} vertices",
            state.n_qubits(),
            graph.vertex_count
        )));
    }
    if initial.len() != graph.vertex_count {
        return Err(Error::FrameLength { expected: graph.vertex_count, got: initial.len() });
    }
    let mut reg = Register::from_state(state, (0..graph.vertex_count).collect());
    let mut outcomes: Vec<Option<Outcome>> = vec![None; graph.vertex_count];
    let mut recorded = Vec::with_capacity(pattern.steps.len());
    let mut probability = 1.0;
    for (i, step) in pattern.steps.iter().enumerate() {
        let (x, z) = step_frame(step, &outcomes, initial);
        let (raw, post, p) = measure_register(&reg, step.vertex, &step.basis, x, z, i, source)?;
        let o = recorded_outcome(&step.basis, x, raw);
        outcomes[step.vertex] = Some(o);
        recorded.push(o);
        probability *= p;
        reg = post;
    }
    let out = reg.reordered(&pattern.output_vertices)?;
    Ok(PatternRun {
        output_state: out.to_state()?,
        frame: output_frame(pattern, &outcomes, initial),
        outcomes: recorded,
        probability,
    })
}

/// Runs `pattern` on the graph state of `graph` without ever holding the
/// whole state: a qubit is created when first touched and its CZs are applied
/// just before it is measured. The register holds the live vertices only.
pub fn execute_lazy(graph: &GraphSpec, pattern: &MeasurementPattern, source: &mut OutcomeSource<'_>) -> Result<PatternRun> {
    pattern.validate(graph)?;
    let vc = graph.vertex_count;
    let initial = ByproductFrame::identity(vc);
    let mut reg = Register { amps: CMatrix::from_element(1, 1, C64::new(1.0, 0.0)), labels: Vec::new() };
    let mut applied = std::collections::BTreeSet::new();
    let mut measured = vec![false; vc];
    let mut outcomes: Vec<Option<Outcome>> = vec![None; vc];
    let mut recorded = Vec::with_capacity(pattern.steps.len());
    let mut probability = 1.0;
    let wire_up = |reg: &mut Register, applied: &mut std::collections::BTreeSet<(usize, usize)>, measured: &[bool], v: usize| -> Result<()> {
        if !reg.contains(v) {
            reg.add_qubit(v, &PLUS);
        }
        for u in graph.neighbors(v) {
            if measured[u] {
                continue;
            }
            if !reg.contains(u) {
                reg.add_qubit(u, &PLUS);
            }
            if applied.insert((v.min(u), v.max(u))) {
                reg.apply_cz(v, u)?;
            }
        }
        if reg.n() > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits { requested: reg.n(), cap: MAX_STATE_QUBITS });
        }
        Ok(())
    };
    for (i, step) in pattern.steps.iter().enumerate() {
        wire_up(&mut reg, &mut applied, &measured, step.vertex)?;
        let (x, z) = step_frame(step, &outcomes, &initial);
        let (raw, post, p) = measure_register(&reg, step.vertex, &step.basis, x, z, i, source)?;
        let o = recorded_outcome(&step.basis, x, raw);
        outcomes[step.vertex] = Some(o);
        measured[step.vertex] = true;
        recorded.push(o);
        probability *= p;
        reg = post;
    }
    for &o in &pattern.output_vertices {
        wire_up(&mut reg, &mut applied, &measured, o)?;
    }
    let out = reg.reordered(&pattern.output_vertices)?;
    Ok(PatternRun {
        output_state: out.to_state()?,
        frame: output_frame(pattern, &outcomes, &initial),
        outcomes: recorded,
        probability,
    })
}

/// Visits every outcome branch of `pattern` on a (possibly multi-column)
/// register, without normalizing. The visitor receives the projected register
/// reordered to the outputs, the recorded outcomes and the output frame.
pub fn for_each_branch<F>(reg: &Register, pattern: &MeasurementPattern, initial: &ByproductFrame, visit: &mut F) -> Result<()>
where
    F: FnMut(&Register, &[Outcome], &ByproductFrame) -> Result<()>,
{
    let n_vertices = initial.len();
    let mut outcomes = vec![None; n_vertices];
    let mut recorded = Vec::with_capacity(pattern.steps.len());
    branch_rec(reg, pattern, initial, 0, &mut outcomes, &mut recorded, visit)
}

fn branch_rec<F>(
    reg: &Register,
    pattern: &MeasurementPattern,
    initial: &ByproductFrame,
    i: usize,
    outcomes: &mut Vec<Option<Outcome>>,
    recorded: &mut Vec<Outcome>,
    visit: &mut F,
) -> Result<()>
where
    F: FnMut(&Register, &[Outcome], &ByproductFrame) -> Result<()>,
{
    if i == pattern.steps.len() {
        let out = reg.reordered(&pattern.output_vertices)?;
        let frame = output_frame(pattern, outcomes, initial);
        return visit(&out, recorded, &frame);
    }
    let step = &pattern.steps[i];
    let (x, z) = step_frame(step, outcomes, initial);
    for raw in 0..2u8 {
        let next = reg.project(step.vertex, &physical_ket(&step.basis, x, z, raw))?;
        if next.weight() < 1e-28 {
            continue;
        }
        let o = recorded_outcome(&step.basis, x, raw);
        outcomes[step.vertex] = Some(o);
        recorded.push(o);
        branch_rec(&next, pattern, initial, i + 1, outcomes, recorded, visit)?;
        recorded.pop();
        outcomes[step.vertex] = None;
    }
    Ok(())
}

/// Outcome-0 action of a chain step: `H · diag(1, e^{-iθ})`.
pub fn chain_step_unitary(theta: f64) -> Gate2 {
    gates::mul(&gates::H, &gates::phase(-theta))
}

/// Random seed helper for callers that want a fresh stream per run.
pub fn seeded_rng(seed: u64) -> ChaCha20Rng {
    ChaCha20Rng::seed_from_u64(seed)
}
