use crate::error::{Error, Result};
use crate::linalg::{CMatrix, StateVector};
use crate::mbqc::{compile_with_flow, for_each_branch, Basis, ByproductFrame, GraphSpec, MeasurementPattern, Register};
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// How Alice's input enters the computation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputMode {
    /// The input is classically known and prepared by the program itself.
    Folded,
    /// Alice holds a qubit and measures it jointly with the first qubit Bob
    /// sends, in the entangled basis CZ(|±θ_a⟩ ⊗ |±θ_b⟩).
    Teleported,
}

/// Alice's program `[U]`: the agreed resource layout plus her measurements.
///
/// With a teleported input the pattern lives on the resource graph extended
/// by one vertex (index `resource.vertex_count`) attached to `entry`; its
/// first two steps are that vertex and `entry`, which together form the joint
/// measurement.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ClientProgram {
    pub resource: GraphSpec,
    pub input: InputMode,
    pub entry: usize,
    pub pattern: MeasurementPattern,
}

impl ClientProgram {
    pub fn new(resource: GraphSpec, input: InputMode, entry: usize, pattern: MeasurementPattern) -> Result<Self> {
        let p = Self { resource, input, entry, pattern };
        p.validate()?;
        Ok(p)
    }

    /// Program on a `n`-vertex chain measured in order with the given angles:
    /// `n` angles when teleported (the input first), `n - 1` when folded.
    pub fn chain(n: usize, angles: &[f64], input: InputMode) -> Result<Self> {
        if n < 1 {
            return Err(Error::Pattern(format!("chain of {n} vertices is too short")));
        }
        let resource = GraphSpec::linear(n);
        let (order_vertices, expected): (Vec<usize>, usize) = match input {
            InputMode::Folded => ((0..n - 1).collect(), n - 1),
            InputMode::Teleported => (std::iter::once(n).chain(0..n - 1).collect(), n),
        };
        if angles.len() != expected {
            return Err(Error::Pattern(format!("{} angles for a chain expecting {expected}", angles.len())));
        }
        let order: Vec<(usize, Basis)> = order_vertices.iter().zip(angles).map(|(&v, &t)| (v, Basis::Xy(t))).collect();
        let mut flow: BTreeMap<usize, usize> = (0..n - 1).map(|i| (i, i + 1)).collect();
        if input == InputMode::Teleported {
            flow.insert(n, 0);
        }
        let probe = Self { resource: resource.clone(), input, entry: 0, pattern: MeasurementPattern::empty(&resource) };
        let pattern = compile_with_flow(&probe.extended_graph(), &order, &flow, &[n - 1])?;
        Self::new(resource, input, 0, pattern)
    }

    /// The graph the pattern is written against.
    pub fn extended_graph(&self) -> GraphSpec {
        match self.input {
            InputMode::Folded => self.resource.clone(),
            InputMode::Teleported => {
                let n = self.resource.vertex_count;
                let mut layers: Vec<usize> = self.resource.layer_of.iter().map(|l| l + 1).collect();
                layers.push(0);
                let edges = self.resource.edges.iter().copied().chain(std::iter::once((self.entry, n)));
                GraphSpec::new(n + 1, edges, layers).expect("extension of a valid graph")
            }
        }
    }

    pub fn input_vertex(&self) -> Option<usize> {
        match self.input {
            InputMode::Folded => None,
            InputMode::Teleported => Some(self.resource.vertex_count),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.resource.validate()?;
        let g = self.extended_graph();
        self.pattern.validate(&g)?;
        if let Some(iv) = self.input_vertex() {
            if self.entry >= self.resource.vertex_count {
                return Err(Error::Pattern(format!("entry vertex {} is not in the resource", self.entry)));
            }
            let first: Vec<usize> = self.pattern.steps.iter().take(2).map(|s| s.vertex).collect();
            if first != [iv, self.entry] {
                return Err(Error::Pattern("a teleported input must be measured jointly with the entry qubit first".into()));
            }
            if self.pattern.steps.iter().take(2).any(|s| s.basis == Basis::Z) {
                return Err(Error::Pattern("the joint input measurement must be entangling".into()));
            }
        }
        Ok(())
    }

    pub fn input_dim(&self) -> usize {
        match self.input {
            InputMode::Folded => 1,
            InputMode::Teleported => 2,
        }
    }

    pub fn n_resource(&self) -> usize {
        self.resource.vertex_count
    }

    pub fn output_dim(&self) -> usize {
        1 << self.pattern.output_vertices.len()
    }

    /// Same program with every XY angle shifted by `offset`.
    pub fn with_angle_offset(&self, offset: f64) -> Self {
        let mut p = self.clone();
        for s in &mut p.pattern.steps {
            if let Some(t) = s.basis.angle() {
                s.basis = Basis::Xy(t + offset);
            }
        }
        p
    }

    /// Register holding Alice's input (identity columns) and the received
    /// qubits, labelled by vertex, with the joint-measurement CZ applied.
    /// `received = None` leaves the received qubits open as well.
    pub(crate) fn client_register(&self, received: Option<&StateVector>) -> Result<Register> {
        let n = self.n_resource();
        let mut reg = match received {
            Some(s) => {
                if s.n_qubits() != n {
                    return Err(Error::Protocol(format!("Bob sent {} qubits, the program expects {n}", s.n_qubits())));
                }
                Register::from_state(s, (0..n).collect())
            }
            None => Register::identity((0..n).collect()),
        };
        if let Some(iv) = self.input_vertex() {
            // input first: column index = input bit, then the received qubits
            let ident = Register::identity(vec![iv]);
            let amps = ident.amps.kronecker(&reg.amps);
            let mut labels = vec![iv];
            labels.extend(&reg.labels);
            reg = Register { amps, labels };
            reg.apply_cz(iv, self.entry)?;
        }
        Ok(reg)
    }

    /// One operator per outcome branch, mapping Alice's input (and the
    /// received qubits when `received` is `None`) to the output register,
    /// with the byproduct corrected when `correct` is set.
    pub fn branch_operators(&self, received: Option<&StateVector>, correct: bool) -> Result<Vec<CMatrix>> {
        let reg = self.client_register(received)?;
        let vertices = self.extended_graph().vertex_count;
        let n_out = self.pattern.output_vertices.len();
        let mut ops = Vec::new();
        for_each_branch(&reg, &self.pattern, &ByproductFrame::identity(vertices), &mut |out, _, frame| {
            let mut m = out.amps.clone();
            if correct {
                frame.correct_register(&mut m, n_out);
            }
            ops.push(m);
            Ok(())
        })?;
        Ok(ops)
    }

    /// The intended map on the honest resource: the all-zero branch,
    /// rescaled to an isometry from the input to the output.
    pub fn target_operator(&self) -> Result<CMatrix> {
        let honest = crate::mbqc::build_cluster(&self.resource)?;
        let reg = self.client_register(Some(&honest))?;
        let mut r = reg;
        for step in &self.pattern.steps {
            let ket = crate::mbqc::physical_ket(&step.basis, false, false, 0);
            r = r.project(step.vertex, &ket)?;
        }
        let out = r.reordered(&self.pattern.output_vertices)?;
        let m = out.amps;
        let scale = (m.norm_squared() / self.input_dim() as f64).sqrt();
        if scale < 1e-12 {
            return Err(Error::Pattern("the all-zero branch has zero probability".into()));
        }
        let v = m.unscale(scale);
        let gram = v.adjoint() * &v;
        if crate::linalg::max_abs_diff(&gram, &CMatrix::identity(self.input_dim(), self.input_dim())) > 1e-9 {
            return Err(Error::Pattern("program does not implement an isometry".into()));
        }
        Ok(v)
    }
}
