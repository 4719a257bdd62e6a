use super::GraphSpec;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeMap, BTreeSet};

/// Single-qubit measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "plane", content = "angle", rename_all = "snake_case")]
pub enum Basis {
    /// Eigenbasis of cos θ X + sin θ Y, angle in radians.
    Xy(f64),
    X,
    Z,
}

impl Basis {
    pub fn angle(&self) -> Option<f64> {
        match self {
            Basis::Xy(t) => Some(*t),
            Basis::X => Some(0.0),
            Basis::Z => None,
        }
    }
}

/// One adaptive measurement.
///
/// The angle actually used is `(-1)^{sx} θ + sz π` where `sx`/`sz` are the
/// parities of the outcomes listed in `x_deps`/`z_deps`. For a Z measurement
/// `x_deps` instead flips the reported outcome.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Step {
    pub vertex: usize,
    pub basis: Basis,
    #[serde(default)]
    pub x_deps: Vec<usize>,
    #[serde(default)]
    pub z_deps: Vec<usize>,
}

/// Byproduct dependencies of one output vertex.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputFrame {
    pub x_deps: Vec<usize>,
    pub z_deps: Vec<usize>,
}

/// An ordered adaptive measurement program on a graph state.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MeasurementPattern {
    pub steps: Vec<Step>,
    pub output_vertices: Vec<usize>,
    pub output_frames: Vec<OutputFrame>,
}

impl MeasurementPattern {
    /// The pattern that measures nothing and outputs every vertex.
    pub fn empty(graph: &GraphSpec) -> Self {
        let outputs: Vec<usize> = (0..graph.vertex_count).collect();
        Self { steps: vec![], output_frames: vec![OutputFrame::default(); outputs.len()], output_vertices: outputs }
    }

    pub fn measured_vertices(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }

    /// Checks the pattern against a graph: every vertex is measured once or is
    /// an output, and dependencies only reference earlier steps.
    pub fn validate(&self, graph: &GraphSpec) -> Result<()> {
        let mut seen = BTreeSet::new();
        for (i, step) in self.steps.iter().enumerate() {
            if step.vertex >= graph.vertex_count {
                return Err(Error::Pattern(format!("step {i} measures missing vertex {}", step.vertex)));
            }
            for d in step.x_deps.iter().chain(&step.z_deps) {
                if !seen.contains(d) {
                    return Err(Error::Pattern(format!(
                        "step {i} depends on vertex {d}, which is not measured earlier"
                    )));
                }
            }
            if !seen.insert(step.vertex) {
                return Err(Error::Pattern(format!("vertex {} measured twice", step.vertex)));
            }
        }
        if self.output_frames.len() != self.output_vertices.len() {
            return Err(Error::Pattern("one output frame per output vertex required".into()));
        }
        for (o, frame) in self.output_vertices.iter().zip(&self.output_frames) {
            if *o >= graph.vertex_count {
                return Err(Error::Pattern(format!("output vertex {o} missing from graph")));
            }
            if seen.contains(o) {
                return Err(Error::Pattern(format!("output vertex {o} is also measured")));
            }
            if frame.x_deps.iter().chain(&frame.z_deps).any(|d| !seen.contains(d)) {
                return Err(Error::Pattern(format!("output {o} depends on an unmeasured vertex")));
            }
        }
        let covered = seen.len() + self.output_vertices.iter().collect::<BTreeSet<_>>().len();
        if covered != graph.vertex_count {
            return Err(Error::Pattern(format!(
                "{} of {} vertices are neither measured nor outputs",
                graph.vertex_count - covered.min(graph.vertex_count),
                graph.vertex_count
            )));
        }
        Ok(())
    }
}

fn toggle(set: &mut BTreeSet<usize>, v: usize) {
    if !set.remove(&v) {
        set.insert(v);
    }
}

/// Derives adaptive dependencies from a flow.
///
/// `order` lists the measured vertices with their bases; XY/X measured
/// vertices need a successor in `flow`. After measuring `v` with outcome `s`
/// the byproduct `X^s` lands on `flow[v]` and `Z^s` on every other neighbor of
/// `flow[v]`. A Z measurement puts `Z^s` on the neighbors of `v`.
pub fn compile_with_flow(
    graph: &GraphSpec,
    order: &[(usize, Basis)],
    flow: &BTreeMap<usize, usize>,
    outputs: &[usize],
) -> Result<MeasurementPattern> {
    let mut x_frame: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); graph.vertex_count];
    let mut z_frame: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); graph.vertex_count];
    let mut measured = vec![false; graph.vertex_count];
    let mut z_removed = vec![false; graph.vertex_count];
    let mut steps = Vec::with_capacity(order.len());
    for &(v, basis) in order {
        if v >= graph.vertex_count || measured[v] {
            return Err(Error::Pattern(format!("vertex {v} missing or measured twice")));
        }
        steps.push(Step {
            vertex: v,
            basis,
            x_deps: x_frame[v].iter().copied().collect(),
            z_deps: z_frame[v].iter().copied().collect(),
        });
        measured[v] = true;
        match basis {
            Basis::Z => {
                z_removed[v] = true;
                for u in graph.neighbors(v) {
                    if !measured[u] {
                        toggle(&mut z_frame[u], v);
                    } else if !z_removed[u] {
                        return Err(Error::Pattern(format!(
                            "Z measurement of {v} after its XY-measured neighbor {u}"
                        )));
                    }
                }
            }
            Basis::X | Basis::Xy(_) => {
                let f = *flow
                    .get(&v)
                    .ok_or_else(|| Error::Pattern(format!("vertex {v} has no flow successor")))?;
                if !graph.has_edge(v, f) {
                    return Err(Error::Pattern(format!("flow successor {f} is not adjacent to {v}")));
                }
                if measured[f] {
                    return Err(Error::Pattern(format!("flow successor {f} measured before {v}")));
                }
                toggle(&mut x_frame[f], v);
                for u in graph.neighbors(f) {
                    if u == v || z_removed[u] {
                        continue;
                    }
                    if measured[u] {
                        return Err(Error::Pattern(format!(
                            "flow condition violated: neighbor {u} of {f} measured before {v}"
                        )));
                    }
                    toggle(&mut z_frame[u], v);
                }
            }
        }
    }
    let output_frames = outputs
        .iter()
        .map(|&o| OutputFrame { x_deps: x_frame[o].iter().copied().collect(), z_deps: z_frame[o].iter().copied().collect() })
        .collect();
    let pattern = MeasurementPattern { steps, output_vertices: outputs.to_vec(), output_frames };
    pattern.validate(graph)?;
    Ok(pattern)
}

/// Chain of `angles.len() + 1` vertices, measuring all but the last in the XY
/// plane. With outcome 0 everywhere each step applies `H · diag(1, e^{-iθ})`.
pub fn linear_pattern(angles: &[f64]) -> (GraphSpec, MeasurementPattern) {
    let n = angles.len() + 1;
    let graph = GraphSpec::linear(n);
    let order: Vec<(usize, Basis)> = angles.iter().enumerate().map(|(i, &t)| (i, Basis::Xy(t))).collect();
    let flow: BTreeMap<usize, usize> = (0..n - 1).map(|i| (i, i + 1)).collect();
    let pattern = compile_with_flow(&graph, &order, &flow, &[n - 1]).expect("chain flow is valid");
    (graph, pattern)
}

/// Two-row ladder measured column by column with flow along the rows.
/// `angles[c][r]` is the angle of row `r` in column `c`, for all but the last column.
pub fn ladder_pattern(angles: &[[f64; 2]]) -> (GraphSpec, MeasurementPattern) {
    let cols = angles.len() + 1;
    let graph = GraphSpec::ladder(cols);
    let mut order = Vec::new();
    let mut flow = BTreeMap::new();
    for (c, pair) in angles.iter().enumerate() {
        for (r, &t) in pair.iter().enumerate() {
            order.push((2 * c + r, Basis::Xy(t)));
            flow.insert(2 * c + r, 2 * (c + 1) + r);
        }
    }
    let outputs = [2 * (cols - 1), 2 * (cols - 1) + 1];
    let pattern = compile_with_flow(&graph, &order, &flow, &outputs).expect("ladder flow is valid");
    (graph, pattern)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn chain_dependencies() {
        let (_, p) = linear_pattern(&[0.1, 0.2, 0.3]);
        // vertex 1 gets X from 0; vertex 2 gets Z from 0 and X from 1.
        assert_eq!(p.steps[1].x_deps, vec![0]);
        assert!(p.steps[1].z_deps.is_empty());
        assert_eq!(p.steps[2].x_deps, vec![1]);
        assert_eq!(p.steps[2].z_deps, vec![0]);
        assert_eq!(p.output_frames[0].x_deps, vec![2]);
        assert_eq!(p.output_frames[0].z_deps, vec![1]);
    }

    #[test]
    fn rejects_forward_dependencies() {
        let g = GraphSpec::linear(2);
        let p = MeasurementPattern {
            steps: vec![Step { vertex: 0, basis: Basis::X, x_deps: vec![1], z_deps: vec![] }],
            output_vertices: vec![1],
            output_frames: vec![OutputFrame::default()],
        };
        assert!(p.validate(&g).is_err());
    }

    #[test]
    fn rejects_measured_output_and_uncovered_vertex() {
        let g = GraphSpec::linear(3);
        let p = MeasurementPattern {
            steps: vec![Step { vertex: 0, basis: Basis::X, x_deps: vec![], z_deps: vec![] }],
            output_vertices: vec![0],
            output_frames: vec![OutputFrame::default()],
        };
        assert!(p.validate(&g).is_err());
        let p = MeasurementPattern {
            steps: vec![],
            output_vertices: vec![0],
            output_frames: vec![OutputFrame::default()],
        };
        assert!(p.validate(&g).is_err());
    }

    #[test]
    fn flow_violation_detected() {
        // Measuring vertex 1 before 0 on a chain of 3 breaks the flow of 0.
        let g = GraphSpec::linear(3);
        let flow: BTreeMap<usize, usize> = [(0, 1), (1, 2)].into_iter().collect();
        let order = [(1, Basis::Xy(0.0)), (0, Basis::Xy(0.0))];
        assert!(compile_with_flow(&g, &order, &flow, &[2]).is_err());
    }

    #[test]
    fn json_roundtrip() {
        let (_, p) = linear_pattern(&[0.25, -1.5]);
        let s = serde_json::to_string(&p).unwrap();
        assert!(s.contains("\"plane\":\"xy\""));
        let back: MeasurementPattern = serde_json::from_str(&s).unwrap();
        assert_eq!(back, p);
    }
}
