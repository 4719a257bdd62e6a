use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

/// Undirected simple graph underlying a graph (cluster) state.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphSpec {
    pub vertex_count: usize,
    pub edges: BTreeSet<(usize, usize)>,
    /// Layer index per vertex; the highest layer is the output layer.
    pub layer_of: Vec<usize>,
}

impl GraphSpec {
    pub fn new(vertex_count: usize, edges: impl IntoIterator<Item = (usize, usize)>, layer_of: Vec<usize>) -> Result<Self> {
        let mut set = BTreeSet::new();
        for (a, b) in edges {
            if a == b {
                return Err(Error::Graph(format!("self-loop on vertex {a}")));
            }
            if a >= vertex_count || b >= vertex_count {
                return Err(Error::Graph(format!("edge ({a},{b}) references a missing vertex")));
            }
            set.insert((a.min(b), a.max(b)));
        }
        if layer_of.len() != vertex_count {
            return Err(Error::Graph(format!(
                "layer_of has {} entries for {vertex_count} vertices",
                layer_of.len()
            )));
        }
        Ok(Self { vertex_count, edges: set, layer_of })
    }

    /// Re-checks the invariants, for values that came from deserialization.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.vertex_count, self.edges.iter().copied(), self.layer_of.clone()).map(|_| ())
    }

    /// Path 0 - 1 - ... - (n-1); vertex i sits in layer i.
    pub fn linear(n: usize) -> Self {
        let edges = (1..n).map(|i| (i - 1, i));
        Self::new(n, edges, (0..n).collect()).expect("path graph is valid")
    }

    /// Two rows of `cols` vertices with rungs in every column.
    /// Vertex (row, col) has index `2 * col + row`; column = layer.
    pub fn ladder(cols: usize) -> Self {
        let idx = |row: usize, col: usize| 2 * col + row;
        let mut edges = Vec::new();
        for col in 0..cols {
            edges.push((idx(0, col), idx(1, col)));
            if col + 1 < cols {
                edges.push((idx(0, col), idx(0, col + 1)));
                edges.push((idx(1, col), idx(1, col + 1)));
            }
        }
        Self::new(2 * cols, edges, (0..2 * cols).map(|v| v / 2).collect()).expect("ladder is valid")
    }

    /// Graph with no edges.
    pub fn empty(n: usize) -> Self {
        Self::new(n, [], vec![0; n]).expect("edgeless graph is valid")
    }

    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.edges
            .iter()
            .filter_map(|&(a, b)| {
                if a == v {
                    Some(b)
                } else if b == v {
                    Some(a)
                } else {
                    None
                }
            })
            .collect()
    }

    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        self.edges.contains(&(a.min(b), a.max(b)))
    }

    pub fn last_layer(&self) -> Vec<usize> {
        let top = self.layer_of.iter().copied().max().unwrap_or(0);
        (0..self.vertex_count).filter(|&v| self.layer_of[v] == top).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_self_loops_and_bad_vertices() {
        assert!(GraphSpec::new(2, [(0, 0)], vec![0, 1]).is_err());
        assert!(GraphSpec::new(2, [(0, 2)], vec![0, 1]).is_err());
        assert!(GraphSpec::new(2, [(0, 1)], vec![0]).is_err());
    }

    #[test]
    fn ladder_shape() {
        let g = GraphSpec::ladder(3);
        assert_eq!(g.vertex_count, 6);
        assert_eq!(g.edges.len(), 3 + 4);
        assert_eq!(g.last_layer(), vec![4, 5]);
        let mut n = g.neighbors(2);
        n.sort();
        assert_eq!(n, vec![0, 3, 4]);
    }

    #[test]
    fn json_roundtrip() {
        let g = GraphSpec::linear(3);
        let s = serde_json::to_string(&g).unwrap();
        let back: GraphSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(g, back);
    }
}
