use crate::error::{Error, Result};
use crate::linalg::gates::{self, Gate2};
use crate::linalg::{qubit, CMatrix, DensityOperator, StateVector};
use serde::{Deserialize, Serialize};

/// Pauli byproduct σ_q = ⊗_j X_j^{x_j} Z_j^{z_j} over `N` sites.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ByproductFrame {
    pub x: Vec<bool>,
    pub z: Vec<bool>,
}

impl ByproductFrame {
    pub fn identity(n: usize) -> Self {
        Self { x: vec![false; n], z: vec![false; n] }
    }

    /// From the bit string q = (x_1..x_N, z_1..z_N).
    pub fn from_bits(q: &[bool]) -> Result<Self> {
        if q.len() % 2 != 0 {
            return Err(Error::FrameLength { expected: q.len() + 1, got: q.len() });
        }
        let n = q.len() / 2;
        Ok(Self { x: q[..n].to_vec(), z: q[n..].to_vec() })
    }

    pub fn to_bits(&self) -> Vec<bool> {
        self.x.iter().chain(&self.z).copied().collect()
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    pub fn is_identity(&self) -> bool {
        !self.x.iter().chain(&self.z).any(|&b| b)
    }

    /// σ_q restricted to site `j`: X^{x_j} Z^{z_j}.
    pub fn restricted(&self, j: usize) -> Gate2 {
        gates::pauli_xz(self.x[j], self.z[j])
    }

    /// (σ_q)† restricted to site `j`: Z^{z_j} X^{x_j}.
    pub fn correction_at(&self, j: usize) -> Gate2 {
        gates::dagger(&self.restricted(j))
    }

    /// Componentwise XOR (Pauli product up to phase).
    pub fn compose(&self, other: &ByproductFrame) -> Result<ByproductFrame> {
        self.check_len(other.len())?;
        Ok(Self {
            x: self.x.iter().zip(&other.x).map(|(a, b)| a ^ b).collect(),
            z: self.z.iter().zip(&other.z).map(|(a, b)| a ^ b).collect(),
        })
    }

    fn check_len(&self, n: usize) -> Result<()> {
        if self.len() != n {
            return Err(Error::FrameLength { expected: n, got: self.len() });
        }
        Ok(())
    }

    /// Applies σ_q to an `n`-qubit register (rows).
    pub fn apply_to_register(&self, m: &mut CMatrix, n: usize) {
        for j in 0..n {
            if self.x[j] || self.z[j] {
                qubit::apply_1q(m, n, j, &self.restricted(j));
            }
        }
    }

    /// Applies σ_q† site by site.
    pub fn correct_register(&self, m: &mut CMatrix, n: usize) {
        for j in 0..n {
            if self.x[j] || self.z[j] {
                qubit::apply_1q(m, n, j, &self.correction_at(j));
            }
        }
    }

    /// Full operator σ_q as a matrix.
    pub fn operator(&self) -> CMatrix {
        let n = self.len();
        let mut m = CMatrix::identity(1 << n, 1 << n);
        self.apply_to_register(&mut m, n);
        m
    }
}

/// Objects a byproduct correction can act on.
pub trait Correctable: Sized {
    fn correct(&self, frame: &ByproductFrame) -> Result<Self>;
}

impl Correctable for StateVector {
    fn correct(&self, frame: &ByproductFrame) -> Result<Self> {
        frame.check_len(self.n_qubits())?;
        let mut m = self.as_column();
        frame.correct_register(&mut m, self.n_qubits());
        StateVector::normalized(m.column(0).into_owned())
    }
}

impl Correctable for DensityOperator {
    fn correct(&self, frame: &ByproductFrame) -> Result<Self> {
        let n = self
            .n_qubits()
            .ok_or_else(|| Error::DimensionMismatch("density operator is not a qubit register".into()))?;
        frame.check_len(n)?;
        let mut m = self.matrix().clone();
        frame.correct_register(&mut m, n);
        // (σ† ρ)† = ρ σ, so correcting the rows of the adjoint applies σ on the right.
        let mut right = m.adjoint();
        frame.correct_register(&mut right, n);
        Ok(DensityOperator::from_matrix_unchecked(right.adjoint()))
    }
}

/// Applies σ_q† site-wise.
pub fn correct_byproduct<T: Correctable>(state: &T, frame: &ByproductFrame) -> Result<T> {
    state.correct(frame)
}
