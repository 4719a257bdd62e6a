//! Dense complex linear algebra for small qubit systems.
//!
//! Everything is exact dense arithmetic over `Complex64`. Register index
//! convention: qubit 0 is the most significant bit of a basis index, so
//! `a ⊗ b` puts `a` in the high-order position.

mod channel;
mod distance;
pub mod qubit;
pub mod random;
mod state;

pub use channel::KrausChannel;
pub use distance::{
    channel_distance, channel_distance_with, choi_distance, trace_norm, trace_norm_distance, ChannelDistance, DistanceMethod,
    DistanceReport, SearchConfig,
};
pub use state::{partial_trace, partial_trace_matrix, tensor, DensityOperator, QuantumObject, StateVector, Tensor};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

pub type C64 = Complex64;
pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Structural invariants (normalization, hermiticity, trace).
pub const STRUCT_TOL: f64 = 1e-12;
/// Derived equalities between independently computed quantities.
pub const EQ_TOL: f64 = 1e-9;
/// Minimum eigenvalue allowed for a density operator.
pub const PSD_TOL: f64 = 1e-10;
/// Trace preservation of Kraus families.
pub const TP_TOL: f64 = 1e-10;

/// Cap on qubits for state vectors.
pub const MAX_STATE_QUBITS: usize = 12;
/// Cap on qubits for channel objects (input or output side).
pub const MAX_CHANNEL_QUBITS: usize = 7;

#[inline]
pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

#[inline]
pub fn cr(re: f64) -> C64 {
    C64::new(re, 0.0)
}

pub fn is_power_of_two(n: usize) -> bool {
    n != 0 && n & (n - 1) == 0
}

/// Number of qubits for a power-of-two dimension.
pub fn qubits_for_dim(dim: usize) -> Option<usize> {
    is_power_of_two(dim).then(|| dim.trailing_zeros() as usize)
}

pub fn identity(dim: usize) -> CMatrix {
    CMatrix::identity(dim, dim)
}

/// Largest absolute entry of `a - b`.
pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn hermiticity_error(m: &CMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Eigenvalues of a Hermitian matrix, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix) -> Vec<f64> {
    let h = (m + m.adjoint()).scale(0.5);
    let mut ev: Vec<f64> = h.symmetric_eigenvalues().iter().copied().collect();
    ev.sort_by(|a, b| a.total_cmp(b));
    ev
}

/// Eigen-decomposition of a Hermitian matrix: (eigenvalues, eigenvectors as columns).
pub fn hermitian_eigen(m: &CMatrix) -> (Vec<f64>, CMatrix) {
    let h = (m + m.adjoint()).scale(0.5);
    let eig = h.symmetric_eigen();
    (eig.eigenvalues.iter().copied().collect(), eig.eigenvectors)
}

/// Single-qubit gates used throughout.
pub mod gates {
    use super::{cr, CMatrix, C64};
    use std::f64::consts::FRAC_1_SQRT_2;

    pub type Gate2 = [[C64; 2]; 2];

    pub const I: Gate2 = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]];
    pub const X: Gate2 = [[C64::new(0.0, 0.0), C64::new(1.0, 0.0)], [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]];
    pub const Y: Gate2 = [[C64::new(0.0, 0.0), C64::new(0.0, -1.0)], [C64::new(0.0, 1.0), C64::new(0.0, 0.0)]];
    pub const Z: Gate2 = [[C64::new(1.0, 0.0), C64::new(0.0, 0.0)], [C64::new(0.0, 0.0), C64::new(-1.0, 0.0)]];
    pub const H: Gate2 = [
        [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)],
        [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(-FRAC_1_SQRT_2, 0.0)],
    ];

    /// diag(1, e^{iφ})
    pub fn phase(phi: f64) -> Gate2 {
        [[cr(1.0), cr(0.0)], [cr(0.0), C64::from_polar(1.0, phi)]]
    }

    pub fn mul(a: &Gate2, b: &Gate2) -> Gate2 {
        let mut out = [[cr(0.0); 2]; 2];
        for i in 0..2 {
            for j in 0..2 {
                out[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
            }
        }
        out
    }

    pub fn dagger(a: &Gate2) -> Gate2 {
        [[a[0][0].conj(), a[1][0].conj()], [a[0][1].conj(), a[1][1].conj()]]
    }

    pub fn to_matrix(a: &Gate2) -> CMatrix {
        CMatrix::from_row_slice(2, 2, &[a[0][0], a[0][1], a[1][0], a[1][1]])
    }

    /// X^x Z^z
    pub fn pauli_xz(x: bool, z: bool) -> Gate2 {
        match (x, z) {
            (false, false) => I,
            (true, false) => X,
            (false, true) => Z,
            (true, true) => mul(&X, &Z),
        }
    }

    /// Ket |+_θ⟩ = (|0⟩ + e^{iθ}|1⟩)/√2, the `+` eigenvector of cos θ X + sin θ Y.
    pub fn xy_ket(theta: f64, outcome: u8) -> [C64; 2] {
        let sign = if outcome == 0 { 1.0 } else { -1.0 };
        [cr(FRAC_1_SQRT_2), C64::from_polar(FRAC_1_SQRT_2 * sign, theta)]
    }

    pub fn z_ket(outcome: u8) -> [C64; 2] {
        if outcome == 0 {
            [cr(1.0), cr(0.0)]
        } else {
            [cr(0.0), cr(1.0)]
        }
    }

    pub const PLUS: [C64; 2] = [C64::new(FRAC_1_SQRT_2, 0.0), C64::new(FRAC_1_SQRT_2, 0.0)];
    pub const ZERO: [C64; 2] = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
    pub const ONE: [C64; 2] = [C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
}
