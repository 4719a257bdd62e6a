//! Row-space operations on qubit registers.
//!
//! A register of `n` qubits is stored as a `2^n × k` matrix. With `k = 1` it
//! is a state vector; with `k = d_in` the columns are the images of input
//! basis vectors, so the same routines build Kraus operators branch by branch.

use super::gates::Gate2;
use super::{CMatrix, C64};

#[inline]
fn stride(n: usize, k: usize) -> usize {
    1 << (n - 1 - k)
}

/// Applies a single-qubit gate to qubit `k` of an `n`-qubit register.
pub fn apply_1q(m: &mut CMatrix, n: usize, k: usize, u: &Gate2) {
    debug_assert_eq!(m.nrows(), 1 << n);
    let s = stride(n, k);
    let cols = m.ncols();
    for r in 0..m.nrows() {
        if r & s != 0 {
            continue;
        }
        let r1 = r | s;
        for col in 0..cols {
            let a = m[(r, col)];
            let b = m[(r1, col)];
            m[(r, col)] = u[0][0] * a + u[0][1] * b;
            m[(r1, col)] = u[1][0] * a + u[1][1] * b;
        }
    }
}

/// Controlled-Z between qubits `i` and `j`.
pub fn apply_cz(m: &mut CMatrix, n: usize, i: usize, j: usize) {
    let mask = stride(n, i) | stride(n, j);
    let cols = m.ncols();
    for r in 0..m.nrows() {
        if r & mask == mask {
            for col in 0..cols {
                m[(r, col)] = -m[(r, col)];
            }
        }
    }
}

/// Contracts qubit `k` against the bra `⟨ket|`, removing it from the register.
/// The result is unnormalized.
pub fn project_out(m: &CMatrix, n: usize, k: usize, ket: &[C64; 2]) -> CMatrix {
    let s = stride(n, k);
    let low = s - 1;
    let cols = m.ncols();
    let b0 = ket[0].conj();
    let b1 = ket[1].conj();
    let mut out = CMatrix::zeros(m.nrows() / 2, cols);
    for r in 0..out.nrows() {
        // Reinsert a zero bit at position `s`.
        let hi = (r & !low) << 1;
        let r0 = hi | (r & low);
        let r1 = r0 | s;
        for col in 0..cols {
            out[(r, col)] = b0 * m[(r0, col)] + b1 * m[(r1, col)];
        }
    }
    out
}

/// Inserts a fresh qubit in state `ket` so that it becomes qubit `pos` of an
/// `(n+1)`-qubit register.
pub fn insert_qubit(m: &CMatrix, n: usize, pos: usize, ket: &[C64; 2]) -> CMatrix {
    assert!(pos <= n);
    let s = 1usize << (n - pos);
    let low = s - 1;
    let cols = m.ncols();
    let mut out = CMatrix::zeros(m.nrows() * 2, cols);
    for r in 0..m.nrows() {
        let hi = (r & !low) << 1;
        let r0 = hi | (r & low);
        let r1 = r0 | s;
        for col in 0..cols {
            let v = m[(r, col)];
            out[(r0, col)] = ket[0] * v;
            out[(r1, col)] = ket[1] * v;
        }
    }
    out
}

/// Squared Frobenius norm (total probability weight of a branch).
pub fn weight(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm_sqr()).sum()
}

/// Reorders qubits: qubit `i` of the result is qubit `order[i]` of the input.
pub fn permute_qubits(m: &CMatrix, n: usize, order: &[usize]) -> CMatrix {
    assert_eq!(order.len(), n);
    let cols = m.ncols();
    let mut out = CMatrix::zeros(m.nrows(), cols);
    for r in 0..m.nrows() {
        let mut src = 0usize;
        for (i, &o) in order.iter().enumerate() {
            let bit = (r >> (n - 1 - i)) & 1;
            src |= bit << (n - 1 - o);
        }
        for col in 0..cols {
            out[(r, col)] = m[(src, col)];
        }
    }
    out
}
