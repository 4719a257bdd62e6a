//! Seeded random states, unitaries and channels for property tests and the
//! randomized certification suites.

use super::{CMatrix, CVector, DensityOperator, KrausChannel, StateVector, C64};
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    C64::new(StandardNormal.sample(rng), StandardNormal.sample(rng))
}

pub fn gaussian_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Haar-random pure state on `n` qubits.
pub fn random_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> StateVector {
    let v = CVector::from_fn(1 << n, |_, _| gaussian(rng));
    StateVector::normalized(v).expect("gaussian vector is nonzero")
}

/// Random mixed state of the given rank (Ginibre ensemble).
pub fn random_density<R: Rng + ?Sized>(dim: usize, rank: usize, rng: &mut R) -> DensityOperator {
    let g = gaussian_matrix(dim, rank.max(1), rng);
    let m = &g * g.adjoint();
    let tr = m.trace().re;
    DensityOperator::from_matrix_unchecked(m.unscale(tr))
}

/// Haar-random unitary via QR with the phase fix.
pub fn random_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let qr = gaussian_matrix(dim, dim, rng).qr();
    let (mut q, r) = qr.unpack();
    for j in 0..dim {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / d.norm() } else { C64::new(1.0, 0.0) };
        let mut col = q.column_mut(j);
        col *= phase;
    }
    q
}

/// Random channel with `n_kraus` Kraus operators, from a random isometry.
pub fn random_channel<R: Rng + ?Sized>(dim_in: usize, dim_out: usize, n_kraus: usize, rng: &mut R) -> KrausChannel {
    let stacked = gaussian_matrix(n_kraus * dim_out, dim_in, rng);
    let (q, _) = stacked.qr().unpack();
    let kraus = (0..n_kraus)
        .map(|k| q.rows(k * dim_out, dim_out).into_owned())
        .collect();
    KrausChannel::new(kraus).expect("isometry blocks form a valid Kraus family")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::max_abs_diff;
    use rand::SeedableRng;
    use rand_chacha::ChaCha20Rng;

    #[test]
    fn random_objects_are_valid() {
        let mut rng = ChaCha20Rng::seed_from_u64(1);
        let u = random_unitary(4, &mut rng);
        assert!(max_abs_diff(&(u.adjoint() * &u), &CMatrix::identity(4, 4)) < 1e-12);
        random_density(4, 2, &mut rng).validate().unwrap();
        let ch = random_channel(2, 4, 3, &mut rng);
        assert!(ch.trace_preservation_error() < 1e-12);
        assert_eq!(random_state(3, &mut rng).n_qubits(), 3);
    }
}
