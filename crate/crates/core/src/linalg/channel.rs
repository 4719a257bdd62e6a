use super::{hermitian_eigen, max_abs_diff, CMatrix, DensityOperator, C64, MAX_CHANNEL_QUBITS, TP_TOL};
use crate::error::{Error, Result};

/// Completely positive trace-preserving map given by a Kraus family.
#[derive(Clone, Debug)]
pub struct KrausChannel {
    kraus: Vec<CMatrix>,
    dim_in: usize,
    dim_out: usize,
}

fn dim_cap() -> usize {
    1 << MAX_CHANNEL_QUBITS
}

impl KrausChannel {
    pub fn new(kraus: Vec<CMatrix>) -> Result<Self> {
        let first = kraus
            .first()
            .ok_or_else(|| Error::InvalidChannel("empty Kraus family".into()))?;
        let (dim_out, dim_in) = first.shape();
        if kraus.iter().any(|k| k.shape() != (dim_out, dim_in)) {
            return Err(Error::InvalidChannel("Kraus operators have inconsistent shapes".into()));
        }
        if dim_in > dim_cap() || dim_out > dim_cap() {
            return Err(Error::TooManyQubits { requested: dim_in.max(dim_out).trailing_zeros() as usize, cap: MAX_CHANNEL_QUBITS });
        }
        let ch = Self { kraus, dim_in, dim_out };
        let err = ch.trace_preservation_error();
        if err > TP_TOL {
            return Err(Error::InvalidChannel(format!("sum K†K deviates from identity by {err:e}")));
        }
        Ok(ch)
    }

    pub fn identity(dim: usize) -> Self {
        Self { kraus: vec![CMatrix::identity(dim, dim)], dim_in: dim, dim_out: dim }
    }

    pub fn unitary(u: CMatrix) -> Result<Self> {
        Self::new(vec![u])
    }

    /// Discards the input and prepares `rho`.
    pub fn replacement(dim_in: usize, rho: &DensityOperator) -> Self {
        let (vals, vecs) = hermitian_eigen(rho.matrix());
        let mut kraus = Vec::new();
        for (j, &lam) in vals.iter().enumerate() {
            if lam <= 1e-15 {
                continue;
            }
            let v = vecs.column(j).scale(lam.sqrt());
            for i in 0..dim_in {
                let mut k = CMatrix::zeros(rho.dim(), dim_in);
                k.set_column(i, &v);
                kraus.push(k);
            }
        }
        Self { kraus, dim_in, dim_out: rho.dim() }
    }

    /// Completely dephasing channel in the computational basis.
    pub fn dephasing(dim: usize) -> Self {
        let kraus = (0..dim)
            .map(|i| {
                let mut k = CMatrix::zeros(dim, dim);
                k[(i, i)] = C64::new(1.0, 0.0);
                k
            })
            .collect();
        Self { kraus, dim_in: dim, dim_out: dim }
    }

    /// Mixture Σ p_i U_i · U_i†.
    pub fn mixed_unitary(terms: &[(f64, CMatrix)]) -> Result<Self> {
        Self::new(terms.iter().filter(|(p, _)| *p > 0.0).map(|(p, u)| u.scale(p.sqrt())).collect())
    }

    /// Mixture of operators the caller knows to be unitary. Only the weights
    /// and shapes are checked, which keeps large Pauli mixtures cheap.
    pub fn mixed_unitary_trusted(terms: Vec<(f64, CMatrix)>) -> Result<Self> {
        let total: f64 = terms.iter().map(|(p, _)| p).sum();
        if (total - 1.0).abs() > TP_TOL || terms.iter().any(|(p, _)| *p < 0.0) {
            return Err(Error::InvalidChannel(format!("mixture weights sum to {total}")));
        }
        let dim = terms.first().map(|(_, u)| u.nrows()).ok_or_else(|| Error::InvalidChannel("empty mixture".into()))?;
        if terms.iter().any(|(_, u)| u.shape() != (dim, dim)) {
            return Err(Error::InvalidChannel("mixture terms have inconsistent shapes".into()));
        }
        if dim > dim_cap() {
            return Err(Error::TooManyQubits { requested: dim.trailing_zeros() as usize, cap: MAX_CHANNEL_QUBITS });
        }
        let kraus = terms.into_iter().filter(|(p, _)| *p > 0.0).map(|(p, u)| u.scale(p.sqrt())).collect();
        Ok(Self { kraus, dim_in: dim, dim_out: dim })
    }

    pub fn kraus(&self) -> &[CMatrix] {
        &self.kraus
    }

    pub fn dim_in(&self) -> usize {
        self.dim_in
    }

    pub fn dim_out(&self) -> usize {
        self.dim_out
    }

    pub fn trace_preservation_error(&self) -> f64 {
        let mut sum = CMatrix::zeros(self.dim_in, self.dim_in);
        for k in &self.kraus {
            sum += k.adjoint() * k;
        }
        max_abs_diff(&sum, &CMatrix::identity(self.dim_in, self.dim_in))
    }

    /// Σ K X K† on an arbitrary operator (linear extension).
    pub fn apply_matrix(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim_out, self.dim_out);
        for k in &self.kraus {
            out += k * x * k.adjoint();
        }
        out
    }

    pub fn apply(&self, rho: &DensityOperator) -> Result<DensityOperator> {
        if rho.dim() != self.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "channel input {} vs state {}",
                self.dim_in,
                rho.dim()
            )));
        }
        Ok(DensityOperator::from_matrix_unchecked(self.apply_matrix(rho.matrix())))
    }

    /// `then ∘ self`: apply `self` first.
    pub fn then(&self, then: &KrausChannel) -> Result<KrausChannel> {
        if self.dim_out != then.dim_in {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose output {} into input {}",
                self.dim_out, then.dim_in
            )));
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * then.kraus.len());
        for b in &then.kraus {
            for a in &self.kraus {
                kraus.push(b * a);
            }
        }
        Ok(KrausChannel { kraus, dim_in: self.dim_in, dim_out: then.dim_out }.compressed())
    }

    /// Parallel composition `self ⊗ other`.
    pub fn tensor(&self, other: &KrausChannel) -> Result<KrausChannel> {
        let dim_in = self.dim_in * other.dim_in;
        let dim_out = self.dim_out * other.dim_out;
        if dim_in > dim_cap() || dim_out > dim_cap() {
            return Err(Error::TooManyQubits { requested: dim_in.max(dim_out).trailing_zeros() as usize, cap: MAX_CHANNEL_QUBITS });
        }
        let mut kraus = Vec::with_capacity(self.kraus.len() * other.kraus.len());
        for a in &self.kraus {
            for b in &other.kraus {
                kraus.push(a.kronecker(b));
            }
        }
        Ok(KrausChannel { kraus, dim_in, dim_out }.compressed())
    }

    /// Unnormalized Choi matrix Σ_ij |i⟩⟨j| ⊗ Φ(|i⟩⟨j|), reference system first.
    pub fn choi(&self) -> CMatrix {
        let (di, d_o) = (self.dim_in, self.dim_out);
        let mut j = CMatrix::zeros(di * d_o, di * d_o);
        for k in &self.kraus {
            // vec(K) with index (i, o) -> i * d_o + o
            let mut v = nalgebra::DVector::<C64>::zeros(di * d_o);
            for i in 0..di {
                for o in 0..d_o {
                    v[i * d_o + o] = k[(o, i)];
                }
            }
            j += &v * v.adjoint();
        }
        j
    }

    /// Rebuilds a channel from an unnormalized Choi matrix.
    pub fn from_choi(choi: &CMatrix, dim_in: usize, dim_out: usize) -> Result<KrausChannel> {
        if choi.nrows() != dim_in * dim_out || !choi.is_square() {
            return Err(Error::DimensionMismatch(format!(
                "Choi matrix {}x{} for dims {dim_in}->{dim_out}",
                choi.nrows(),
                choi.ncols()
            )));
        }
        let (vals, vecs) = hermitian_eigen(choi);
        let scale = vals.iter().fold(0.0f64, |m, v| m.max(v.abs())).max(1.0);
        let mut kraus = Vec::new();
        for (idx, &lam) in vals.iter().enumerate() {
            if lam < -1e-9 * scale {
                return Err(Error::InvalidChannel(format!("Choi matrix has negative eigenvalue {lam:e}")));
            }
            if lam <= 1e-13 * scale {
                continue;
            }
            let v = vecs.column(idx);
            let mut k = CMatrix::zeros(dim_out, dim_in);
            for i in 0..dim_in {
                for o in 0..dim_out {
                    k[(o, i)] = v[i * dim_out + o] * lam.sqrt();
                }
            }
            kraus.push(k);
        }
        if kraus.is_empty() {
            return Err(Error::InvalidChannel("Choi matrix is zero".into()));
        }
        KrausChannel::new(kraus)
    }

    /// Re-derives a minimal Kraus family via the Choi matrix when the family
    /// grew larger than `dim_in · dim_out`.
    pub fn compressed(self) -> KrausChannel {
        if self.kraus.len() <= self.dim_in * self.dim_out {
            return self;
        }
        match KrausChannel::from_choi(&self.choi(), self.dim_in, self.dim_out) {
            Ok(c) => c,
            Err(_) => self,
        }
    }

    /// Builds a channel from its action on matrix units |i⟩⟨j|.
    pub fn from_linear_map<F>(dim_in: usize, dim_out: usize, map: F) -> Result<KrausChannel>
    where
        F: Fn(&CMatrix) -> CMatrix,
    {
        let mut choi = CMatrix::zeros(dim_in * dim_out, dim_in * dim_out);
        for i in 0..dim_in {
            for j in 0..dim_in {
                let mut unit = CMatrix::zeros(dim_in, dim_in);
                unit[(i, j)] = C64::new(1.0, 0.0);
                let img = map(&unit);
                for a in 0..dim_out {
                    for b in 0..dim_out {
                        choi[(i * dim_out + a, j * dim_out + b)] = img[(a, b)];
                    }
                }
            }
        }
        KrausChannel::from_choi(&choi, dim_in, dim_out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates::{self, ONE, PLUS, ZERO};
    use crate::linalg::{max_abs_diff, StateVector};

    #[test]
    fn identity_channel_leaves_state() {
        let rho = StateVector::product(&[PLUS]).unwrap().to_density();
        let out = KrausChannel::identity(2).apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), rho.matrix()) < 1e-15);
    }

    #[test]
    fn dephasing_plus_gives_mixed() {
        let rho = StateVector::product(&[PLUS]).unwrap().to_density();
        let out = KrausChannel::dephasing(2).apply(&rho).unwrap();
        assert!(max_abs_diff(out.matrix(), DensityOperator::maximally_mixed(2).matrix()) < 1e-15);
    }

    #[test]
    fn x_conjugation_flips_zero() {
        let rho = StateVector::product(&[ZERO]).unwrap().to_density();
        let ch = KrausChannel::unitary(gates::to_matrix(&gates::X)).unwrap();
        let out = ch.apply(&rho).unwrap();
        let one = StateVector::product(&[ONE]).unwrap().to_density();
        assert!(max_abs_diff(out.matrix(), one.matrix()) < 1e-15);
    }

    #[test]
    fn non_trace_preserving_rejected() {
        let k = CMatrix::identity(2, 2).scale(0.5);
        assert!(KrausChannel::new(vec![k]).is_err());
        assert!(KrausChannel::new(vec![]).is_err());
    }

    #[test]
    fn choi_roundtrip_preserves_action() {
        let ch = KrausChannel::dephasing(2).then(&KrausChannel::unitary(gates::to_matrix(&gates::H)).unwrap()).unwrap();
        let back = KrausChannel::from_choi(&ch.choi(), 2, 2).unwrap();
        let rho = StateVector::product(&[ZERO]).unwrap().to_density();
        assert!(max_abs_diff(ch.apply(&rho).unwrap().matrix(), back.apply(&rho).unwrap().matrix()) < 1e-12);
    }

    #[test]
    fn replacement_outputs_fixed_state() {
        let target = StateVector::product(&[PLUS]).unwrap().to_density();
        let ch = KrausChannel::replacement(4, &target);
        assert!(ch.trace_preservation_error() < 1e-12);
        let out = ch.apply(&DensityOperator::maximally_mixed(4)).unwrap();
        assert!(max_abs_diff(out.matrix(), target.matrix()) < 1e-12);
    }
}
