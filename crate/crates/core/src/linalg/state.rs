use super::{
    cr, hermitian_eigenvalues, hermiticity_error, qubits_for_dim, CMatrix,
    CVector, C64, MAX_STATE_QUBITS, PSD_TOL, STRUCT_TOL,
};
use crate::error::{Error, Result};

/// Normalized pure state of `n` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: CVector,
    n: usize,
}

impl StateVector {
    pub fn new(amps: CVector) -> Result<Self> {
        let n = qubits_for_dim(amps.len())
            .ok_or_else(|| Error::InvalidState(format!("length {} is not a power of two", amps.len())))?;
        if n > MAX_STATE_QUBITS {
            return Err(Error::TooManyQubits { requested: n, cap: MAX_STATE_QUBITS });
        }
        let norm = amps.norm_squared();
        if (norm - 1.0).abs() > STRUCT_TOL {
            return Err(Error::InvalidState(format!("squared norm {norm} != 1")));
        }
        Ok(Self { amps, n })
    }

    /// Normalizes `amps` first. Fails on a zero vector.
    pub fn normalized(amps: CVector) -> Result<Self> {
        let norm = amps.norm();
        if norm == 0.0 {
            return Err(Error::InvalidState("zero vector".into()));
        }
        Self::new(amps.unscale(norm))
    }

    pub fn from_slice(amps: &[C64]) -> Result<Self> {
        Self::new(CVector::from_column_slice(amps))
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = CVector::zeros(1 << n);
        amps[index] = cr(1.0);
        Self { amps, n }
    }

    pub fn zeros(n: usize) -> Self {
        Self::basis(n, 0)
    }

    /// |+⟩^{⊗n}
    pub fn plus(n: usize) -> Self {
        let dim = 1usize << n;
        let a = cr(1.0 / (dim as f64).sqrt());
        Self { amps: CVector::from_element(dim, a), n }
    }

    /// Product state from single-qubit kets, first ket most significant.
    pub fn product(kets: &[[C64; 2]]) -> Result<Self> {
        let mut amps = CVector::from_element(1, cr(1.0));
        for k in kets {
            amps = amps.kronecker(&CVector::from_column_slice(k));
        }
        Self::normalized(amps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amps
    }

    pub fn into_amplitudes(self) -> CVector {
        self.amps
    }

    pub fn inner(&self, other: &StateVector) -> C64 {
        self.amps.dotc(&other.amps)
    }

    /// |⟨self|other⟩|²
    pub fn fidelity(&self, other: &StateVector) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn to_density(&self) -> DensityOperator {
        DensityOperator { matrix: &self.amps * self.amps.adjoint() }
    }

    /// Column matrix view used by the register routines.
    pub fn as_column(&self) -> CMatrix {
        CMatrix::from_column_slice(self.amps.len(), 1, self.amps.as_slice())
    }
}

/// Density operator on a `dim`-dimensional space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityOperator {
    matrix: CMatrix,
}

impl DensityOperator {
    /// Validates hermiticity, unit trace and positivity.
    pub fn new(matrix: CMatrix) -> Result<Self> {
        if !matrix.is_square() {
            return Err(Error::InvalidOperator("density matrix must be square".into()));
        }
        let herm = hermiticity_error(&matrix);
        if herm > STRUCT_TOL {
            return Err(Error::InvalidOperator(format!("not Hermitian (error {herm:e})")));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > STRUCT_TOL || tr.im.abs() > STRUCT_TOL {
            return Err(Error::InvalidOperator(format!("trace {tr} != 1")));
        }
        let min = hermitian_eigenvalues(&matrix).first().copied().unwrap_or(0.0);
        if min < -PSD_TOL {
            return Err(Error::InvalidOperator(format!("negative eigenvalue {min:e}")));
        }
        Ok(Self { matrix })
    }

    /// Wraps a matrix without checks. Used for intermediate results whose
    /// invariants follow from construction; tests re-validate them.
    pub(crate) fn from_matrix_unchecked(matrix: CMatrix) -> Self {
        Self { matrix }
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self { matrix: CMatrix::identity(dim, dim).unscale(dim as f64) }
    }

    pub fn pure(psi: &StateVector) -> Self {
        psi.to_density()
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn n_qubits(&self) -> Option<usize> {
        qubits_for_dim(self.dim())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }

    /// ⟨ψ|ρ|ψ⟩
    pub fn fidelity_with_pure(&self, psi: &StateVector) -> f64 {
        let v = psi.amplitudes();
        (v.adjoint() * &self.matrix * v)[(0, 0)].re
    }

    /// Checks all invariants, returning the first violation.
    pub fn validate(&self) -> Result<()> {
        Self::new(self.matrix.clone()).map(|_| ())
    }
}

/// Kronecker product of two objects of the same kind, `a` most significant.
pub trait Tensor<Rhs = Self> {
    type Output;
    fn tensor(&self, rhs: &Rhs) -> Self::Output;
}

impl Tensor for StateVector {
    type Output = StateVector;
    fn tensor(&self, rhs: &StateVector) -> StateVector {
        StateVector { amps: self.amps.kronecker(&rhs.amps), n: self.n + rhs.n }
    }
}

impl Tensor for DensityOperator {
    type Output = DensityOperator;
    fn tensor(&self, rhs: &DensityOperator) -> DensityOperator {
        DensityOperator { matrix: self.matrix.kronecker(&rhs.matrix) }
    }
}

impl Tensor for CMatrix {
    type Output = CMatrix;
    fn tensor(&self, rhs: &CMatrix) -> CMatrix {
        self.kronecker(rhs)
    }
}

/// Dynamically typed state-or-operator, for inputs whose kind is only known
/// at runtime (config files, attack specs).
#[derive(Clone, Debug)]
pub enum QuantumObject {
    State(StateVector),
    Operator(CMatrix),
}

/// Kronecker product that rejects mixing a state with an operator.
pub fn tensor(a: &QuantumObject, b: &QuantumObject) -> Result<QuantumObject> {
    match (a, b) {
        (QuantumObject::State(x), QuantumObject::State(y)) => Ok(QuantumObject::State(x.tensor(y))),
        (QuantumObject::Operator(x), QuantumObject::Operator(y)) => Ok(QuantumObject::Operator(x.kronecker(y))),
        _ => Err(Error::InvalidOperator("cannot tensor a state with an operator".into())),
    }
}

/// Partial trace of a square operator over the subsystems not listed in `keep`.
///
/// `dims` lists subsystem dimensions, most significant first. The kept
/// subsystems appear in the output in their original relative order.
pub fn partial_trace_matrix(m: &CMatrix, dims: &[usize], keep: &[usize]) -> Result<CMatrix> {
    let total: usize = dims.iter().product();
    if total != m.nrows() || !m.is_square() {
        return Err(Error::DimensionMismatch(format!(
            "subsystem dims {dims:?} (product {total}) vs operator {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    let mut kept: Vec<usize> = keep.to_vec();
    kept.sort_unstable();
    kept.dedup();
    if let Some(&bad) = kept.iter().find(|&&k| k >= dims.len()) {
        return Err(Error::DimensionMismatch(format!("keep index {bad} out of range for {} subsystems", dims.len())));
    }
    let traced: Vec<usize> = (0..dims.len()).filter(|i| !kept.contains(i)).collect();
    // Place value of each subsystem in the flat index.
    let mut place = vec![1usize; dims.len()];
    for i in (0..dims.len().saturating_sub(1)).rev() {
        place[i] = place[i + 1] * dims[i + 1];
    }
    let offsets = |subs: &[usize]| -> Vec<usize> {
        let count: usize = subs.iter().map(|&s| dims[s]).product();
        let mut out = Vec::with_capacity(count);
        for mut idx in 0..count {
            let mut flat = 0;
            for &s in subs.iter().rev() {
                flat += (idx % dims[s]) * place[s];
                idx /= dims[s];
            }
            out.push(flat);
        }
        out
    };
    let keep_off = offsets(&kept);
    let trace_off = offsets(&traced);
    let dk = keep_off.len();
    let mut out = CMatrix::zeros(dk, dk);
    for (a, &ra) in keep_off.iter().enumerate() {
        for (b, &rb) in keep_off.iter().enumerate() {
            let mut acc = C64::new(0.0, 0.0);
            for &t in &trace_off {
                acc += m[(ra + t, rb + t)];
            }
            out[(a, b)] = acc;
        }
    }
    Ok(out)
}

pub fn partial_trace(rho: &DensityOperator, dims: &[usize], keep: &[usize]) -> Result<DensityOperator> {
    partial_trace_matrix(rho.matrix(), dims, keep).map(DensityOperator::from_matrix_unchecked)
}
