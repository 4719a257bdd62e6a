use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigen, trace_norm, CMatrix, DensityOperator};

/// Values below this are reported as exactly zero.
pub const ZERO_SNAP: f64 = 1e-12;

/// ρ = α η ⊗ |1⟩⟨1| + δ η_error ⊗ |0⟩⟨0| + (1 − α − δ) σ ⊗ |0⟩⟨0| with σ the
/// ideal output. The accepted part is split so that the ideal weight is as
/// large as possible; δ is what remains.
#[derive(Clone, Debug)]
pub struct FlaggedOutputDecomposition {
    pub alpha: f64,
    pub delta: f64,
    pub ideal_weight: f64,
    pub eta: Option<DensityOperator>,
    pub eta_error: Option<DensityOperator>,
    pub ideal_branch: DensityOperator,
    /// Raw trace norm between ρ and the recombined terms.
    pub reconstruction_error: f64,
}

fn snap(x: f64) -> f64 {
    if x.abs() < ZERO_SNAP {
        0.0
    } else {
        x
    }
}

fn flag_block(m: &CMatrix, e: usize) -> CMatrix {
    let d = m.nrows() / 2;
    CMatrix::from_fn(d, d, |a, b| m[(2 * a + e, 2 * b + e)])
}

fn with_flag(m: &CMatrix, e: usize) -> CMatrix {
    let d = m.nrows();
    let mut out = CMatrix::zeros(2 * d, 2 * d);
    for a in 0..d {
        for b in 0..d {
            out[(2 * a + e, 2 * b + e)] = m[(a, b)];
        }
    }
    out
}

/// Largest c with `b0 - c·sigma ⪰ 0`.
fn max_ideal_weight(b0: &CMatrix, sigma: &CMatrix) -> f64 {
    let (vals, vecs) = hermitian_eigen(b0);
    let top = vals.iter().copied().fold(0.0, f64::max);
    if top <= 0.0 {
        return 0.0;
    }
    let cut = 1e-10 * top.max(1.0);
    let d = b0.nrows();
    let mut proj = CMatrix::zeros(d, d);
    let mut inv_sqrt = CMatrix::zeros(d, d);
    for (j, &v) in vals.iter().enumerate() {
        if v > cut {
            let col = vecs.column(j);
            let p = &col * col.adjoint();
            inv_sqrt += p.scale(1.0 / v.sqrt());
            proj += p;
        }
    }
    // σ must live inside the support of b0
    if trace_norm(&(sigma - &proj * sigma * &proj)) > 1e-9 {
        return 0.0;
    }
    let m = &inv_sqrt * sigma * &inv_sqrt;
    let (mv, _) = hermitian_eigen(&m);
    let lam = mv.iter().copied().fold(0.0, f64::max);
    if lam <= 0.0 {
        0.0
    } else {
        1.0 / lam
    }
}

/// Decomposes an output whose last qubit is the verdict, given the ideal
/// output `sigma` (same dimension as the output without the verdict).
pub fn decompose_flagged_output(rho: &DensityOperator, sigma: &DensityOperator) -> Result<FlaggedOutputDecomposition> {
    let m = rho.matrix();
    if m.nrows() % 2 != 0 || m.nrows() / 2 != sigma.dim() {
        return Err(Error::DimensionMismatch(format!(
            "flagged output of dimension {} vs ideal of dimension {}",
            m.nrows(),
            sigma.dim()
        )));
    }
    let b1 = flag_block(m, 1);
    let b0 = flag_block(m, 0);
    let alpha = snap(b1.trace().re);
    let accepted = b0.trace().re;
    let c = max_ideal_weight(&b0, sigma.matrix()).min(accepted).max(0.0);
    let delta = snap(accepted - c);
    let ideal_weight = 1.0 - alpha - delta;
    let residual = &b0 - sigma.matrix().scale(c);
    let (rv, _) = hermitian_eigen(&residual);
    if let Some(&low) = rv.first() {
        if low < -1e-9 {
            return Err(Error::Decomposition(format!("accepted part minus the ideal weight has eigenvalue {low:.3e}")));
        }
    }
    let eta = (alpha > 0.0).then(|| DensityOperator::from_matrix_unchecked(b1.unscale(alpha)));
    let eta_error = (delta > 0.0).then(|| DensityOperator::from_matrix_unchecked(residual.unscale(delta)));
    let mut rebuilt = with_flag(&sigma.matrix().scale(ideal_weight), 0);
    if let Some(e) = &eta {
        rebuilt += with_flag(&e.matrix().scale(alpha), 1);
    }
    if let Some(e) = &eta_error {
        rebuilt += with_flag(&e.matrix().scale(delta), 0);
    }
    let reconstruction_error = trace_norm(&(m - rebuilt));
    Ok(FlaggedOutputDecomposition {
        alpha,
        delta,
        ideal_weight,
        eta,
        eta_error,
        ideal_branch: sigma.clone(),
        reconstruction_error,
    })
}
