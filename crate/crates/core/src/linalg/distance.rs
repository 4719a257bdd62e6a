use super::{hermitian_eigen, hermiticity_error, CMatrix, DensityOperator, KrausChannel, C64};
use crate::error::{Error, Result};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DistanceMethod {
    ExactState,
    ChoiBound,
    EntangledProbeSearch,
}

/// A trace-norm distance in both conventions: the raw norm (2 for orthogonal
/// pure states) and its half.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceReport {
    pub half_trace_distance: f64,
    pub raw_trace_norm: f64,
    pub method: DistanceMethod,
}

impl DistanceReport {
    pub fn from_raw(raw: f64, method: DistanceMethod) -> Self {
        Self { half_trace_distance: raw / 2.0, raw_trace_norm: raw, method }
    }

    pub fn zero(method: DistanceMethod) -> Self {
        Self::from_raw(0.0, method)
    }
}

/// Sum of singular values.
pub fn trace_norm(m: &CMatrix) -> f64 {
    if m.is_square() && hermiticity_error(m) <= 1e-13 * (1.0 + m.norm()) {
        let (vals, _) = hermitian_eigen(m);
        vals.iter().map(|v| v.abs()).sum()
    } else {
        m.clone().svd(false, false).singular_values.iter().sum()
    }
}

pub fn trace_norm_distance(a: &DensityOperator, b: &DensityOperator) -> Result<DistanceReport> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch(format!("{} vs {}", a.dim(), b.dim())));
    }
    Ok(DistanceReport::from_raw(trace_norm(&(a.matrix() - b.matrix())), DistanceMethod::ExactState))
}

/// Knobs for the pure-probe ascent in [`channel_distance`].
#[derive(Clone, Debug)]
pub struct SearchConfig {
    pub restarts: usize,
    pub max_iters: usize,
    pub seed: u64,
    /// Largest probe⊗input dimension the ascent will handle; beyond it only
    /// the entangled-probe bound is reported.
    pub max_search_dim: usize,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self { restarts: 6, max_iters: 60, seed: 0x5eed_d157, max_search_dim: 256 }
    }
}

/// Result of comparing two channels with a reference system attached.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ChannelDistance {
    /// Value on the maximally entangled probe: a certified lower bound.
    pub entangled_probe: DistanceReport,
    /// Best value found; never below `entangled_probe`.
    pub estimate: DistanceReport,
}

impl ChannelDistance {
    pub fn half(&self) -> f64 {
        self.estimate.half_trace_distance
    }
}

/// Output (I⊗Φ)(|ψ⟩⟨ψ|) for a probe written as a `probe × dim_in` coefficient matrix.
fn probe_output(ch: &KrausChannel, psi: &CMatrix) -> CMatrix {
    let p = psi.nrows();
    let d_o = ch.dim_out();
    let mut out = CMatrix::zeros(p * d_o, p * d_o);
    for k in ch.kraus() {
        let w = psi * k.transpose();
        let v = nalgebra::DVector::<C64>::from_iterator(p * d_o, (0..p).flat_map(|a| (0..d_o).map(move |o| (a, o))).map(|(a, o)| w[(a, o)]));
        out += &v * v.adjoint();
    }
    out
}

fn probe_difference(ch1: &KrausChannel, ch2: &KrausChannel, psi: &CMatrix) -> CMatrix {
    probe_output(ch1, psi) - probe_output(ch2, psi)
}

/// Dual action Σ (I⊗K)† M (I⊗K) on the probe⊗input space.
fn dual(ch: &KrausChannel, m: &CMatrix, probe: usize) -> CMatrix {
    let ip = CMatrix::identity(probe, probe);
    let dim = probe * ch.dim_in();
    let mut out = CMatrix::zeros(dim, dim);
    for k in ch.kraus() {
        let big = ip.kronecker(k);
        out += big.adjoint() * m * &big;
    }
    out
}

fn sign_operator(delta: &CMatrix) -> CMatrix {
    let (vals, vecs) = hermitian_eigen(delta);
    let mut m = CMatrix::zeros(delta.nrows(), delta.ncols());
    for (j, &v) in vals.iter().enumerate() {
        if v.abs() < 1e-15 {
            continue;
        }
        let col = vecs.column(j);
        m += (&col * col.adjoint()).scale(v.signum());
    }
    m
}

fn vector_to_probe(v: &nalgebra::DVector<C64>, probe: usize, dim_in: usize) -> CMatrix {
    CMatrix::from_fn(probe, dim_in, |a, i| v[a * dim_in + i])
}

/// Half trace distance between the normalized Choi states. Zero exactly when
/// the channels are equal.
pub fn choi_distance(ch1: &KrausChannel, ch2: &KrausChannel) -> Result<f64> {
    if ch1.dim_in() != ch2.dim_in() || ch1.dim_out() != ch2.dim_out() {
        return Err(Error::DimensionMismatch("channels have different shapes".into()));
    }
    Ok(trace_norm(&(ch1.choi() - ch2.choi())) / (2.0 * ch1.dim_in() as f64))
}

/// Distance between two channels with a `probe_dim`-dimensional reference.
///
/// The maximally entangled probe gives a lower bound; a see-saw ascent over
/// pure probe states then tightens it. Each ascent step fixes the optimal
/// measurement for the current probe and replaces the probe by the top
/// eigenvector of the dual objective, so the value never decreases.
pub fn channel_distance(ch1: &KrausChannel, ch2: &KrausChannel, probe_dim: usize) -> Result<ChannelDistance> {
    channel_distance_with(ch1, ch2, probe_dim, &SearchConfig::default())
}

pub fn channel_distance_with(
    ch1: &KrausChannel,
    ch2: &KrausChannel,
    probe_dim: usize,
    cfg: &SearchConfig,
) -> Result<ChannelDistance> {
    if ch1.dim_in() != ch2.dim_in() || ch1.dim_out() != ch2.dim_out() {
        return Err(Error::DimensionMismatch(format!(
            "channels {}->{} vs {}->{}",
            ch1.dim_in(),
            ch1.dim_out(),
            ch2.dim_in(),
            ch2.dim_out()
        )));
    }
    if probe_dim == 0 {
        return Err(Error::DimensionMismatch("probe dimension must be at least 1".into()));
    }
    let din = ch1.dim_in();
    let rank = probe_dim.min(din);
    let mut entangled = CMatrix::zeros(probe_dim, din);
    for i in 0..rank {
        entangled[(i, i)] = C64::new(1.0 / (rank as f64).sqrt(), 0.0);
    }
    let bound = trace_norm(&probe_difference(ch1, ch2, &entangled));
    let entangled_probe = DistanceReport::from_raw(bound, DistanceMethod::ChoiBound);

    if probe_dim * din > cfg.max_search_dim || bound == 0.0 && identical(ch1, ch2) {
        return Ok(ChannelDistance { entangled_probe, estimate: entangled_probe });
    }

    let mut rng = ChaCha20Rng::seed_from_u64(cfg.seed);
    let mut best = bound;
    for restart in 0..=cfg.restarts {
        let mut psi = if restart == 0 {
            entangled.clone()
        } else {
            let m = CMatrix::from_fn(probe_dim, din, |_, _| {
                C64::new(StandardNormal.sample(&mut rng), StandardNormal.sample(&mut rng))
            });
            let n = m.norm();
            m.unscale(n)
        };
        let mut value = trace_norm(&probe_difference(ch1, ch2, &psi));
        for _ in 0..cfg.max_iters {
            let delta = probe_difference(ch1, ch2, &psi);
            let m = sign_operator(&delta);
            let a = dual(ch1, &m, probe_dim) - dual(ch2, &m, probe_dim);
            let (vals, vecs) = hermitian_eigen(&a);
            let top = vals
                .iter()
                .enumerate()
                .max_by(|x, y| x.1.total_cmp(y.1))
                .map(|(i, _)| i)
                .unwrap_or(0);
            let next = vector_to_probe(&vecs.column(top).into_owned(), probe_dim, din);
            let next_value = trace_norm(&probe_difference(ch1, ch2, &next));
            if next_value <= value + 1e-13 {
                if next_value > value {
                    value = next_value;
                }
                break;
            }
            value = next_value;
            psi = next;
        }
        best = best.max(value);
    }
    Ok(ChannelDistance {
        entangled_probe,
        estimate: DistanceReport::from_raw(best, DistanceMethod::EntangledProbeSearch),
    })
}

fn identical(a: &KrausChannel, b: &KrausChannel) -> bool {
    a.kraus().len() == b.kraus().len() && a.kraus().iter().zip(b.kraus()).all(|(x, y)| x == y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::gates::{self, ONE, PLUS, ZERO};
    use crate::linalg::{cr, StateVector};

    #[test]
    fn orthogonal_states_have_raw_norm_two() {
        let a = StateVector::product(&[ZERO]).unwrap().to_density();
        let b = StateVector::product(&[ONE]).unwrap().to_density();
        let d = trace_norm_distance(&a, &b).unwrap();
        assert!((d.raw_trace_norm - 2.0).abs() < 1e-14);
        assert!((d.half_trace_distance - 1.0).abs() < 1e-14);
    }

    #[test]
    fn self_distance_is_zero() {
        let a = StateVector::plus(2).to_density();
        assert_eq!(trace_norm_distance(&a, &a).unwrap().raw_trace_norm, 0.0);
    }

    #[test]
    fn zero_vs_plus() {
        // Oracle: |0⟩⟨0| - |+⟩⟨+| = [[1/2, -1/2], [-1/2, -1/2]] has
        // eigenvalues ±1/√2, so the half distance is 1/√2.
        let a = StateVector::product(&[ZERO]).unwrap().to_density();
        let b = StateVector::product(&[PLUS]).unwrap().to_density();
        let diff = a.matrix() - b.matrix();
        let expected = [cr(0.5), cr(-0.5), cr(-0.5), cr(-0.5)];
        for (x, e) in diff.iter().zip(expected) {
            assert!((x - e).norm() < 1e-15);
        }
        let d = trace_norm_distance(&a, &b).unwrap();
        assert!((d.half_trace_distance - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-14);
    }

    #[test]
    fn dimension_mismatch_errors() {
        let a = StateVector::plus(1).to_density();
        let b = StateVector::plus(2).to_density();
        assert!(trace_norm_distance(&a, &b).is_err());
        assert!(channel_distance(&KrausChannel::identity(2), &KrausChannel::identity(4), 2).is_err());
    }

    #[test]
    fn identical_channels_exactly_zero() {
        let ch = KrausChannel::dephasing(2);
        let d = channel_distance(&ch, &ch, 2).unwrap();
        assert_eq!(d.estimate.raw_trace_norm, 0.0);
    }

    #[test]
    fn global_phase_is_invisible() {
        let id = KrausChannel::identity(2);
        let phased = KrausChannel::unitary(CMatrix::identity(2, 2) * C64::from_polar(1.0, 0.7)).unwrap();
        let d = channel_distance(&id, &phased, 2).unwrap();
        assert!(d.estimate.raw_trace_norm < 1e-14);
    }

    #[test]
    fn identity_vs_x_is_maximal() {
        // Oracle: brute-force grid over pure single-qubit product probes plus
        // the Bell probe; the maximum raw trace norm is 2.
        let id = KrausChannel::identity(2);
        let x = KrausChannel::unitary(gates::to_matrix(&gates::X)).unwrap();
        let mut brute: f64 = 0.0;
        for i in 0..=32 {
            for j in 0..=32 {
                let th = std::f64::consts::PI * i as f64 / 32.0;
                let ph = 2.0 * std::f64::consts::PI * j as f64 / 32.0;
                let ket = [cr((th / 2.0).cos()), C64::from_polar((th / 2.0).sin(), ph)];
                let rho = StateVector::product(&[ket]).unwrap().to_density();
                let diff = rho.matrix() - x.apply(&rho).unwrap().matrix();
                brute = brute.max(trace_norm(&diff));
            }
        }
        assert!((brute - 2.0).abs() < 1e-12);
        let d = channel_distance(&id, &x, 2).unwrap();
        assert!((d.estimate.raw_trace_norm - 2.0).abs() < 1e-9);
        assert!(d.estimate.raw_trace_norm >= d.entangled_probe.raw_trace_norm - 1e-15);
    }

    #[test]
    fn search_beats_entangled_probe_when_it_should() {
        // Identity vs amplitude damping: the maximally entangled probe is not optimal.
        let g: f64 = 0.3;
        let k0 = CMatrix::from_row_slice(2, 2, &[cr(1.0), cr(0.0), cr(0.0), cr((1.0 - g).sqrt())]);
        let k1 = CMatrix::from_row_slice(2, 2, &[cr(0.0), cr(g.sqrt()), cr(0.0), cr(0.0)]);
        let ad = KrausChannel::new(vec![k0, k1]).unwrap();
        let d = channel_distance(&KrausChannel::identity(2), &ad, 2).unwrap();
        assert!(d.estimate.raw_trace_norm >= d.entangled_probe.raw_trace_norm);
        assert_eq!(d.estimate.method, DistanceMethod::EntangledProbeSearch);
    }
}
