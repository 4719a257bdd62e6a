use crate::error::{Error, Result};
use crate::linalg::{gates, StateVector, C64};
use crate::mbqc::Basis;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF, Normal};

pub const MIN_TRIALS: u64 = 10_000;
/// Cells with a smaller expected count are merged before testing.
pub const MIN_EXPECTED: f64 = 5.0;

/// Where the outcomes come from.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Backend {
    /// Born-rule sampling of the shared state.
    Quantum,
    /// Quantum sampling, except that with probability `strength` Bob's
    /// outcome is overwritten by the parity of Alice's setting index.
    PlantedSignaling { strength: f64 },
}

/// Counts `tables[y][x][b]` and one homogeneity p-value per Bob setting.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoSignalingResult {
    pub tables: Vec<Vec<[u64; 2]>>,
    pub p_values: Vec<f64>,
}

impl NoSignalingResult {
    pub fn rejects(&self, level: f64) -> bool {
        self.p_values.iter().any(|&p| p < level)
    }
}

fn outcome_ket(basis: &Basis, o: u8) -> [C64; 2] {
    match basis {
        Basis::Z => gates::z_ket(o),
        b => gates::xy_ket(b.angle().expect("X and XY bases have angles"), o),
    }
}

/// P(a, b | x, y) for a two-qubit state, Alice on the first qubit.
pub fn joint_probabilities(state: &StateVector, x: &Basis, y: &Basis) -> Result<[f64; 4]> {
    if state.n_qubits() != 2 {
        return Err(Error::DimensionMismatch(format!("a shared pair has 2 qubits, got {}", state.n_qubits())));
    }
    let amps = state.amplitudes();
    let mut p = [0.0; 4];
    for a in 0..2u8 {
        for b in 0..2u8 {
            let ka = outcome_ket(x, a);
            let kb = outcome_ket(y, b);
            let mut amp = C64::new(0.0, 0.0);
            for i in 0..2 {
                for j in 0..2 {
                    amp += (ka[i] * kb[j]).conj() * amps[2 * i + j];
                }
            }
            p[(2 * a + b) as usize] = amp.norm_sqr();
        }
    }
    Ok(p)
}

/// Pearson homogeneity test of the rows of `table` (rows: Alice's setting,
/// columns: Bob's outcome). Sparse columns are pooled into their neighbour
/// and empty rows dropped; with nothing left to compare the p-value is 1.
pub fn homogeneity_p_value(table: &[[u64; 2]]) -> f64 {
    let rows: Vec<[f64; 2]> =
        table.iter().filter(|r| r[0] + r[1] > 0).map(|r| [r[0] as f64, r[1] as f64]).collect();
    if rows.len() < 2 {
        return 1.0;
    }
    let total: f64 = rows.iter().map(|r| r[0] + r[1]).sum();
    let col = [rows.iter().map(|r| r[0]).sum::<f64>(), rows.iter().map(|r| r[1]).sum::<f64>()];
    let min_expected = rows
        .iter()
        .flat_map(|r| col.iter().map(move |c| (r[0] + r[1]) * c / total))
        .fold(f64::INFINITY, f64::min);
    if min_expected < MIN_EXPECTED {
        // two outcome columns pool into one: no contrast left
        return 1.0;
    }
    let mut stat = 0.0;
    for r in &rows {
        for (k, c) in col.iter().enumerate() {
            let e = (r[0] + r[1]) * c / total;
            stat += (r[k] - e).powi(2) / e;
        }
    }
    let df = (rows.len() - 1) as f64;
    let chi = ChiSquared::new(df).expect("positive degrees of freedom");
    1.0 - chi.cdf(stat)
}

/// Samples `trials` rounds with uniformly chosen settings and tests, for
/// each of Bob's settings, whether his outcome distribution depends on
/// Alice's setting.
pub fn nosignaling_test(
    state: &StateVector,
    x_settings: &[Basis],
    y_settings: &[Basis],
    trials: u64,
    seed: u64,
    backend: Backend,
) -> Result<NoSignalingResult> {
    if trials < MIN_TRIALS {
        return Err(Error::Config(format!("no-signaling tests need at least {MIN_TRIALS} trials, got {trials}")));
    }
    if x_settings.len() < 2 || y_settings.is_empty() {
        return Err(Error::Config("need at least two settings for Alice and one for Bob".into()));
    }
    let mut probs = Vec::with_capacity(x_settings.len());
    for x in x_settings {
        probs.push(y_settings.iter().map(|y| joint_probabilities(state, x, y)).collect::<Result<Vec<_>>>()?);
    }
    let mut tables = vec![vec![[0u64; 2]; x_settings.len()]; y_settings.len()];
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let xi = rng.random_range(0..x_settings.len());
        let yi = rng.random_range(0..y_settings.len());
        let p = &probs[xi][yi];
        let mut u: f64 = rng.random();
        let mut k = 3;
        for (i, &pi) in p.iter().enumerate() {
            if u < pi {
                k = i;
                break;
            }
            u -= pi;
        }
        let mut b = k & 1;
        if let Backend::PlantedSignaling { strength } = backend {
            if rng.random::<f64>() < strength {
                b = xi & 1;
            }
        }
        tables[yi][xi][b] += 1;
    }
    let p_values = tables.iter().map(|t| homogeneity_p_value(t)).collect();
    Ok(NoSignalingResult { tables, p_values })
}

/// (|00⟩ + |11⟩)/√2.
pub fn bell_pair() -> StateVector {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    StateVector::from_slice(&[C64::new(h, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(h, 0.0)])
        .expect("normalized")
}

/// Outcome of repeated independent batches.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BatchSummary {
    pub batches: usize,
    pub rejections: usize,
    pub level: f64,
    pub min_p_values: Vec<f64>,
}

/// `batches` independent tests on the Bell pair with X/Z settings on both
/// sides. Batch `i` draws from stream `i` of `seed`, so the summary does
/// not depend on how the batches are spread over threads.
pub fn nosignaling_batches(batches: usize, trials: u64, seed: u64, level: f64, backend: Backend) -> Result<BatchSummary> {
    let settings = [Basis::X, Basis::Z];
    let state = bell_pair();
    let results: Vec<NoSignalingResult> = (0..batches)
        .into_par_iter()
        .map(|i| nosignaling_test(&state, &settings, &settings, trials, batch_seed(seed, i as u64), backend))
        .collect::<Result<_>>()?;
    let min_p_values: Vec<f64> = results.iter().map(|r| r.p_values.iter().copied().fold(1.0, f64::min)).collect();
    let rejections = results.iter().filter(|r| r.rejects(level)).count();
    Ok(BatchSummary { batches, rejections, level, min_p_values })
}

fn batch_seed(seed: u64, batch: u64) -> u64 {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(batch);
    rng.random()
}

/// Probability that one batch of the planted backend is rejected.
///
/// With two settings per side and uniform marginals, overwriting Bob's bit
/// with probability s gives a 2×2 table with φ = s, so each per-setting
/// statistic is noncentral χ²₁ with λ = n s², n = trials / 2; for one degree
/// of freedom that is (Z + √λ)². A batch rejects when either setting does.
pub fn planted_power(strength: f64, trials: u64, level: f64) -> f64 {
    let normal = Normal::standard();
    let z = normal.inverse_cdf(1.0 - level / 2.0);
    let root = (trials as f64 / 2.0 * strength * strength).sqrt();
    let single = normal.cdf(root - z) + normal.cdf(-root - z);
    1.0 - (1.0 - single).powi(2)
}
