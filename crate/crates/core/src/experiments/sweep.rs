use super::{SweepConfig, VERSION};
use crate::adversary::{
    undetected_error_prob_montecarlo_many, undetected_error_prob_over, verification_bound, AdversaryStrategy, CodeConfig,
    ExactProbability, PauliAttack, MAX_BRUTEFORCE_N,
};
use crate::error::{Error, Result};
use crate::protocol::PermutationTag;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub d: usize,
    pub strategy: String,
    pub brute_force_p: f64,
    pub mc_estimate: f64,
    pub mc_stderr: f64,
    pub bound: f64,
}

/// An (N, d) pair for which no code of that distance fits.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Skipped {
    pub n: usize,
    pub d: usize,
    pub reason: String,
}

pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub exact: Vec<ExactProbability>,
    pub skipped: Vec<Skipped>,
    /// Rows whose exact probability exceeds the bound.
    pub violations: usize,
    pub csv: Vec<u8>,
}

fn validate(cfg: &SweepConfig) -> Result<()> {
    for &n in &cfg.n {
        if n == 0 || n % 3 != 0 {
            return Err(Error::Config(format!("N = {n} must be a positive multiple of 3")));
        }
        if n > MAX_BRUTEFORCE_N {
            return Err(Error::Config(format!("N = {n} exceeds the enumeration cap {MAX_BRUTEFORCE_N}")));
        }
        if let Some(&k) = cfg.support.iter().find(|&&k| k == 0 || k > n) {
            return Err(Error::Config(format!("attack support {k} is not within 1..={n}")));
        }
    }
    if cfg.d.iter().any(|&d| d == 0 || d % 2 == 0) {
        return Err(Error::Config(format!("code distances {:?} must be odd", cfg.d)));
    }
    Ok(())
}

/// Every Pauli attack of each listed support at every feasible (N, d):
/// exact probability over all labellings, a Monte Carlo estimate from the
/// same seed, and the bound (2/3)^(d/3).
pub fn cmd_bound_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    validate(cfg)?;
    let mut rows = Vec::new();
    let mut exact = Vec::new();
    let mut skipped = Vec::new();
    for &n in &cfg.n {
        let perms = PermutationTag::enumerate(n)?;
        let attacks: Vec<PauliAttack> = cfg.support.iter().flat_map(|&k| PauliAttack::all_with_support(n, k)).collect();
        for &d in &cfg.d {
            let code = match CodeConfig::standard(n, d) {
                Ok(code) => code,
                Err(Error::Config(reason)) | Err(Error::InvalidState(reason)) => {
                    skipped.push(Skipped { n, d, reason });
                    continue;
                }
                Err(e) => return Err(e),
            };
            if attacks.is_empty() {
                continue;
            }
            let brute: Vec<ExactProbability> =
                attacks.par_iter().map(|a| undetected_error_prob_over(&perms, &code, a)).collect::<Result<_>>()?;
            let mc = undetected_error_prob_montecarlo_many(n, &code, &attacks, cfg.trials, cfg.seed)?;
            for ((a, p), m) in attacks.iter().zip(brute).zip(mc) {
                rows.push(SweepRow {
                    n,
                    d,
                    strategy: AdversaryStrategy::pauli(a).description,
                    brute_force_p: p.value(),
                    mc_estimate: m.estimate,
                    mc_stderr: m.stderr,
                    bound: verification_bound(d),
                });
                exact.push(p);
            }
        }
    }
    let violations = rows.iter().zip(&exact).filter(|(r, p)| !p.within_bound(r.d)).count();

    let mut csv = format!("# {VERSION} config_hash={}\n", cfg.hash()).into_bytes();
    for s in &skipped {
        csv.extend(format!("# skipped N={} d={}: {}\n", s.n, s.d, s.reason).bytes());
    }
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(csv);
    w.write_record(["N", "d", "strategy", "brute_force_p", "mc_estimate", "mc_stderr", "bound"])?;
    for r in &rows {
        w.serialize(r)?;
    }
    let csv = w.into_inner().map_err(|e| Error::Io(e.into_error()))?;
    Ok(SweepOutcome { rows, exact, skipped, violations, csv })
}
