use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// One measured quantity against its bound.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub label: String,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
}

impl CaseResult {
    pub fn new(label: impl Into<String>, measured: f64, bound: f64) -> Self {
        Self { label: label.into(), measured, bound, pass: measured <= bound }
    }
}

/// Machine-readable outcome of a certification check. `measured` and
/// `bound` describe the worst case, as a margin when the cases carry
/// different bounds.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub check: String,
    pub config_hash: String,
    pub seed: u64,
    pub measured: f64,
    pub bound: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub cases: Vec<CaseResult>,
}

impl CheckReport {
    /// Folds the cases: if they share one bound the report carries the
    /// largest measurement, otherwise the largest excess `measured - bound`
    /// against a bound of 0.
    pub fn from_cases(check: &str, config_hash: String, seed: u64, cases: Vec<CaseResult>) -> Self {
        let same_bound = cases.windows(2).all(|w| w[0].bound == w[1].bound);
        let (measured, bound) = match (same_bound, cases.first()) {
            (_, None) => (0.0, 0.0),
            (true, Some(first)) => (cases.iter().map(|c| c.measured).fold(f64::NEG_INFINITY, f64::max), first.bound),
            (false, Some(_)) => (cases.iter().map(|c| c.measured - c.bound).fold(f64::NEG_INFINITY, f64::max), 0.0),
        };
        let pass = cases.iter().all(|c| c.pass);
        Self { check: check.into(), config_hash, seed, measured, bound, pass, cases }
    }

    pub fn single(check: &str, config_hash: String, seed: u64, measured: f64, bound: f64) -> Self {
        Self { check: check.into(), config_hash, seed, measured, bound, pass: measured <= bound, cases: vec![] }
    }
}

/// SHA-256 of the canonical JSON encoding.
pub fn config_hash<T: Serialize + ?Sized>(config: &T) -> String {
    let json = serde_json::to_vec(config).expect("configs serialize to JSON");
    hex::encode(Sha256::digest(&json))
}
