//! Acceptance criteria, one pass/fail line each. Runs without the libtest
//! harness so the lines are always printed; exits nonzero if any fails.

use blindsim::adversary::{strategy_library, AdversaryStrategy};
use blindsim::experiments::{
    blindness_suite, cmd_bound_sweep, composition_suite, correctness_suite, execute, nosignaling_suite, security_spec,
    security_suite, with_workers, Command, ExperimentConfig, OneOrMany, Source, Suite, SweepConfig, DEFAULT_BATCHES,
    MAX_REJECTIONS, MIN_POWER,
};
use blindsim::linalg::gates::{self, PLUS};
use blindsim::linalg::{qubit, CMatrix, StateVector};
use blindsim::mbqc::{compile_with_flow, correct_byproduct, run_pattern_forced, Basis, GraphSpec};
use blindsim::protocol::{DeviceBehavior, Variant};
use blindsim::security::{check_decomposition, decompose_strategy, CheckReport};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;
use statrs::distribution::{ContinuousCDF, Normal};
use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

const SEED: u64 = 20_261_016;

struct Line {
    id: u32,
    name: &'static str,
    pass: bool,
    detail: String,
    elapsed: Duration,
}

fn criterion(id: u32, name: &'static str, f: impl FnOnce() -> (bool, String)) -> Line {
    let start = Instant::now();
    let (pass, detail) = match std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)) {
        Ok(r) => r,
        Err(_) => (false, "panicked".into()),
    };
    let line = Line { id, name, pass, detail, elapsed: start.elapsed() };
    println!(
        "criterion {}: {} [{}] {} ({:.1} s)",
        line.id,
        line.name,
        if line.pass { "PASS" } else { "FAIL" },
        line.detail,
        line.elapsed.as_secs_f64()
    );
    line
}

fn worst(reports: &[CheckReport]) -> String {
    reports.iter().map(|r| format!("{}={:.2e}/{:.0e}", r.check, r.measured, r.bound)).collect::<Vec<_>>().join(", ")
}

/// Random XY and Pauli measurements along a 5-vertex chain, every branch
/// against the circuit H·P(−θ) applied step by step.
fn mbqc_engine() -> (bool, String) {
    let mut rng = ChaCha20Rng::seed_from_u64(SEED);
    let graph = GraphSpec::linear(5);
    let flow: BTreeMap<usize, usize> = (0..4).map(|i| (i, i + 1)).collect();
    let mut worst: f64 = 0.0;
    let mut branches = 0;
    for _ in 0..100 {
        let angles: Vec<f64> = (0..4)
            .map(|_| match rng.random_range(0..4) {
                0 => 0.0,
                1 => PI / 2.0,
                _ => rng.random_range(-PI..PI),
            })
            .collect();
        let order: Vec<(usize, Basis)> = angles.iter().enumerate().map(|(i, &t)| (i, Basis::Xy(t))).collect();
        let pattern = compile_with_flow(&graph, &order, &flow, &[4]).expect("chain flow");
        let mut m = CMatrix::from_column_slice(2, 1, &PLUS);
        for &t in &angles {
            qubit::apply_1q(&mut m, 1, 0, &gates::mul(&gates::H, &gates::phase(-t)));
        }
        let expected = StateVector::new(m.column(0).into_owned()).expect("unitary image");
        for b in 0..16u8 {
            let outcomes: Vec<u8> = (0..4).map(|i| (b >> i) & 1).collect();
            let run = run_pattern_forced(&graph, &pattern, &outcomes).expect("every branch has weight");
            let fixed = correct_byproduct(&run.output_state, &run.frame).expect("frame fits");
            worst = worst.max(1.0 - fixed.fidelity(&expected));
            branches += 1;
        }
    }
    (worst <= 1e-9, format!("{branches} branches, worst infidelity {worst:.1e}"))
}

fn correctness() -> (bool, String) {
    let reports = correctness_suite(50, SEED).expect("suite runs");
    let cases: usize = reports.iter().map(|r| r.cases.len()).sum();
    (reports.iter().all(|r| r.pass), format!("{cases} (program, device) cases; {}", worst(&reports)))
}

fn blindness() -> (bool, String) {
    let reports = blindness_suite(50, 20, SEED).expect("suite runs");
    (reports.iter().all(|r| r.pass), worst(&reports))
}

/// Exact bound in every case; Monte Carlo compared per row at 3σ and, since
/// about two thousand correlated rows are compared, also at the family-wise
/// (Bonferroni) level.
fn verification_bound() -> (bool, String) {
    let cfg = SweepConfig { n: vec![3, 6, 9, 12], d: vec![1, 3], support: vec![1, 2], trials: 100_000, seed: SEED };
    let out = cmd_bound_sweep(&cfg).expect("sweep runs");
    let compared: Vec<f64> = out
        .rows
        .iter()
        .filter(|r| r.brute_force_p > 0.0)
        .map(|r| (r.mc_estimate - r.brute_force_p).abs() / r.mc_stderr.max(f64::MIN_POSITIVE))
        .collect();
    let zero_rows_exact = out.rows.iter().filter(|r| r.brute_force_p == 0.0).all(|r| r.mc_estimate == 0.0);
    let outside = compared.iter().filter(|&&z| z > 3.0).count();
    let family_z = Normal::standard().inverse_cdf(1.0 - 0.0027 / (2.0 * compared.len() as f64));
    let max_z = compared.iter().copied().fold(0.0, f64::max);
    let expected_outside = 0.0027 * compared.len() as f64;
    let pass = out.violations == 0 && zero_rows_exact && max_z <= family_z;
    let skipped: Vec<String> = out.skipped.iter().map(|s| format!("N={} d={}", s.n, s.d)).collect();
    (
        pass,
        format!(
            "{} cases, {} over the bound; MC: {outside} of {} rows beyond 3σ (≈{expected_outside:.1} expected by chance), max {max_z:.2}σ vs family-wise {family_z:.2}σ; skipped infeasible {}",
            out.rows.len(),
            out.violations,
            compared.len(),
            skipped.join(", ")
        ),
    )
}

fn security() -> (bool, String) {
    let reports = security_suite(SEED).expect("suite runs");
    let relevant: Vec<CheckReport> = reports.into_iter().filter(|r| r.check != "decomposition").collect();
    (relevant.iter().all(|r| r.pass), worst(&relevant))
}

fn decomposition() -> (bool, String) {
    let mut reports = Vec::new();
    let mut honest_exact = true;
    for n in [3, 6] {
        let spec = security_spec(n, DeviceBehavior::Honest).expect("spec");
        reports.push(check_decomposition(&spec, &strategy_library(n), SEED).expect("decomposes"));
        for p in decompose_strategy(&spec, &AdversaryStrategy::honest(), SEED).expect("decomposes") {
            honest_exact &= p.alpha == 0.0 && p.delta == 0.0;
        }
    }
    (reports.iter().all(|r| r.pass) && honest_exact, format!("honest alpha = delta = 0: {honest_exact}; {}", worst(&reports)))
}

fn composition() -> (bool, String) {
    let reports = composition_suite(200, SEED).expect("suite runs");
    let cases: usize = reports.iter().map(|r| r.cases.len()).sum();
    (reports.iter().all(|r| r.pass), format!("{cases} instances; worst slack {}", worst(&reports)))
}

fn nosignaling() -> (bool, String) {
    let reports = nosignaling_suite(DEFAULT_BATCHES, 100_000, SEED, false).expect("suite runs");
    let rejections = reports[0].measured;
    let power = 1.0 - reports[1].measured;
    (
        reports.iter().all(|r| r.pass),
        format!("{rejections} of {DEFAULT_BATCHES} batches rejected (max {MAX_REJECTIONS}); planted power {power:.2} (min {MIN_POWER})"),
    )
}

fn outputs(workers: usize) -> Vec<Vec<u8>> {
    let bob = Source::Inline(AdversaryStrategy::new(
        blindsim::adversary::StrategyKind::Depolarize { sites: vec![0, 4], p: 0.5 },
        "depolarize",
    ));
    let configs = [
        (Command::Run, ExperimentConfig { variant: Some(Variant::Verify), n: Some(OneOrMany::One(6)), ..Default::default() }),
        (Command::Run, ExperimentConfig { variant: Some(Variant::Verify), n: Some(OneOrMany::One(6)), bob: Some(bob), ..Default::default() }),
        (Command::Run, ExperimentConfig { variant: Some(Variant::Noverify), n: Some(OneOrMany::One(5)), ..Default::default() }),
        (Command::BoundSweep, ExperimentConfig { n: Some(OneOrMany::Many(vec![6, 9])), trials: Some(20_000), ..Default::default() }),
        (Command::Certify, ExperimentConfig { suite: Some(Suite::Correctness), trials: Some(4), ..Default::default() }),
        (Command::Certify, ExperimentConfig { suite: Some(Suite::Composition), trials: Some(10), ..Default::default() }),
        (Command::Certify, ExperimentConfig { suite: Some(Suite::Nosignaling), batches: Some(6), trials: Some(20_000), ..Default::default() }),
    ];
    configs
        .into_iter()
        .map(|(command, mut cfg)| {
            cfg.seed = Some(SEED);
            cfg.workers = Some(workers);
            let mut out = Vec::new();
            execute(command, &cfg, &mut out, &mut std::io::sink()).expect("command runs");
            out
        })
        .collect()
}

fn reproducibility() -> (bool, String) {
    let base = outputs(1);
    let again = outputs(1);
    let wide = outputs(4);
    let same = base == again && base == wide;
    let nested = with_workers(Some(2), || outputs(2)).expect("pool");
    (same && nested == base, format!("{} outputs identical across runs and 1/2/4 workers: {same}", base.len()))
}

fn main() {
    let lines = [
        criterion(1, "MBQC engine matches the circuit on every branch", mbqc_engine),
        criterion(2, "correctness is exact", correctness),
        criterion(3, "device-independent blindness is exact", blindness),
        criterion(4, "verification bound holds exhaustively", verification_bound),
        criterion(5, "security within 2δ, exact for cheating devices", security),
        criterion(6, "flagged-output decomposition", decomposition),
        criterion(7, "serial and parallel composition", composition),
        criterion(8, "no-signaling", nosignaling),
        criterion(9, "byte-identical outputs", reproducibility),
    ];
    let limits = [(1, 10.0), (4, 120.0), (7, 60.0)];
    let mut failed = lines.iter().filter(|l| !l.pass).count();
    for (id, secs) in limits {
        let l = &lines[id - 1];
        let within = l.elapsed.as_secs_f64() < secs;
        println!("criterion {id} runtime: {:.1} s, limit {secs} s [{}]", l.elapsed.as_secs_f64(), if within { "PASS" } else { "FAIL" });
        failed += usize::from(!within);
    }
    println!("acceptance: {} of {} criteria passed", lines.iter().filter(|l| l.pass).count(), lines.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
