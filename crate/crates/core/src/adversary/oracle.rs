use crate::error::{Error, Result};
use crate::protocol::{PermutationTag, Role};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pauli {
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 3] = [Pauli::X, Pauli::Y, Pauli::Z];

    /// Flips the outcome of a Z test (a |0⟩ trap).
    pub fn flips_z_test(self) -> bool {
        matches!(self, Pauli::X | Pauli::Y)
    }

    /// Flips the outcome of an X test (a |+⟩ trap).
    pub fn flips_x_test(self) -> bool {
        matches!(self, Pauli::Z | Pauli::Y)
    }

    /// (x, z) bits with P ∝ X^x Z^z.
    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }
}

/// Pauli attack on the Phase-2 positions: `paulis[i]` on `sites[i]`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PauliAttack {
    pub sites: Vec<usize>,
    pub paulis: Vec<Pauli>,
}

impl PauliAttack {
    pub fn new(sites: Vec<usize>, paulis: Vec<Pauli>) -> Result<Self> {
        let a = Self { sites, paulis };
        a.check_shape()?;
        Ok(a)
    }

    pub fn empty() -> Self {
        Self::default()
    }

    pub fn single(site: usize, p: Pauli) -> Self {
        Self { sites: vec![site], paulis: vec![p] }
    }

    fn check_shape(&self) -> Result<()> {
        if self.sites.len() != self.paulis.len() {
            return Err(Error::Attack("one Pauli per site required".into()));
        }
        if self.sites.iter().collect::<BTreeSet<_>>().len() != self.sites.len() {
            return Err(Error::Attack("attack lists a site twice".into()));
        }
        Ok(())
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        self.check_shape()?;
        if let Some(s) = self.sites.iter().find(|&&s| s >= n) {
            return Err(Error::Attack(format!("site {s} outside 0..{n}")));
        }
        Ok(())
    }

    pub fn support(&self) -> usize {
        self.sites.len()
    }

    /// Every attack with exactly `k` sites among `n` positions.
    pub fn all_with_support(n: usize, k: usize) -> Vec<PauliAttack> {
        let mut out = Vec::new();
        let mut sites = Vec::with_capacity(k);
        fn rec(n: usize, k: usize, start: usize, sites: &mut Vec<usize>, out: &mut Vec<PauliAttack>) {
            if sites.len() == k {
                let mut paulis = vec![Pauli::X; k];
                loop {
                    out.push(PauliAttack { sites: sites.clone(), paulis: paulis.clone() });
                    let mut i = 0;
                    while i < k {
                        let next = Pauli::ALL.iter().position(|&p| p == paulis[i]).unwrap() + 1;
                        if next < 3 {
                            paulis[i] = Pauli::ALL[next];
                            break;
                        }
                        paulis[i] = Pauli::X;
                        i += 1;
                    }
                    if i == k {
                        return;
                    }
                }
            }
            for s in start..n {
                sites.push(s);
                rec(n, k, s + 1, sites, out);
                sites.pop();
            }
        }
        rec(n, k, 0, &mut sites, &mut out);
        out
    }
}

/// Tier-B code model: the logical value flips once `d` or more of the
/// logical computation qubits are hit.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeConfig {
    pub d: usize,
    /// Indices into the computation qubits (resource order) carrying the logical qubit.
    pub logical_map: Vec<usize>,
}

impl CodeConfig {
    pub fn new(d: usize, logical_map: Vec<usize>) -> Result<Self> {
        if d == 0 || d % 2 == 0 {
            return Err(Error::Config(format!("code distance {d} must be odd and positive")));
        }
        if logical_map.len() < d {
            return Err(Error::Config(format!(
                "distance {d} needs at least {d} logical positions, got {}",
                logical_map.len()
            )));
        }
        if logical_map.iter().collect::<BTreeSet<_>>().len() != logical_map.len() {
            return Err(Error::Config("logical map repeats a position".into()));
        }
        Ok(Self { d, logical_map })
    }

    /// Distance `d` over all N/3 computation qubits.
    pub fn standard(n: usize, d: usize) -> Result<Self> {
        Self::new(d, (0..n / 3).collect())
    }

    /// No code: one computation qubit carries the logical value.
    pub fn uncoded() -> Self {
        Self { d: 1, logical_map: vec![0] }
    }

    pub fn check(&self, n: usize) -> Result<()> {
        if let Some(&i) = self.logical_map.iter().find(|&&i| i >= n / 3) {
            return Err(Error::Config(format!("logical position {i} beyond the {} computation qubits", n / 3)));
        }
        Ok(())
    }
}

/// (2/3)^(d/3).
pub fn verification_bound(d: usize) -> f64 {
    (2.0f64 / 3.0).powf(d as f64 / 3.0)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AttackOutcome {
    pub logical_flipped: bool,
    pub any_trap_flagged: bool,
}

impl AttackOutcome {
    pub fn undetected_error(&self) -> bool {
        self.logical_flipped && !self.any_trap_flagged
    }
}

/// Pauli-level outcome of `attack` for one role labelling.
pub fn attack_outcome(roles: &[Role], code: &CodeConfig, attack: &PauliAttack) -> AttackOutcome {
    let mut comp_index = vec![usize::MAX; roles.len()];
    let mut c = 0;
    for (j, r) in roles.iter().enumerate() {
        if *r == Role::Computation {
            comp_index[j] = c;
            c += 1;
        }
    }
    let mut hits = 0;
    let mut flagged = false;
    for (&s, &p) in attack.sites.iter().zip(&attack.paulis) {
        match roles[s] {
            Role::Computation => {
                if code.logical_map.contains(&comp_index[s]) {
                    hits += 1;
                }
            }
            Role::TrapPlus => flagged |= p.flips_x_test(),
            Role::TrapZero => flagged |= p.flips_z_test(),
        }
    }
    AttackOutcome { logical_flipped: hits >= code.d, any_trap_flagged: flagged }
}

/// An exact probability `numerator / denominator`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExactProbability {
    pub numerator: u128,
    pub denominator: u128,
}

impl ExactProbability {
    pub fn value(&self) -> f64 {
        self.numerator as f64 / self.denominator as f64
    }

    /// `self ≤ (2/3)^(d/3)`, decided exactly: p³ ≤ (2/3)^d ⇔ 3^d·n³ ≤ 2^d·D³.
    pub fn within_bound(&self, d: usize) -> bool {
        use num_bigint::BigUint;
        let n = BigUint::from(self.numerator);
        let den = BigUint::from(self.denominator);
        let lhs = BigUint::from(3u32).pow(d as u32) * n.pow(3);
        let rhs = BigUint::from(2u32).pow(d as u32) * den.pow(3);
        lhs <= rhs
    }
}

pub const MAX_BRUTEFORCE_N: usize = 12;

fn check_inputs(n: usize, code: &CodeConfig, attack: &PauliAttack) -> Result<()> {
    if n == 0 || n % 3 != 0 {
        return Err(Error::Config(format!("N = {n} must be a positive multiple of 3")));
    }
    code.check(n)?;
    attack.validate(n)
}

/// Exact Pr over uniform labellings of {logical flipped ∧ no trap flagged}.
pub fn undetected_error_prob_bruteforce(n: usize, code: &CodeConfig, attack: &PauliAttack) -> Result<ExactProbability> {
    check_inputs(n, code, attack)?;
    if n > MAX_BRUTEFORCE_N {
        return Err(Error::Config(format!("exhaustive enumeration capped at N = {MAX_BRUTEFORCE_N}")));
    }
    let perms = PermutationTag::enumerate(n)?;
    undetected_error_prob_over(&perms, code, attack)
}

/// Same count restricted to the given labellings (diagnostic mode when a
/// single labelling is known to the adversary).
pub fn undetected_error_prob_over(perms: &[PermutationTag], code: &CodeConfig, attack: &PauliAttack) -> Result<ExactProbability> {
    let hits = perms.iter().filter(|p| attack_outcome(&p.roles(), code, attack).undetected_error()).count();
    Ok(ExactProbability { numerator: hits as u128, denominator: perms.len() as u128 })
}

/// Exact Pr that at least one trap fires.
pub fn trap_flag_prob_bruteforce(n: usize, attack: &PauliAttack) -> Result<ExactProbability> {
    let code = CodeConfig::uncoded();
    check_inputs(n, &code, attack)?;
    let perms = PermutationTag::enumerate(n)?;
    let hits = perms.iter().filter(|p| attack_outcome(&p.roles(), &code, attack).any_trap_flagged).count();
    Ok(ExactProbability { numerator: hits as u128, denominator: perms.len() as u128 })
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MonteCarloEstimate {
    pub estimate: f64,
    pub stderr: f64,
    pub trials: u64,
}

pub const MC_CHUNK: u64 = 4096;

/// Estimates for several attacks from the same stream of sampled labellings.
/// Trials are split into fixed chunks with their own generator streams, so
/// the result does not depend on how many threads run them.
pub fn undetected_error_prob_montecarlo_many(
    n: usize,
    code: &CodeConfig,
    attacks: &[PauliAttack],
    trials: u64,
    seed: u64,
) -> Result<Vec<MonteCarloEstimate>> {
    if trials < 1000 {
        return Err(Error::Config(format!("at least 1000 trials required, got {trials}")));
    }
    for a in attacks {
        check_inputs(n, code, a)?;
    }
    let chunks = trials.div_ceil(MC_CHUNK);
    let counts: Vec<Vec<u64>> = (0..chunks)
        .into_par_iter()
        .map(|c| -> Result<Vec<u64>> {
            let mut rng = ChaCha20Rng::seed_from_u64(seed);
            rng.set_stream(c);
            let len = MC_CHUNK.min(trials - c * MC_CHUNK);
            let mut hits = vec![0u64; attacks.len()];
            for _ in 0..len {
                let roles = PermutationTag::sample(n, &mut rng)?.roles();
                for (h, a) in hits.iter_mut().zip(attacks) {
                    *h += u64::from(attack_outcome(&roles, code, a).undetected_error());
                }
            }
            Ok(hits)
        })
        .collect::<Result<_>>()?;
    let mut totals = vec![0u64; attacks.len()];
    for chunk in &counts {
        for (t, h) in totals.iter_mut().zip(chunk) {
            *t += h;
        }
    }
    Ok(totals
        .into_iter()
        .map(|h| {
            let p = h as f64 / trials as f64;
            MonteCarloEstimate { estimate: p, stderr: (p * (1.0 - p) / trials as f64).sqrt(), trials }
        })
        .collect())
}

pub fn undetected_error_prob_montecarlo(
    n: usize,
    code: &CodeConfig,
    attack: &PauliAttack,
    trials: u64,
    seed: u64,
) -> Result<MonteCarloEstimate> {
    Ok(undetected_error_prob_montecarlo_many(n, code, std::slice::from_ref(attack), trials, seed)?[0])
}
