use crate::error::{Error, Result};
use rand::Rng;
use serde::{Deserialize, Serialize};

/// What a position of the Phase-2 register holds.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Computation,
    /// |+⟩ trap, tested with X.
    TrapPlus,
    /// |0⟩ trap, tested with Z.
    TrapZero,
}

/// Alice's secret placement of the resource qubits and traps.
///
/// Canonical qubit `i` of |g⟩ ⊗ |+⟩^{⊗m} ⊗ |0⟩^{⊗m} (m = N/3) is sent at
/// position `perm[i]`. Computation qubits keep their relative order.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PermutationTag {
    perm: Vec<usize>,
}

fn third(n: usize) -> Result<usize> {
    if n == 0 || n % 3 != 0 {
        return Err(Error::Permutation(format!("N = {n} is not a positive multiple of 3")));
    }
    Ok(n / 3)
}

impl PermutationTag {
    pub fn new(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let m = third(n)?;
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(Error::Permutation(format!("{perm:?} is not a permutation of 0..{n}")));
            }
            seen[p] = true;
        }
        if perm[..m].windows(2).any(|w| w[0] > w[1]) {
            return Err(Error::Permutation(format!(
                "computation positions {:?} are not in increasing order",
                &perm[..m]
            )));
        }
        Ok(Self { perm })
    }

    pub fn identity(n: usize) -> Result<Self> {
        Self::new((0..n).collect())
    }

    /// Builds the canonical permutation for a role labelling.
    pub fn from_roles(roles: &[Role]) -> Result<Self> {
        let n = roles.len();
        let m = third(n)?;
        let mut perm = Vec::with_capacity(n);
        for r in [Role::Computation, Role::TrapPlus, Role::TrapZero] {
            let group: Vec<usize> = (0..n).filter(|&j| roles[j] == r).collect();
            if group.len() != m {
                return Err(Error::Permutation(format!("{} positions labelled {r:?}, expected {m}", group.len())));
            }
            perm.extend(group);
        }
        Self::new(perm)
    }

    /// Uniform over role labellings, by sequential weighted assignment.
    pub fn sample<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let m = third(n)?;
        let mut left = [m, m, m];
        let roles = [Role::Computation, Role::TrapPlus, Role::TrapZero];
        let mut out = Vec::with_capacity(n);
        for j in 0..n {
            let mut pick = rng.random_range(0..(n - j));
            for (k, cnt) in left.iter_mut().enumerate() {
                if pick < *cnt {
                    *cnt -= 1;
                    out.push(roles[k]);
                    break;
                }
                pick -= *cnt;
            }
        }
        Self::from_roles(&out)
    }

    /// Every valid labelling, in lexicographic role order.
    pub fn enumerate(n: usize) -> Result<Vec<Self>> {
        let m = third(n)?;
        let mut out = Vec::new();
        let mut current = Vec::with_capacity(n);
        fn rec(left: &mut [usize; 3], current: &mut Vec<Role>, out: &mut Vec<Vec<Role>>) {
            if left.iter().all(|&c| c == 0) {
                out.push(current.clone());
                return;
            }
            for (k, r) in [Role::Computation, Role::TrapPlus, Role::TrapZero].into_iter().enumerate() {
                if left[k] > 0 {
                    left[k] -= 1;
                    current.push(r);
                    rec(left, current, out);
                    current.pop();
                    left[k] += 1;
                }
            }
        }
        let mut labellings = Vec::new();
        rec(&mut [m, m, m], &mut current, &mut labellings);
        for roles in labellings {
            out.push(Self::from_roles(&roles)?);
        }
        Ok(out)
    }

    /// Number of valid labellings, N! / ((N/3)!)^3.
    pub fn count(n: usize) -> Result<u128> {
        let m = third(n)? as u128;
        let fact = |k: u128| (1..=k).product::<u128>();
        Ok(fact(n as u128) / (fact(m) * fact(m) * fact(m)))
    }

    pub fn n(&self) -> usize {
        self.perm.len()
    }

    pub fn m(&self) -> usize {
        self.perm.len() / 3
    }

    /// Canonical index → position.
    pub fn permutation(&self) -> &[usize] {
        &self.perm
    }

    /// Position → canonical index.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.n()];
        for (i, &p) in self.perm.iter().enumerate() {
            inv[p] = i;
        }
        inv
    }

    pub fn role(&self, position: usize) -> Role {
        let i = self.inverse()[position];
        match i / self.m() {
            0 => Role::Computation,
            1 => Role::TrapPlus,
            _ => Role::TrapZero,
        }
    }

    pub fn roles(&self) -> Vec<Role> {
        (0..self.n()).map(|j| self.role(j)).collect()
    }

    /// Positions of the computation qubits, in resource order.
    pub fn computation_positions(&self) -> &[usize] {
        &self.perm[..self.m()]
    }
}
