//! Demonstration-subset plans for ensembled conditioned decoding.
//!
//! With `n` demonstrations and a model conditioned on `k` of them, the plan
//! holds `min(ceil(2n/k), C(n, k))` distinct k-subsets of `0..n`.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubsetError {
    #[error("invalid arguments: need 1 <= k <= n, got n={n}, k={k}")]
    InvalidArgs { n: usize, k: usize },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetPlan {
    pub n: usize,
    pub k: usize,
    pub seed: u64,
    /// Each subset is sorted ascending; subsets are in lexicographic order.
    pub subsets: Vec<Vec<usize>>,
}

impl SubsetPlan {
    pub fn to_text(&self) -> String {
        let mut s = format!("# n={} k={} seed={} subsets={}\n", self.n, self.k, self.seed, self.subsets.len());
        for sub in &self.subsets {
            let idx: Vec<String> = sub.iter().map(usize::to_string).collect();
            let _ = writeln!(s, "{}", idx.join(" "));
        }
        s
    }
}

/// `C(n, k)`, saturating at `u128::MAX`.
pub fn binomial(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k as u128 {
        // acc * (n - i) / (i + 1) stays integral at every step.
        match acc.checked_mul(n as u128 - i) {
            Some(v) => acc = v / (i + 1),
            None => return u128::MAX,
        }
    }
    acc
}

/// Number of subsets a plan for `(n, k)` contains.
pub fn planned_count(n: usize, k: usize) -> usize {
    let requested = (2 * n).div_ceil(k);
    binomial(n, k).min(requested as u128) as usize
}

fn all_subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur: Vec<usize> = (0..k).collect();
    loop {
        out.push(cur.clone());
        // Advance to the next combination in lexicographic order.
        let Some(i) = (0..k).rev().find(|&i| cur[i] < n - k + i) else {
            return out;
        };
        cur[i] += 1;
        for j in i + 1..k {
            cur[j] = cur[j - 1] + 1;
        }
    }
}

pub fn plan_subsets(n: usize, k: usize, seed: u64) -> Result<SubsetPlan, SubsetError> {
    if k == 0 || k > n {
        return Err(SubsetError::InvalidArgs { n, k });
    }
    let requested = (2 * n).div_ceil(k);
    let subsets = if binomial(n, k) <= requested as u128 {
        all_subsets(n, k)
    } else {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut chosen = BTreeSet::new();
        while chosen.len() < requested {
            let mut sub = sample(&mut rng, n, k).into_vec();
            sub.sort_unstable();
            chosen.insert(sub);
        }
        chosen.into_iter().collect()
    };
    Ok(SubsetPlan { n, k, seed, subsets })
}
