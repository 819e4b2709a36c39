//! Seeded random instance generation.

use std::collections::HashSet;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Instance, Literal, Variable};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum GenModel {
    /// Three distinct variables per clause, fair polarities, no repeated
    /// clauses.
    #[default]
    Uniform3Sat,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct GenSpec {
    pub n: u32,
    pub m: usize,
    pub seed: u64,
    #[serde(default)]
    pub model: GenModel,
}

impl GenSpec {
    pub fn new(n: u32, m: usize, seed: u64) -> Self {
        GenSpec {
            n,
            m,
            seed,
            model: GenModel::Uniform3Sat,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("need at least 3 variables, got {n}")]
    TooFewVariables { n: u32 },
    #[error("{m} distinct clauses requested but only {capacity} exist over {n} variables")]
    OverCapacity { n: u32, m: usize, capacity: u64 },
}

/// Number of distinct clauses on three distinct variables: `8 * C(n, 3)`.
pub fn capacity(n: u32) -> u64 {
    let n = n as u64;
    if n < 3 {
        return 0;
    }
    8 * (n * (n - 1) * (n - 2) / 6)
}

pub fn gen_random(spec: &GenSpec) -> Result<Instance, GenError> {
    let GenSpec {
        n,
        m,
        seed,
        model: GenModel::Uniform3Sat,
    } = *spec;
    if n < 3 {
        return Err(GenError::TooFewVariables { n });
    }
    let cap = capacity(n);
    if m as u64 > cap {
        return Err(GenError::OverCapacity {
            n,
            m,
            capacity: cap,
        });
    }

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m);
    let mut triples = Vec::with_capacity(m);
    while triples.len() < m {
        let vars = sample(&mut rng, n as usize, 3);
        let triple: [Literal; 3] = [0, 1, 2]
            .map(|i| Literal::new(Variable::new(vars.index(i) as u32 + 1), rng.gen::<bool>()));
        let mut key = triple;
        key.sort_unstable();
        if seen.insert(key) {
            triples.push(triple);
        }
    }
    Ok(Instance::new(n, triples).expect("generated literals are in range and distinct"))
}

/// SplitMix64 step, used to derive independent per-instance seeds.
pub(crate) fn mix_seed(seed: u64, index: u64) -> u64 {
    let mut z = seed.wrapping_add(index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15));
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// `count` specs cycling through every `(n, ratio)` pair, `m = round(ratio * n)`
/// clamped to capacity, each with its own derived seed.
pub fn fuzz_specs(vars: &[u32], ratios: &[f64], count: usize, seed: u64) -> Vec<GenSpec> {
    let pairs: Vec<(u32, f64)> = vars
        .iter()
        .flat_map(|&n| ratios.iter().map(move |&r| (n, r)))
        .collect();
    if pairs.is_empty() {
        return Vec::new();
    }
    (0..count)
        .map(|i| {
            let (n, ratio) = pairs[i % pairs.len()];
            let m = ((ratio * n as f64).round() as u64).min(capacity(n)) as usize;
            GenSpec::new(n, m, mix_seed(seed, i as u64))
        })
        .collect()
}
