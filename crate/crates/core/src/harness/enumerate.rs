//! Exhaustive enumeration of small instances.

use thiserror::Error;

use crate::cnf::{Instance, Literal};

/// Largest `max_n` accepted by [`enumerate_small`].
pub const ENUMERATION_MAX_VARS: u32 = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EnumerateError {
    #[error("enumeration is limited to {max} variables, asked for {requested}")]
    TooManyVariables { max: u32, requested: u32 },
}

/// Every set of at most `max_m` distinct clauses over the literals of
/// variables `1..=max_n`, exactly once.
///
/// Clauses are literal triples in ascending code order, tautological ones
/// included. Instances come out by size, then lexicographically by clause
/// index. Each instance declares the highest variable it mentions.
pub fn enumerate_small(
    max_n: u32,
    max_m: usize,
) -> Result<impl Iterator<Item = Instance>, EnumerateError> {
    if max_n > ENUMERATION_MAX_VARS {
        return Err(EnumerateError::TooManyVariables {
            max: ENUMERATION_MAX_VARS,
            requested: max_n,
        });
    }
    let triples = all_triples(max_n);
    let max_m = max_m.min(triples.len());
    Ok(Combinations::new(triples.len(), max_m).map(move |picked| {
        let chosen: Vec<[Literal; 3]> = picked.iter().map(|&i| triples[i]).collect();
        let n = chosen
            .iter()
            .flatten()
            .map(|l| l.var().id())
            .max()
            .unwrap_or(0);
        Instance::new(n, chosen).expect("distinct in-range triples")
    }))
}

/// `sum_{k <= max_m} C(C(2 * max_n, 3), k)`.
pub fn enumeration_count(max_n: u32, max_m: usize) -> u64 {
    let t = binomial(2 * max_n as u64, 3);
    (0..=max_m as u64).map(|k| binomial(t, k)).sum()
}

fn binomial(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn all_triples(max_n: u32) -> Vec<[Literal; 3]> {
    let l = 2 * max_n as usize;
    let mut out = Vec::new();
    for a in 0..l {
        for b in a + 1..l {
            for c in b + 1..l {
                out.push([a, b, c].map(Literal::from_code));
            }
        }
    }
    out
}

/// All k-subsets of `0..n` for `k = 0..=max_k`, by size then lexicographic.
struct Combinations {
    n: usize,
    max_k: usize,
    current: Option<Vec<usize>>,
}

impl Combinations {
    fn new(n: usize, max_k: usize) -> Self {
        Combinations {
            n,
            max_k,
            current: Some(Vec::new()),
        }
    }

    fn advance(&self, cur: &[usize]) -> Option<Vec<usize>> {
        let k = cur.len();
        let mut next = cur.to_vec();
        for i in (0..k).rev() {
            if next[i] < self.n - (k - i) {
                next[i] += 1;
                for j in i + 1..k {
                    next[j] = next[j - 1] + 1;
                }
                return Some(next);
            }
        }
        (k < self.max_k && k < self.n).then(|| (0..=k).collect())
    }
}

impl Iterator for Combinations {
    type Item = Vec<usize>;

    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.current.take()?;
        self.current = self.advance(&cur);
        Some(cur)
    }
}
