//! Operation counts against instance size, and a log-log power-law fit.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::harness::exec::Execution;
use crate::harness::gen::{gen_random, mix_seed, GenError, GenSpec};
use crate::solver::{solve_run, SolveConfig};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ComplexitySample {
    pub m: usize,
    pub n: u32,
    pub ops: u64,
    /// `SAT`, `UNSAT` or `ANOMALY`.
    pub outcome: String,
}

impl ComplexitySample {
    /// Counted in the fit: not an anomaly, and at least one operation.
    pub fn is_successful(&self) -> bool {
        self.outcome != "ANOMALY" && self.ops > 0 && self.m > 0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexityFit {
    /// Slope of `ln(ops)` against `ln(m)`.
    pub exponent: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FitError {
    #[error("need at least 5 successful samples, have {found}")]
    TooFewSamples { found: usize },
    #[error("clause counts span a factor of {ratio:.2}, need at least 4")]
    NarrowRange { ratio: f64 },
}

/// Least squares over the successful samples. With no spread in `ops` the
/// fit is exact and `r_squared` is 1.
pub fn fit_complexity(samples: &[ComplexitySample]) -> Result<ComplexityFit, FitError> {
    let points: Vec<(f64, f64)> = samples
        .iter()
        .filter(|s| s.is_successful())
        .map(|s| ((s.m as f64).ln(), (s.ops as f64).ln()))
        .collect();
    if points.len() < 5 {
        return Err(FitError::TooFewSamples {
            found: points.len(),
        });
    }
    let (lo, hi) = points
        .iter()
        .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), &(x, _)| {
            (lo.min(x), hi.max(x))
        });
    let ratio = (hi - lo).exp();
    if ratio < 4.0 - 1e-9 {
        return Err(FitError::NarrowRange { ratio });
    }

    let k = points.len() as f64;
    let mean_x = points.iter().map(|p| p.0).sum::<f64>() / k;
    let mean_y = points.iter().map(|p| p.1).sum::<f64>() / k;
    let sxx: f64 = points.iter().map(|p| (p.0 - mean_x).powi(2)).sum();
    let sxy: f64 = points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)).sum();
    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;
    let ss_tot: f64 = points.iter().map(|p| (p.1 - mean_y).powi(2)).sum();
    let ss_res: f64 = points
        .iter()
        .map(|p| (p.1 - (intercept + exponent * p.0)).powi(2))
        .sum();
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        1.0 - ss_res / ss_tot
    };
    Ok(ComplexityFit {
        exponent,
        intercept,
        r_squared,
        samples: points.len(),
    })
}

/// Solves `reps` random instances per size, `n = round(m / ratio)` (at
/// least 3), recording the operation count of each run.
pub fn bench_samples(
    sizes: &[usize],
    ratio: f64,
    reps: usize,
    seed: u64,
    execution: Execution,
) -> Result<Vec<ComplexitySample>, GenError> {
    let specs: Vec<GenSpec> = sizes
        .iter()
        .enumerate()
        .flat_map(|(si, &m)| {
            let n = ((m as f64 / ratio).round() as u32).max(3);
            (0..reps).map(move |r| GenSpec::new(n, m, mix_seed(seed, (si * reps + r) as u64)))
        })
        .collect();
    let instances = specs
        .iter()
        .map(gen_random)
        .collect::<Result<Vec<_>, _>>()?;
    Ok(execution.map(&instances, |_, inst| {
        let run = solve_run(inst, &SolveConfig::default());
        ComplexitySample {
            m: inst.len(),
            n: inst.variable_count(),
            ops: run.ops,
            outcome: run.outcome.label().to_string(),
        }
    }))
}

/// `m,n,ops,outcome` rows.
pub fn samples_csv(samples: &[ComplexitySample]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    for s in samples {
        w.serialize(s).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
}
