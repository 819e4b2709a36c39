//! Differential runs of the solver against the oracles.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{evaluate, Instance};
use crate::dimacs::{emit_dimacs, parse_dimacs};
use crate::error::CnfError;
use crate::harness::enumerate::{enumerate_small, EnumerateError};
use crate::harness::exec::Execution;
use crate::harness::gen::{gen_random, GenError, GenSpec};
use crate::harness::minimize::minimize;
use crate::oracle::{decide, OracleVerdict};
use crate::solver::{solve, SolveConfig, SolverOutcome};

/// Anything that answers like [`solve`]; lets tests plant a broken solver.
pub type SolverFn = fn(&Instance, &SolveConfig) -> SolverOutcome;

/// Classification of one instance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Outcome {
    /// Both say satisfiable and the solver's model evaluates as satisfying.
    AgreeSat,
    AgreeUnsat,
    FalseSat,
    FalseUnsat,
    Anomaly,
}

impl Outcome {
    pub const ALL: [Outcome; 5] = [
        Outcome::AgreeSat,
        Outcome::AgreeUnsat,
        Outcome::FalseSat,
        Outcome::FalseUnsat,
        Outcome::Anomaly,
    ];

    pub fn mismatch(self) -> Option<MismatchKind> {
        match self {
            Outcome::AgreeSat | Outcome::AgreeUnsat => None,
            Outcome::FalseSat => Some(MismatchKind::FalseSat),
            Outcome::FalseUnsat => Some(MismatchKind::FalseUnsat),
            Outcome::Anomaly => Some(MismatchKind::Anomaly),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum MismatchKind {
    FalseSat,
    FalseUnsat,
    Anomaly,
}

/// Compares a solver outcome with the oracle. A Sat whose assignment does not
/// evaluate as satisfying counts as `FalseSat` whatever the oracle says.
pub fn adjudicate(inst: &Instance, solver: &SolverOutcome, oracle: &OracleVerdict) -> Outcome {
    match solver {
        SolverOutcome::Anomaly { .. } => Outcome::Anomaly,
        SolverOutcome::Sat { assignment, .. } => {
            let verified = matches!(evaluate(inst, assignment), Ok(e) if e.is_satisfied());
            if verified && oracle.is_sat() {
                Outcome::AgreeSat
            } else {
                Outcome::FalseSat
            }
        }
        SolverOutcome::Unsat { .. } if oracle.is_sat() => Outcome::FalseUnsat,
        SolverOutcome::Unsat { .. } => Outcome::AgreeUnsat,
    }
}

/// A replayable disagreement, self-contained as one JSON object.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CounterexampleRecord {
    pub dimacs: String,
    pub config: SolveConfig,
    pub solver_outcome: SolverOutcome,
    pub oracle_verdict: OracleVerdict,
    pub kind: MismatchKind,
    pub minimized: bool,
}

#[derive(Debug, Error)]
pub enum ReplayError {
    #[error("embedded instance does not parse: {0}")]
    Dimacs(#[from] CnfError),
}

impl CounterexampleRecord {
    pub fn new(
        inst: &Instance,
        config: SolveConfig,
        solver_outcome: SolverOutcome,
        oracle_verdict: OracleVerdict,
        kind: MismatchKind,
    ) -> Self {
        CounterexampleRecord {
            dimacs: emit_dimacs(inst),
            config,
            solver_outcome,
            oracle_verdict,
            kind,
            minimized: false,
        }
    }

    pub fn instance(&self) -> Result<Instance, CnfError> {
        parse_dimacs(&self.dimacs)
    }

    /// The embedded verdicts really are a mismatch of the recorded kind.
    pub fn is_consistent(&self) -> bool {
        self.instance()
            .map(|inst| {
                adjudicate(&inst, &self.solver_outcome, &self.oracle_verdict).mismatch()
                    == Some(self.kind)
            })
            .unwrap_or(false)
    }
}

/// Re-runs the embedded instance; `Some(kind)` when it still mismatches.
pub fn replay(
    rec: &CounterexampleRecord,
    solver: SolverFn,
    brute_limit: u32,
) -> Result<Option<MismatchKind>, ReplayError> {
    let inst = rec.instance()?;
    Ok(classify(&inst, &rec.config, solver, brute_limit)
        .0
        .mismatch())
}

pub(crate) fn classify(
    inst: &Instance,
    cfg: &SolveConfig,
    solver: SolverFn,
    brute_limit: u32,
) -> (Outcome, SolverOutcome, OracleVerdict) {
    let out = solver(inst, cfg);
    let verdict = decide(inst, brute_limit);
    (adjudicate(inst, &out, &verdict), out, verdict)
}

/// Where the instances of a run come from.
#[derive(Debug, Clone, PartialEq)]
pub enum DiffSource {
    Specs(Vec<GenSpec>),
    Enumeration { max_n: u32, max_m: usize },
}

#[derive(Debug, Clone, Copy)]
pub struct DiffConfig {
    pub solve: SolveConfig,
    pub solver: SolverFn,
    /// Brute force up to this many variables, DPLL above.
    pub brute_limit: u32,
    /// Instances above this many variables are refused.
    pub oracle_max_vars: u32,
    pub minimize: bool,
    pub execution: Execution,
}

impl Default for DiffConfig {
    fn default() -> Self {
        DiffConfig {
            solve: SolveConfig::default(),
            solver: solve,
            brute_limit: 20,
            oracle_max_vars: 64,
            minimize: true,
            execution: Execution::Parallel,
        }
    }
}

#[derive(Debug, Error)]
pub enum DiffError {
    #[error("instance {index} has {n} variables, oracle budget is {max}")]
    OracleGuard { index: usize, n: u32, max: u32 },
    #[error(transparent)]
    Gen(#[from] GenError),
    #[error(transparent)]
    Enumerate(#[from] EnumerateError),
}

/// One line of the JSON-lines report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffEntry {
    pub index: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub n: u32,
    pub m: usize,
    pub solver: String,
    pub oracle: String,
    pub class: Outcome,
    /// Position in `DiffReport::counterexamples`, for non-agreeing instances.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<usize>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DiffReport {
    pub entries: Vec<DiffEntry>,
    pub counterexamples: Vec<CounterexampleRecord>,
}

impl DiffReport {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Count per class, every class present (possibly zero).
    pub fn counts(&self) -> BTreeMap<Outcome, usize> {
        let mut counts: BTreeMap<Outcome, usize> = Outcome::ALL.iter().map(|&o| (o, 0)).collect();
        for e in &self.entries {
            *counts.entry(e.class).or_default() += 1;
        }
        counts
    }

    pub fn count(&self, class: Outcome) -> usize {
        self.counts()[&class]
    }

    pub fn to_jsonl(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(&serde_json::to_string(e).expect("entries serialize"));
            out.push('\n');
        }
        out
    }

    /// `class,count,rate` rows plus a `total` row.
    pub fn summary_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["class", "count", "rate"])
            .expect("in-memory write");
        let total = self.len();
        for (class, count) in self.counts() {
            let rate = if total == 0 {
                0.0
            } else {
                count as f64 / total as f64
            };
            w.write_record([
                format!("{class:?}"),
                count.to_string(),
                format!("{rate:.6}"),
            ])
            .expect("in-memory write");
        }
        w.write_record([
            "total".to_string(),
            total.to_string(),
            "1.000000".to_string(),
        ])
        .expect("in-memory write");
        String::from_utf8(w.into_inner().expect("flush")).expect("utf-8")
    }
}

struct Item {
    seed: Option<u64>,
    instance: Instance,
}

fn materialize(source: &DiffSource) -> Result<Vec<Item>, DiffError> {
    Ok(match source {
        DiffSource::Specs(specs) => specs
            .iter()
            .map(|s| {
                Ok(Item {
                    seed: Some(s.seed),
                    instance: gen_random(s)?,
                })
            })
            .collect::<Result<_, GenError>>()?,
        DiffSource::Enumeration { max_n, max_m } => enumerate_small(*max_n, *max_m)?
            .map(|instance| Item {
                seed: None,
                instance,
            })
            .collect(),
    })
}

/// Solves and adjudicates every instance of `source`. Reports are ordered by
/// instance index whatever the execution mode.
pub fn diff_run(source: &DiffSource, cfg: &DiffConfig) -> Result<DiffReport, DiffError> {
    let items = materialize(source)?;
    diff_instances_inner(&items, cfg)
}

/// [`diff_run`] over explicit instances.
pub fn diff_instances(instances: &[Instance], cfg: &DiffConfig) -> Result<DiffReport, DiffError> {
    let items: Vec<Item> = instances
        .iter()
        .map(|i| Item {
            seed: None,
            instance: i.clone(),
        })
        .collect();
    diff_instances_inner(&items, cfg)
}

fn diff_instances_inner(items: &[Item], cfg: &DiffConfig) -> Result<DiffReport, DiffError> {
    if let Some((index, item)) = items
        .iter()
        .enumerate()
        .find(|(_, it)| it.instance.variable_count() > cfg.oracle_max_vars)
    {
        return Err(DiffError::OracleGuard {
            index,
            n: item.instance.variable_count(),
            max: cfg.oracle_max_vars,
        });
    }

    let results = cfg.execution.map(items, |index, item| {
        let inst = &item.instance;
        let (class, out, verdict) = classify(inst, &cfg.solve, cfg.solver, cfg.brute_limit);
        let entry = DiffEntry {
            index,
            seed: item.seed,
            n: inst.variable_count(),
            m: inst.len(),
            solver: out.label().to_string(),
            oracle: if verdict.is_sat() { "SAT" } else { "UNSAT" }.to_string(),
            class,
            counterexample: None,
        };
        let record = class.mismatch().map(|kind| {
            let rec = CounterexampleRecord::new(inst, cfg.solve, out, verdict, kind);
            if cfg.minimize {
                minimize(&rec, cfg.solver, cfg.brute_limit)
            } else {
                rec
            }
        });
        (entry, record)
    });

    let mut entries = Vec::with_capacity(results.len());
    let mut counterexamples = Vec::new();
    for (mut entry, record) in results {
        if let Some(rec) = record {
            entry.counterexample = Some(counterexamples.len());
            counterexamples.push(rec);
        }
        entries.push(entry);
    }
    Ok(DiffReport {
        entries,
        counterexamples,
    })
}
