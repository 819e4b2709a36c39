//! Greedy one-clause-at-a-time shrinking of counterexamples.

use crate::harness::diff::{classify, CounterexampleRecord, SolverFn};

/// Drops clauses while the record's mismatch kind persists, until removing
/// any single remaining clause loses it. Records that no longer replay come
/// back untouched.
pub fn minimize(
    rec: &CounterexampleRecord,
    solver: SolverFn,
    brute_limit: u32,
) -> CounterexampleRecord {
    let Ok(mut inst) = rec.instance() else {
        return rec.clone();
    };
    let (first, mut solver_outcome, mut oracle_verdict) =
        classify(&inst, &rec.config, solver, brute_limit);
    if first.mismatch() != Some(rec.kind) {
        return rec.clone();
    }

    let mut i = 0;
    while i < inst.len() {
        let candidate = inst.subset((0..inst.len()).filter(|&j| j != i));
        let (class, out, verdict) = classify(&candidate, &rec.config, solver, brute_limit);
        if class.mismatch() == Some(rec.kind) {
            inst = candidate;
            solver_outcome = out;
            oracle_verdict = verdict;
            i = 0;
        } else {
            i += 1;
        }
    }

    let mut min =
        CounterexampleRecord::new(&inst, rec.config, solver_outcome, oracle_verdict, rec.kind);
    min.minimized = true;
    min
}
