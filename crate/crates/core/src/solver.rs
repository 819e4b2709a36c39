//! The top-level incremental procedure: admit clauses one at a time, keep
//! the understanding defined, and verify the final answer.

use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algorithms::{algorithm_d_guarded, depth_guard, AlgorithmError, HistorySet};
use crate::cnf::{evaluate, Assignment, ClauseId, Instance, Literal};
use crate::engine::{
    AddConceptError, EngineState, Event, EventKind, RunLog, TraceEvent, TruthValue, Understanding,
};

/// Order in which clauses are admitted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ClauseOrder {
    #[default]
    Input,
    /// Seeded shuffle of the input order.
    Permuted(u64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct SolveConfig {
    pub clause_order: ClauseOrder,
    pub default_free: bool,
    pub trace: bool,
    /// Algorithm D may recurse `factor * (2n) + 1` frames deep.
    pub depth_guard_factor: usize,
}

impl Default for SolveConfig {
    fn default() -> Self {
        SolveConfig {
            clause_order: ClauseOrder::Input,
            default_free: false,
            trace: false,
            depth_guard_factor: 2,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum AnomalyKind {
    /// Adding a concept in the admission step made the understanding undefined.
    UndefinedAtU4,
    /// A would-be Sat failed re-evaluation, the true-literal check, or the
    /// fixpoint sweep.
    UnverifiedSat,
    /// Algorithm D recursed past its depth guard.
    DepthGuard,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum SolverOutcome {
    Sat {
        assignment: Assignment,
        understanding: Understanding,
    },
    Unsat {
        failing_clause: ClauseId,
    },
    Anomaly {
        kind: AnomalyKind,
        detail: String,
        /// Number of trace events recorded up to the anomaly.
        trace_ref: usize,
    },
}

impl SolverOutcome {
    pub fn is_sat(&self) -> bool {
        matches!(self, SolverOutcome::Sat { .. })
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SolverOutcome::Unsat { .. })
    }

    pub fn is_anomaly(&self) -> bool {
        matches!(self, SolverOutcome::Anomaly { .. })
    }

    /// `SAT`, `UNSAT` or `ANOMALY`.
    pub fn label(&self) -> &'static str {
        match self {
            SolverOutcome::Sat { .. } => "SAT",
            SolverOutcome::Unsat { .. } => "UNSAT",
            SolverOutcome::Anomaly { .. } => "ANOMALY",
        }
    }
}

/// Everything a run produces besides the verdict.
#[derive(Debug, Clone)]
pub struct SolveRun {
    pub outcome: SolverOutcome,
    /// Basic recomputation steps, across all forks.
    pub ops: u64,
    pub trace: Vec<TraceEvent>,
    /// Engine state when the run stopped.
    pub state: EngineState,
}

/// Reads the assignment off an understanding: true literals fix their
/// variable, free variables stay unassigned (completed by `default_free`).
pub fn extract_assignment(u: &Understanding, inst: &Instance, default_free: bool) -> Assignment {
    let mut a = Assignment::new(default_free);
    for var in inst.variables() {
        match u.var_value(var) {
            TruthValue::True => a.set(var, true),
            TruthValue::False => a.set(var, false),
            TruthValue::Free => {}
        }
    }
    a
}

pub fn clause_order(inst: &Instance, order: ClauseOrder) -> Vec<ClauseId> {
    let mut ids: Vec<ClauseId> = (0..inst.len()).collect();
    if let ClauseOrder::Permuted(seed) = order {
        ids.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    ids
}

pub fn solve(inst: &Instance, cfg: &SolveConfig) -> SolverOutcome {
    solve_run(inst, cfg).outcome
}

pub fn solve_run(inst: &Instance, cfg: &SolveConfig) -> SolveRun {
    solve_observed(inst, cfg, &mut |_, _| {})
}

/// Like [`solve_run`], calling `observer` with the state after each clause
/// has been fully admitted.
pub fn solve_observed(
    inst: &Instance,
    cfg: &SolveConfig,
    observer: &mut dyn FnMut(&EngineState, ClauseId),
) -> SolveRun {
    let run = Arc::new(RunLog::new(cfg.trace));
    let mut state = EngineState::with_run_log(inst.variable_count(), Arc::clone(&run));
    let outcome = admit_all(inst, cfg, &mut state, observer);

    let outcome = match outcome {
        Ok(()) => verify(inst, cfg, &state),
        Err(o) => o,
    };
    state.record(Event::new(EventKind::Outcome));

    if matches!(
        outcome,
        SolverOutcome::Anomaly {
            kind: AnomalyKind::UnverifiedSat,
            ..
        }
    ) && !cfg.trace
    {
        // Replay with tracing so the failure ships with its full trace.
        let traced = SolveConfig {
            trace: true,
            ..*cfg
        };
        return solve_run(inst, &traced);
    }

    SolveRun {
        ops: run.ops(),
        trace: run.events(),
        outcome,
        state,
    }
}

fn anomaly(state: &EngineState, kind: AnomalyKind, detail: String) -> SolverOutcome {
    SolverOutcome::Anomaly {
        kind,
        detail,
        trace_ref: state.run_log().event_count(),
    }
}

fn admit_all(
    inst: &Instance,
    cfg: &SolveConfig,
    state: &mut EngineState,
    observer: &mut dyn FnMut(&EngineState, ClauseId),
) -> Result<(), SolverOutcome> {
    let guard = depth_guard(inst.variable_count(), cfg.depth_guard_factor);

    for id in clause_order(inst, cfg.clause_order) {
        let clause = inst.clause(id);
        state.record(Event::new(EventKind::Clause).clause(id));

        if clause
            .literals()
            .iter()
            .all(|&l| state.value(l) == TruthValue::False)
        {
            state.record(Event::new(EventKind::AllFalse).clause(id));
            let mut adopted = None;
            for &lit in clause.literals() {
                match algorithm_d_guarded(state, lit, &HistorySet::new(), guard) {
                    Ok(Some(freed)) => {
                        adopted = Some(freed);
                        break;
                    }
                    Ok(None) => {}
                    Err(AlgorithmError::DepthGuard { limit }) => {
                        return Err(anomaly(
                            state,
                            AnomalyKind::DepthGuard,
                            format!("clause {id}: depth guard {limit} exceeded freeing {lit}"),
                        ));
                    }
                    Err(e @ AlgorithmError::Precondition { .. }) => {
                        unreachable!("all literals were checked false: {e}")
                    }
                }
            }
            match adopted {
                Some(freed) => *state = freed,
                None => return Err(SolverOutcome::Unsat { failing_clause: id }),
            }
        }

        let mut pending: Vec<Literal> = clause.literals().to_vec();
        while !pending.is_empty() {
            let pick = pending
                .iter()
                .position(|&l| state.value(l) != TruthValue::False)
                .unwrap_or(0);
            let focus = pending.remove(pick);
            match state.add_concept(clause, focus) {
                Ok(()) => {}
                Err(AddConceptError::Contradiction(c)) => {
                    return Err(anomaly(
                        state,
                        AnomalyKind::UndefinedAtU4,
                        format!("clause {id}, focus {focus}: {c}"),
                    ));
                }
                Err(e) => unreachable!("concept bookkeeping: {e}"),
            }
        }
        observer(state, id);
    }
    Ok(())
}

fn verify(inst: &Instance, cfg: &SolveConfig, state: &EngineState) -> SolverOutcome {
    let u = state.understanding();
    let assignment = extract_assignment(u, inst, cfg.default_free);

    match evaluate(inst, &assignment) {
        Ok(e) if e.is_satisfied() => {}
        Ok(e) => {
            return anomaly(
                state,
                AnomalyKind::UnverifiedSat,
                format!("assignment falsifies {e:?}"),
            )
        }
        Err(e) => return anomaly(state, AnomalyKind::UnverifiedSat, e.to_string()),
    }
    if let Some(c) = inst
        .clauses()
        .iter()
        .find(|c| !c.literals().iter().any(|&l| u.value(l).is_true()))
    {
        return anomaly(
            state,
            AnomalyKind::UnverifiedSat,
            format!("clause {} has no true literal", c.id()),
        );
    }
    let unsound = state.unsound_literals();
    if !unsound.is_empty() {
        return anomaly(
            state,
            AnomalyKind::UnverifiedSat,
            format!("stored values disagree with recomputation at {unsound:?}"),
        );
    }
    SolverOutcome::Sat {
        assignment,
        understanding: u.clone(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Variable;
    use crate::fixtures;

    #[test]
    fn single_clause_base_case() {
        let inst = fixtures::single_clause();
        let run = solve_run(&inst, &SolveConfig::default());
        let SolverOutcome::Sat {
            assignment,
            understanding,
        } = run.outcome
        else {
            panic!("expected sat, got {:?}", run.outcome)
        };
        assert_eq!(
            understanding.value(Literal::from_dimacs(1)),
            TruthValue::True
        );
        assert_eq!(
            understanding.value(Literal::from_dimacs(2)),
            TruthValue::Free
        );
        assert_eq!(
            understanding.value(Literal::from_dimacs(3)),
            TruthValue::Free
        );
        assert_eq!(assignment.model_literals(3), vec![1, -2, -3]);
    }

    #[test]
    fn empty_instance_is_sat() {
        let out = solve(&Instance::default(), &SolveConfig::default());
        assert!(
            matches!(out, SolverOutcome::Sat { ref assignment, .. } if assignment.assigned().count() == 0)
        );
    }

    #[test]
    fn extract_assignment_rules() {
        let inst = Instance::from_dimacs(3, &[]).unwrap();
        let mut u = Understanding::new(3);
        u.set(Literal::from_dimacs(1), TruthValue::True);
        u.set(Literal::from_dimacs(-3), TruthValue::True);
        let a = extract_assignment(&u, &inst, false);
        assert_eq!(a.get(Variable::new(1)), Some(true));
        assert_eq!(a.get(Variable::new(2)), None);
        assert!(!a.value(Variable::new(2)));
        assert_eq!(a.get(Variable::new(3)), Some(false));
        assert!(extract_assignment(&u, &inst, true).value(Variable::new(2)));
    }

    #[test]
    fn sat_outcome_roundtrips_through_json() {
        let out = solve(&fixtures::single_clause(), &SolveConfig::default());
        let json = serde_json::to_string(&out).unwrap();
        assert!(json.starts_with(r#"{"status":"SAT""#), "{json}");
        let back: SolverOutcome = serde_json::from_str(&json).unwrap();
        assert_eq!(back, out);
    }

    #[test]
    fn permuted_order_is_a_permutation_and_deterministic() {
        let inst = fixtures::all_sign_patterns();
        let a = clause_order(&inst, ClauseOrder::Permuted(7));
        let mut sorted = a.clone();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..8).collect::<Vec<_>>());
        assert_eq!(a, clause_order(&inst, ClauseOrder::Permuted(7)));
    }

    #[test]
    fn trace_is_deterministic() {
        let inst = fixtures::all_sign_patterns();
        let cfg = SolveConfig {
            trace: true,
            ..SolveConfig::default()
        };
        let a = solve_run(&inst, &cfg);
        let b = solve_run(&inst, &cfg);
        assert_eq!(a.outcome, b.outcome);
        assert_eq!(a.trace, b.trace);
        assert_eq!(a.ops, b.ops);
        assert!(!a.trace.is_empty());
    }
}
