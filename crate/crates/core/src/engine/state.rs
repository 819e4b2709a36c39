//! Engine state: admitted clauses, the current understanding, the concept
//! store and the constraint overlay, plus the worklist fixpoint that keeps
//! them consistent.

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::cnf::{Clause, ClauseId, Literal, Variable};
use crate::engine::concept::{Concept, ConceptSetType, ConceptStore};
use crate::engine::overlay::{ConstraintOverlay, OverlayConflict};
use crate::engine::trace::{Event, EventKind, RunLog};
use crate::engine::truth::{TruthValue, Understanding};

/// Outcome of evaluating the case definition for one literal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Reevaluation {
    Value(TruthValue),
    Undefined(UndefinedReason),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum UndefinedReason {
    /// The literal's concept set has a plus concept and so does its negation's.
    BothSetsPositive,
    /// The case definition yields a definite value opposite to a pin.
    PinViolated {
        pinned: TruthValue,
        derived: TruthValue,
    },
    /// A not-true literal would become true.
    NotTrueViolated,
    /// A new pin or not-true mark clashes with an existing one.
    ConstraintClash,
    /// Recomputation kept flipping values past its budget.
    NoFixpoint,
}

impl fmt::Display for UndefinedReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            UndefinedReason::BothSetsPositive => {
                f.write_str("concept set and negative set both non-empty plus")
            }
            UndefinedReason::PinViolated { pinned, derived } => {
                write!(f, "pinned {pinned} but derived {derived}")
            }
            UndefinedReason::NotTrueViolated => f.write_str("not-true literal derived true"),
            UndefinedReason::ConstraintClash => f.write_str("conflicting constraints"),
            UndefinedReason::NoFixpoint => f.write_str("recomputation did not settle"),
        }
    }
}

enum Settled {
    Unchanged,
    Changed(TruthValue),
    Undefined(Contradiction),
}

fn enqueue(queue: &mut VecDeque<Variable>, queued: &mut [bool], var: Variable) {
    if !queued[var.index()] {
        queued[var.index()] = true;
        queue.push_back(var);
    }
}

/// The understanding became undefined at `witness`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Contradiction {
    pub witness: Literal,
    pub reason: UndefinedReason,
}

impl fmt::Display for Contradiction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "contradiction at {}: {}", self.witness, self.reason)
    }
}

impl std::error::Error for Contradiction {}

impl From<OverlayConflict> for Contradiction {
    fn from(c: OverlayConflict) -> Self {
        Contradiction {
            witness: c.0,
            reason: UndefinedReason::ConstraintClash,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum AddConceptError {
    #[error("focus {0} is not in clause {1}")]
    FocusNotInClause(Literal, ClauseId),
    #[error("concept ({1}, {0}) already present")]
    Duplicate(Literal, ClauseId),
    #[error(transparent)]
    Contradiction(#[from] Contradiction),
}

/// Admitted clauses, understanding, concepts and constraints.
///
/// Clones are independent except for the shared [`RunLog`], which keeps
/// counting work (and tracing) across every fork of a run. Equality ignores
/// the run log.
#[derive(Debug, Clone)]
pub struct EngineState {
    admitted: BTreeSet<ClauseId>,
    understanding: Understanding,
    store: ConceptStore,
    overlay: ConstraintOverlay,
    run: Arc<RunLog>,
}

impl PartialEq for EngineState {
    fn eq(&self, other: &Self) -> bool {
        self.admitted == other.admitted
            && self.understanding == other.understanding
            && self.store == other.store
            && self.overlay == other.overlay
    }
}

impl Eq for EngineState {}

impl EngineState {
    pub fn new(variable_count: u32) -> Self {
        Self::with_run_log(variable_count, Arc::new(RunLog::new(false)))
    }

    pub fn with_run_log(variable_count: u32, run: Arc<RunLog>) -> Self {
        EngineState {
            admitted: BTreeSet::new(),
            understanding: Understanding::new(variable_count),
            store: ConceptStore::new(variable_count),
            overlay: ConstraintOverlay::default(),
            run,
        }
    }

    pub fn variable_count(&self) -> u32 {
        self.understanding.variable_count()
    }

    pub fn understanding(&self) -> &Understanding {
        &self.understanding
    }

    pub fn value(&self, lit: Literal) -> TruthValue {
        self.understanding.value(lit)
    }

    pub fn store(&self) -> &ConceptStore {
        &self.store
    }

    pub fn overlay(&self) -> &ConstraintOverlay {
        &self.overlay
    }

    pub fn admitted(&self) -> &BTreeSet<ClauseId> {
        &self.admitted
    }

    pub fn run_log(&self) -> &Arc<RunLog> {
        &self.run
    }

    pub fn ops(&self) -> u64 {
        self.run.ops()
    }

    pub fn record(&self, event: Event) {
        self.run.record(event);
    }

    /// Independent copy sharing this run's counter and trace.
    pub fn fork(&self) -> EngineState {
        self.clone()
    }

    /// Fork keeping only concepts from clauses in which `lit` or `!lit`
    /// occurs; values are carried over unchanged.
    pub fn restricted_to(&self, lit: Literal) -> EngineState {
        let store = self.store.filtered(|c| {
            let lits = c.clause_literals();
            lits.contains(&lit) || lits.contains(&!lit)
        });
        let admitted = store.iter().map(|c| c.origin).collect();
        EngineState {
            admitted,
            understanding: self.understanding.clone(),
            store,
            overlay: self.overlay.clone(),
            run: Arc::clone(&self.run),
        }
    }

    /// The bare case definition for `lit`, ignoring constraints.
    pub fn case_value(&self, lit: Literal) -> Reevaluation {
        let own = self.store.set_type(lit, &self.understanding);
        let negative_nonempty = self
            .store
            .negative_set(lit, &self.understanding)
            .next()
            .is_some();
        match (own, negative_nonempty) {
            (Some(ConceptSetType::Plus), true) => {
                Reevaluation::Undefined(UndefinedReason::BothSetsPositive)
            }
            (Some(ConceptSetType::Plus), false) => Reevaluation::Value(TruthValue::True),
            (_, true) => Reevaluation::Value(TruthValue::False),
            (_, false) => Reevaluation::Value(TruthValue::Free),
        }
    }

    /// Case definition with the overlay applied: a pin wins unless the case
    /// definition contradicts it outright; a not-true literal may not come
    /// out true.
    pub fn reevaluate_literal(&self, lit: Literal) -> Reevaluation {
        let derived = match self.case_value(lit) {
            Reevaluation::Value(v) => v,
            undefined => return undefined,
        };
        if let Some(pinned) = self.overlay.pinned(lit) {
            if derived != TruthValue::Free && derived != pinned {
                return Reevaluation::Undefined(UndefinedReason::PinViolated { pinned, derived });
            }
            return Reevaluation::Value(pinned);
        }
        if derived == TruthValue::True && self.overlay.is_not_true(lit) {
            return Reevaluation::Undefined(UndefinedReason::NotTrueViolated);
        }
        Reevaluation::Value(derived)
    }

    /// Worklist recomputation starting from `seeds` (processed in literal
    /// order, FIFO afterwards).
    ///
    /// A variable whose case definition is undefined keeps its value and is
    /// re-checked once the worklist drains; it is a contradiction only if it
    /// is still undefined then. On contradiction every value change made by
    /// this call is rolled back.
    pub fn compute_fixpoint(
        &mut self,
        seeds: impl IntoIterator<Item = Literal>,
    ) -> Result<(), Contradiction> {
        let n = self.variable_count() as usize;
        let mut seeds: Vec<Literal> = seeds.into_iter().collect();
        seeds.sort_unstable();

        let mut queued = vec![false; n];
        let mut queue = VecDeque::new();
        for lit in seeds {
            enqueue(&mut queue, &mut queued, lit.var());
        }

        let budget = 8 * (n + self.store.len()) + 16;
        let mut undo: Vec<(Variable, TruthValue)> = Vec::new();
        let mut undefined: BTreeSet<Variable> = BTreeSet::new();

        loop {
            while let Some(var) = queue.pop_front() {
                queued[var.index()] = false;
                match self.settle_variable(var) {
                    Settled::Unchanged => {
                        undefined.remove(&var);
                    }
                    Settled::Undefined(_) => {
                        undefined.insert(var);
                    }
                    Settled::Changed(old) => {
                        undefined.remove(&var);
                        undo.push((var, old));
                        if undo.len() > budget {
                            let c = Contradiction {
                                witness: var.positive(),
                                reason: UndefinedReason::NoFixpoint,
                            };
                            self.roll_back(undo, c);
                            return Err(c);
                        }
                        for dep in self.dependents(var) {
                            enqueue(&mut queue, &mut queued, dep);
                        }
                    }
                }
            }
            // Drained: anything still undefined gets one more look.
            let mut remaining = None;
            for var in std::mem::take(&mut undefined) {
                match self.settle_variable(var) {
                    Settled::Undefined(c) => {
                        remaining.get_or_insert(c);
                        undefined.insert(var);
                    }
                    Settled::Unchanged => {}
                    Settled::Changed(old) => {
                        undo.push((var, old));
                        for dep in self.dependents(var) {
                            enqueue(&mut queue, &mut queued, dep);
                        }
                    }
                }
            }
            if queue.is_empty() {
                return match remaining {
                    None => Ok(()),
                    Some(c) => {
                        self.roll_back(undo, c);
                        Err(c)
                    }
                };
            }
        }
    }

    /// Variables whose concept-set type may change when `var` changes value:
    /// foci of concepts listing either literal of `var` as a member.
    pub fn dependents(&self, var: Variable) -> Vec<Variable> {
        let mut out = Vec::new();
        for lit in [var.positive(), var.negative()] {
            out.extend(self.store.with_member(lit).map(|c| c.focus.var()));
        }
        out
    }

    /// Re-derives both literals of `var` and stores the result if defined.
    fn settle_variable(&mut self, var: Variable) -> Settled {
        let pos = var.positive();
        let neg = var.negative();
        self.run.count_op();
        let pos_value = self.reevaluate_literal(pos);
        self.run.count_op();
        let neg_value = self.reevaluate_literal(neg);
        let new = match (pos_value, neg_value) {
            (Reevaluation::Undefined(reason), _) => {
                return Settled::Undefined(Contradiction {
                    witness: pos,
                    reason,
                })
            }
            (_, Reevaluation::Undefined(reason)) => {
                return Settled::Undefined(Contradiction {
                    witness: neg,
                    reason,
                })
            }
            (Reevaluation::Value(p), Reevaluation::Value(q)) => {
                debug_assert_eq!(p, q.negate(), "case definition broke coupling at {var:?}");
                p
            }
        };
        let old = self.understanding.value(pos);
        if old == new {
            return Settled::Unchanged;
        }
        self.understanding.set(pos, new);
        self.run
            .record(Event::new(EventKind::Value).literal(pos).change(old, new));
        Settled::Changed(old)
    }

    fn roll_back(&mut self, undo: Vec<(Variable, TruthValue)>, c: Contradiction) {
        for (var, old) in undo.into_iter().rev() {
            self.understanding.set(var.positive(), old);
        }
        self.run.record(
            Event::new(EventKind::Contradiction)
                .literal(c.witness)
                .value(TruthValue::False),
        );
    }

    /// Adds the concept of `focus` in `clause`, admits the clause and
    /// recomputes from `focus`. Nothing changes if this fails.
    pub fn add_concept(&mut self, clause: &Clause, focus: Literal) -> Result<(), AddConceptError> {
        let members = clause
            .context(focus)
            .ok_or(AddConceptError::FocusNotInClause(focus, clause.id()))?;
        let concept = Concept {
            origin: clause.id(),
            focus,
            members,
        };
        if self.store.insert(concept).is_none() {
            return Err(AddConceptError::Duplicate(focus, clause.id()));
        }
        let newly_admitted = self.admitted.insert(clause.id());
        self.run.record(
            Event::new(EventKind::Concept)
                .literal(focus)
                .clause(clause.id()),
        );
        if let Err(c) = self.compute_fixpoint([focus]) {
            self.store.remove_last();
            if newly_admitted {
                self.admitted.remove(&clause.id());
            }
            return Err(c.into());
        }
        if newly_admitted {
            self.run
                .record(Event::new(EventKind::Admit).clause(clause.id()));
        }
        Ok(())
    }

    /// Pins `lit` true and `!lit` false, stores that value and recomputes
    /// everything depending on it. Nothing changes if this fails.
    pub fn assume_true(&mut self, lit: Literal) -> Result<(), Contradiction> {
        let saved = self.overlay.clone();
        self.overlay.pin_true(lit)?;
        let old = self.understanding.value(lit);
        self.understanding.set(lit, TruthValue::True);
        self.run.record(
            Event::new(EventKind::Pin)
                .literal(lit)
                .change(old, TruthValue::True),
        );
        let mut seeds = vec![lit];
        if old != TruthValue::True {
            seeds.extend(
                self.dependents(lit.var())
                    .into_iter()
                    .map(Variable::positive),
            );
        }
        if let Err(c) = self.compute_fixpoint(seeds) {
            self.overlay = saved;
            self.understanding.set(lit, old);
            return Err(c);
        }
        Ok(())
    }

    /// Forbids `lit` from being true. Values are not recomputed.
    pub fn forbid_true(&mut self, lit: Literal) -> Result<(), Contradiction> {
        self.overlay.forbid_true(lit)?;
        self.run.record(Event::new(EventKind::NotTrue).literal(lit));
        Ok(())
    }

    /// Literals whose stored value disagrees with [`reevaluate_literal`](Self::reevaluate_literal),
    /// skipping pinned variables. Empty after every successful fixpoint.
    pub fn unsound_literals(&self) -> Vec<Literal> {
        self.understanding
            .literals()
            .filter(|&l| !self.overlay.is_pinned(l.var()))
            .filter(|&l| self.reevaluate_literal(l) != Reevaluation::Value(self.value(l)))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cnf::Instance;
    use TruthValue::*;

    fn lit(x: i32) -> Literal {
        Literal::from_dimacs(x)
    }

    fn admit_all(state: &mut EngineState, inst: &Instance) -> Result<(), AddConceptError> {
        for c in inst.clauses() {
            let mut pending = c.literals().to_vec();
            while !pending.is_empty() {
                let pick = pending
                    .iter()
                    .position(|&l| state.value(l) != False)
                    .unwrap_or(0);
                let focus = pending.remove(pick);
                state.add_concept(c, focus)?;
            }
        }
        Ok(())
    }

    #[test]
    fn empty_store_fixpoint_changes_nothing() {
        let mut s = EngineState::new(3);
        let before = s.clone();
        s.compute_fixpoint([lit(1), lit(-2)]).unwrap();
        assert_eq!(s, before);
        assert_eq!(s.ops(), 4);
    }

    #[test]
    fn first_concept_makes_focus_true() {
        let inst = Instance::from_dimacs(3, &[[1, 2, 3]]).unwrap();
        let mut s = EngineState::new(3);
        s.add_concept(inst.clause(0), lit(1)).unwrap();
        assert_eq!(s.value(lit(1)), True);
        assert_eq!(s.value(lit(-1)), False);
        assert_eq!(s.value(lit(2)), Free);
        assert_eq!(s.value(lit(3)), Free);
        assert!(s.admitted().contains(&0));
    }

    #[test]
    fn remaining_concepts_of_a_clause_stay_free() {
        let inst = Instance::from_dimacs(3, &[[1, 2, 3]]).unwrap();
        let mut s = EngineState::new(3);
        admit_all(&mut s, &inst).unwrap();
        assert_eq!(s.value(lit(1)), True);
        assert_eq!(s.value(lit(2)), Free);
        assert_eq!(s.value(lit(3)), Free);
        assert!(s.unsound_literals().is_empty());
    }

    #[test]
    fn case_definition_four_cases() {
        // empty sets -> free
        let s = EngineState::new(4);
        assert_eq!(s.case_value(lit(1)), Reevaluation::Value(Free));

        let inst = Instance::from_dimacs(4, &[[1, 2, 3], [-1, 2, 4], [-1, 3, 4]]).unwrap();
        let mut s = EngineState::new(4);
        let c = |i| inst.clause(i);
        // one plus concept for x1, nothing for ~x1 -> t
        s.store.insert(Concept {
            origin: 0,
            focus: lit(1),
            members: c(0).context(lit(1)).unwrap(),
        });
        assert_eq!(s.case_value(lit(1)), Reevaluation::Value(True));
        // plus concept on both sides -> undefined
        s.store.insert(Concept {
            origin: 1,
            focus: lit(-1),
            members: c(1).context(lit(-1)).unwrap(),
        });
        assert_eq!(
            s.case_value(lit(1)),
            Reevaluation::Undefined(UndefinedReason::BothSetsPositive)
        );
        // x1's only concept becomes star (x2 true) while ~x1 keeps a plus one -> f
        s.understanding.set(lit(2), True);
        s.store.insert(Concept {
            origin: 2,
            focus: lit(-1),
            members: c(2).context(lit(-1)).unwrap(),
        });
        assert_eq!(s.case_value(lit(1)), Reevaluation::Value(False));
        assert_eq!(s.case_value(lit(-1)), Reevaluation::Value(True));
    }

    #[test]
    fn empty_own_set_with_negative_set_is_false() {
        let inst = Instance::from_dimacs(3, &[[-1, 2, 3]]).unwrap();
        let mut s = EngineState::new(3);
        s.store.insert(Concept {
            origin: 0,
            focus: lit(-1),
            members: inst.clause(0).context(lit(-1)).unwrap(),
        });
        assert_eq!(s.case_value(lit(1)), Reevaluation::Value(False));
    }

    #[test]
    fn not_true_violation_is_a_contradiction_and_rolls_back() {
        // x2 is forced true by {x2, x1, x3} once x1 and x3 are false.
        let inst = Instance::from_dimacs(3, &[[2, 1, 3], [-1, -3, 2]]).unwrap();
        let mut s = EngineState::new(3);
        s.forbid_true(lit(2)).unwrap();
        s.assume_true(lit(-1)).unwrap();
        s.assume_true(lit(-3)).unwrap();
        s.compute_fixpoint([lit(1), lit(3)]).unwrap();
        s.add_concept(inst.clause(1), lit(-1)).unwrap();
        let before = s.clone();
        let err = s.add_concept(inst.clause(0), lit(2)).unwrap_err();
        assert_eq!(
            err,
            AddConceptError::Contradiction(Contradiction {
                witness: lit(2),
                reason: UndefinedReason::NotTrueViolated
            })
        );
        assert_eq!(s, before);
        assert!(s.store().indices_consistent());
    }

    #[test]
    fn duplicate_and_foreign_focus_rejected() {
        let inst = Instance::from_dimacs(4, &[[1, 2, 3]]).unwrap();
        let mut s = EngineState::new(4);
        s.add_concept(inst.clause(0), lit(1)).unwrap();
        assert_eq!(
            s.add_concept(inst.clause(0), lit(1)),
            Err(AddConceptError::Duplicate(lit(1), 0))
        );
        assert_eq!(
            s.add_concept(inst.clause(0), lit(4)),
            Err(AddConceptError::FocusNotInClause(lit(4), 0))
        );
    }

    #[test]
    fn pins_override_free_derivation() {
        let mut s = EngineState::new(2);
        s.assume_true(lit(-2)).unwrap();
        s.compute_fixpoint([lit(2)]).unwrap();
        assert_eq!(s.value(lit(2)), False);
        assert!(s.unsound_literals().is_empty());
    }

    #[test]
    fn fork_is_isolated() {
        let inst = Instance::from_dimacs(3, &[[1, 2, 3]]).unwrap();
        let s = EngineState::new(3);
        let mut f = s.fork();
        admit_all(&mut f, &inst).unwrap();
        assert_eq!(s, EngineState::new(3));
        assert_ne!(f, s);
        assert_eq!(EngineState::new(0).fork(), EngineState::new(0));
        // shared counter
        assert_eq!(s.ops(), f.ops());
    }

    #[test]
    fn restriction_keeps_clauses_of_the_variable() {
        let inst = Instance::from_dimacs(5, &[[1, 2, 3], [-1, 4, 5], [2, 4, 5]]).unwrap();
        let mut s = EngineState::new(5);
        admit_all(&mut s, &inst).unwrap();
        let r = s.restricted_to(lit(-1));
        assert_eq!(r.admitted().iter().copied().collect::<Vec<_>>(), vec![0, 1]);
        assert_eq!(r.store().len(), 6);
        assert_eq!(r.understanding(), s.understanding());
    }
}
