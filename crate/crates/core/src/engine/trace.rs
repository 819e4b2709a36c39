//! Run-level operation counter and event log, shared by every fork of a state.

use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::Mutex;

use serde::{Deserialize, Serialize};

use crate::cnf::{ClauseId, Literal};
use crate::engine::truth::TruthValue;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum EventKind {
    /// A clause is taken up by the solver.
    Clause,
    /// Every literal of the incoming clause is false.
    AllFalse,
    Concept,
    Admit,
    Value,
    Pin,
    NotTrue,
    Contradiction,
    GEnter,
    GPin,
    GResult,
    DEnter,
    DConcept,
    DMember,
    DRecurse,
    DResult,
    /// Algorithm D ran out of concepts but the literal did not end up free.
    DGap,
    Outcome,
}

/// One trace record, written as a JSON line.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceEvent {
    pub step: u64,
    pub kind: EventKind,
    pub literal: Option<Literal>,
    pub old: Option<TruthValue>,
    pub new: Option<TruthValue>,
    pub clause: Option<ClauseId>,
    pub counter: u64,
}

/// Fields of an event other than the sequence number and counter.
#[derive(Debug, Clone, Copy)]
pub struct Event {
    pub kind: EventKind,
    pub literal: Option<Literal>,
    pub old: Option<TruthValue>,
    pub new: Option<TruthValue>,
    pub clause: Option<ClauseId>,
}

impl Event {
    pub fn new(kind: EventKind) -> Self {
        Event {
            kind,
            literal: None,
            old: None,
            new: None,
            clause: None,
        }
    }

    pub fn literal(mut self, lit: Literal) -> Self {
        self.literal = Some(lit);
        self
    }

    pub fn change(mut self, old: TruthValue, new: TruthValue) -> Self {
        self.old = Some(old);
        self.new = Some(new);
        self
    }

    pub fn value(mut self, new: TruthValue) -> Self {
        self.new = Some(new);
        self
    }

    pub fn clause(mut self, id: ClauseId) -> Self {
        self.clause = Some(id);
        self
    }
}

/// Work counter and optional trace for one solver run.
#[derive(Debug, Default)]
pub struct RunLog {
    ops: AtomicU64,
    trace: Option<Mutex<Vec<TraceEvent>>>,
}

impl RunLog {
    pub fn new(tracing: bool) -> Self {
        RunLog {
            ops: AtomicU64::new(0),
            trace: tracing.then(|| Mutex::new(Vec::new())),
        }
    }

    pub fn ops(&self) -> u64 {
        self.ops.load(Ordering::Relaxed)
    }

    pub fn count_op(&self) {
        self.ops.fetch_add(1, Ordering::Relaxed);
    }

    pub fn is_tracing(&self) -> bool {
        self.trace.is_some()
    }

    pub fn record(&self, event: Event) {
        if let Some(trace) = &self.trace {
            let mut trace = trace.lock().expect("trace lock poisoned");
            let step = trace.len() as u64;
            trace.push(TraceEvent {
                step,
                kind: event.kind,
                literal: event.literal,
                old: event.old,
                new: event.new,
                clause: event.clause,
                counter: self.ops(),
            });
        }
    }

    pub fn events(&self) -> Vec<TraceEvent> {
        self.trace
            .as_ref()
            .map(|t| t.lock().expect("trace lock poisoned").clone())
            .unwrap_or_default()
    }

    pub fn event_count(&self) -> usize {
        self.trace
            .as_ref()
            .map_or(0, |t| t.lock().expect("trace lock poisoned").len())
    }
}

/// JSON-lines rendering of a trace.
pub fn trace_to_jsonl(events: &[TraceEvent]) -> String {
    let mut out = String::new();
    for e in events {
        out.push_str(&serde_json::to_string(e).expect("trace events serialize"));
        out.push('\n');
    }
    out
}
