//! Three-valued understandings over literals, concepts and their
//! classification, and the recomputation fixpoint.

pub mod concept;
pub mod overlay;
pub mod state;
pub mod trace;
pub mod truth;

pub use concept::{
    classify_pair, concept_set_type, concept_type, Concept, ConceptId, ConceptSetType,
    ConceptStore, ConceptType,
};
pub use overlay::ConstraintOverlay;
pub use state::{AddConceptError, Contradiction, EngineState, Reevaluation, UndefinedReason};
pub use trace::{trace_to_jsonl, Event, EventKind, RunLog, TraceEvent};
pub use truth::{TruthValue, Understanding};
