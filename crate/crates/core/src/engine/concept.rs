//! Concepts (a clause seen from one of its literals) and their indices.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::cnf::{ClauseId, Literal};
use crate::engine::truth::{TruthValue, Understanding};

/// Dense handle into a [`ConceptStore`].
pub type ConceptId = usize;

/// The context of `focus` in clause `origin`: the clause's two other literals.
/// Identity is `(origin, focus)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Concept {
    pub origin: ClauseId,
    pub focus: Literal,
    pub members: [Literal; 2],
}

impl Concept {
    /// All three literals of the originating clause.
    pub fn clause_literals(&self) -> [Literal; 3] {
        [self.focus, self.members[0], self.members[1]]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConceptType {
    /// Neither member is true.
    Plus,
    /// At least one member is true.
    Star,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum ConceptSetType {
    /// Every element is of type [`ConceptType::Star`].
    Star,
    /// Some element is of type [`ConceptType::Plus`].
    Plus,
}

/// Classifies an unordered pair of member values.
pub fn classify_pair(a: TruthValue, b: TruthValue) -> ConceptType {
    use TruthValue::*;
    match (a, b) {
        (Free, Free) | (False, False) | (Free, False) | (False, Free) => ConceptType::Plus,
        (True, True) | (Free, True) | (True, Free) | (True, False) | (False, True) => {
            ConceptType::Star
        }
    }
}

pub fn concept_type(c: &Concept, u: &Understanding) -> ConceptType {
    classify_pair(u.value(c.members[0]), u.value(c.members[1]))
}

/// `None` for the empty set; callers decide what emptiness means.
pub fn concept_set_type<'a>(
    concepts: impl IntoIterator<Item = &'a Concept>,
    u: &Understanding,
) -> Option<ConceptSetType> {
    let mut any = false;
    for c in concepts {
        any = true;
        if concept_type(c, u) == ConceptType::Plus {
            return Some(ConceptSetType::Plus);
        }
    }
    any.then_some(ConceptSetType::Star)
}

/// All admitted concepts, indexed by focus literal and by member literal.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConceptStore {
    concepts: Vec<Concept>,
    by_key: BTreeMap<(ClauseId, Literal), ConceptId>,
    /// Per literal code, ascending by origin clause.
    by_focus: Vec<Vec<ConceptId>>,
    /// Per literal code, in insertion order.
    by_member: Vec<Vec<ConceptId>>,
}

impl ConceptStore {
    pub fn new(variable_count: u32) -> Self {
        let lits = 2 * variable_count as usize;
        ConceptStore {
            concepts: Vec::new(),
            by_key: BTreeMap::new(),
            by_focus: vec![Vec::new(); lits],
            by_member: vec![Vec::new(); lits],
        }
    }

    pub fn len(&self) -> usize {
        self.concepts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.concepts.is_empty()
    }

    pub fn get(&self, id: ConceptId) -> &Concept {
        &self.concepts[id]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Concept> {
        self.concepts.iter()
    }

    pub fn contains(&self, origin: ClauseId, focus: Literal) -> bool {
        self.by_key.contains_key(&(origin, focus))
    }

    /// Returns `None` if the concept is already present.
    pub fn insert(&mut self, concept: Concept) -> Option<ConceptId> {
        let key = (concept.origin, concept.focus);
        if self.by_key.contains_key(&key) {
            return None;
        }
        let id = self.concepts.len();
        self.concepts.push(concept);
        self.by_key.insert(key, id);
        let focus_list = &mut self.by_focus[concept.focus.code()];
        let pos = focus_list.partition_point(|&other| self.concepts[other].origin < concept.origin);
        focus_list.insert(pos, id);
        for m in concept.members {
            self.by_member[m.code()].push(id);
        }
        Some(id)
    }

    /// Undoes the most recent [`insert`](Self::insert).
    pub fn remove_last(&mut self) -> Option<Concept> {
        let concept = self.concepts.pop()?;
        let id = self.concepts.len();
        self.by_key.remove(&(concept.origin, concept.focus));
        self.by_focus[concept.focus.code()].retain(|&c| c != id);
        for m in concept.members {
            self.by_member[m.code()].retain(|&c| c != id);
        }
        Some(concept)
    }

    /// The concept set of `lit`, ascending by origin clause.
    pub fn focused_on(&self, lit: Literal) -> impl Iterator<Item = &Concept> + '_ {
        self.by_focus[lit.code()]
            .iter()
            .map(move |&id| &self.concepts[id])
    }

    pub fn focused_ids(&self, lit: Literal) -> &[ConceptId] {
        &self.by_focus[lit.code()]
    }

    /// Concepts that list `lit` as a member.
    pub fn with_member(&self, lit: Literal) -> impl Iterator<Item = &Concept> + '_ {
        self.by_member[lit.code()]
            .iter()
            .map(move |&id| &self.concepts[id])
    }

    /// Plus-typed concepts of `!lit`, ascending by origin clause. Derived on
    /// demand from the current understanding.
    pub fn negative_set<'a>(
        &'a self,
        lit: Literal,
        u: &'a Understanding,
    ) -> impl Iterator<Item = &'a Concept> + 'a {
        self.focused_on(!lit)
            .filter(move |c| concept_type(c, u) == ConceptType::Plus)
    }

    pub fn set_type(&self, lit: Literal, u: &Understanding) -> Option<ConceptSetType> {
        concept_set_type(self.focused_on(lit), u)
    }

    /// Store holding only the concepts accepted by `keep`, in original
    /// insertion order.
    pub fn filtered(&self, mut keep: impl FnMut(&Concept) -> bool) -> ConceptStore {
        let mut out = ConceptStore::new((self.by_focus.len() / 2) as u32);
        for c in &self.concepts {
            if keep(c) {
                out.insert(*c);
            }
        }
        out
    }

    /// Index consistency check used by tests.
    pub fn indices_consistent(&self) -> bool {
        let focus_ok = self.by_focus.iter().enumerate().all(|(code, ids)| {
            ids.iter().all(|&id| self.concepts[id].focus.code() == code)
                && ids
                    .windows(2)
                    .all(|w| self.concepts[w[0]].origin < self.concepts[w[1]].origin)
        });
        let member_ok = self.by_member.iter().enumerate().all(|(code, ids)| {
            ids.iter()
                .all(|&id| self.concepts[id].members.iter().any(|m| m.code() == code))
        });
        let counts_ok = self.by_focus.iter().map(Vec::len).sum::<usize>() == self.concepts.len()
            && self.by_member.iter().map(Vec::len).sum::<usize>() == 2 * self.concepts.len()
            && self.by_key.len() == self.concepts.len();
        focus_ok && member_ok && counts_ok
    }
}
