use std::collections::{BTreeMap, BTreeSet};

use crate::cnf::{Literal, Variable};
use crate::engine::truth::TruthValue;

/// Externally imposed values: pins fix a literal (and, by coupling, its
/// negation); not-true constraints forbid a literal from becoming true.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ConstraintOverlay {
    /// Pinned value of each variable's positive literal.
    pinned: BTreeMap<Variable, bool>,
    not_true: BTreeSet<Literal>,
}

/// A requested constraint clashes with one already in place.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OverlayConflict(pub Literal);

impl ConstraintOverlay {
    /// Pins `lit` true and `!lit` false.
    pub fn pin_true(&mut self, lit: Literal) -> Result<(), OverlayConflict> {
        if self.not_true.contains(&lit) {
            return Err(OverlayConflict(lit));
        }
        match self.pinned.get(&lit.var()) {
            Some(&b) if b != lit.is_positive() => Err(OverlayConflict(lit)),
            _ => {
                self.pinned.insert(lit.var(), lit.is_positive());
                Ok(())
            }
        }
    }

    pub fn forbid_true(&mut self, lit: Literal) -> Result<(), OverlayConflict> {
        if self.pinned(lit) == Some(TruthValue::True) {
            return Err(OverlayConflict(lit));
        }
        self.not_true.insert(lit);
        Ok(())
    }

    pub fn pinned(&self, lit: Literal) -> Option<TruthValue> {
        self.pinned
            .get(&lit.var())
            .map(|&b| TruthValue::from_bool(b == lit.is_positive()))
    }

    pub fn is_pinned(&self, var: Variable) -> bool {
        self.pinned.contains_key(&var)
    }

    pub fn is_not_true(&self, lit: Literal) -> bool {
        self.not_true.contains(&lit)
    }

    pub fn pins(&self) -> impl Iterator<Item = Literal> + '_ {
        self.pinned.iter().map(|(&v, &b)| Literal::new(v, b))
    }

    pub fn is_empty(&self) -> bool {
        self.pinned.is_empty() && self.not_true.is_empty()
    }

    /// Neither a pinned-true literal marked not-true, nor a split pin.
    pub fn is_consistent(&self) -> bool {
        self.not_true
            .iter()
            .all(|&l| self.pinned(l) != Some(TruthValue::True))
    }
}
