use std::fmt;

use serde::{Deserialize, Serialize};

use crate::cnf::{Literal, Variable};

/// Three-valued literal status: true, false, or free.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
pub enum TruthValue {
    #[serde(rename = "t")]
    True,
    #[serde(rename = "f")]
    False,
    #[default]
    #[serde(rename = "e")]
    Free,
}

impl TruthValue {
    /// Value of the complementary literal.
    pub fn negate(self) -> Self {
        match self {
            TruthValue::True => TruthValue::False,
            TruthValue::False => TruthValue::True,
            TruthValue::Free => TruthValue::Free,
        }
    }

    pub fn from_bool(b: bool) -> Self {
        if b {
            TruthValue::True
        } else {
            TruthValue::False
        }
    }

    pub fn is_true(self) -> bool {
        self == TruthValue::True
    }
}

impl fmt::Display for TruthValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TruthValue::True => "t",
            TruthValue::False => "f",
            TruthValue::Free => "e",
        })
    }
}

/// Total map from literals to [`TruthValue`].
///
/// Stored once per variable (as the value of its positive literal), so a
/// literal and its negation can never disagree.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Understanding {
    values: Vec<TruthValue>,
}

impl Understanding {
    pub fn new(variable_count: u32) -> Self {
        Understanding {
            values: vec![TruthValue::Free; variable_count as usize],
        }
    }

    pub fn variable_count(&self) -> u32 {
        self.values.len() as u32
    }

    /// Literals outside the table read as free.
    pub fn value(&self, lit: Literal) -> TruthValue {
        let v = self
            .values
            .get(lit.var().index())
            .copied()
            .unwrap_or_default();
        if lit.is_positive() {
            v
        } else {
            v.negate()
        }
    }

    pub fn var_value(&self, var: Variable) -> TruthValue {
        self.value(var.positive())
    }

    /// Sets `lit` to `value` and its negation to the complement.
    pub fn set(&mut self, lit: Literal, value: TruthValue) {
        let slot = &mut self.values[lit.var().index()];
        *slot = if lit.is_positive() {
            value
        } else {
            value.negate()
        };
    }

    /// Every literal over the table's variables, in code order.
    pub fn literals(&self) -> impl Iterator<Item = Literal> {
        (0..2 * self.values.len()).map(Literal::from_code)
    }

    /// Coupling check for the whole table; always true by construction.
    pub fn is_coupled(&self) -> bool {
        self.literals()
            .all(|l| self.value(l) == self.value(!l).negate())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn negation_coupling() {
        let mut u = Understanding::new(3);
        let x2 = Literal::from_dimacs(2);
        u.set(!x2, TruthValue::True);
        assert_eq!(u.value(x2), TruthValue::False);
        assert_eq!(u.value(!x2), TruthValue::True);
        assert_eq!(u.value(Literal::from_dimacs(-3)), TruthValue::Free);
        assert!(u.is_coupled());
        assert_eq!(u.literals().count(), 6);
    }

    #[test]
    fn serializes_as_letters() {
        let mut u = Understanding::new(2);
        u.set(Literal::from_dimacs(1), TruthValue::True);
        assert_eq!(serde_json::to_string(&u).unwrap(), r#"["t","e"]"#);
    }
}
