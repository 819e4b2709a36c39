//! Problem representation: variables, literals, 3-literal clauses, instances
//! and (possibly partial) truth assignments.

use std::collections::{BTreeMap, HashSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::CnfError;

/// A Boolean variable, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Variable(u32);

impl Variable {
    /// Panics on zero; variable ids are 1-based.
    pub fn new(id: u32) -> Self {
        assert!(id >= 1, "variable ids start at 1");
        Variable(id)
    }

    pub fn id(self) -> u32 {
        self.0
    }

    /// Zero-based slot, handy for dense per-variable tables.
    pub fn index(self) -> usize {
        (self.0 - 1) as usize
    }

    pub fn positive(self) -> Literal {
        Literal::new(self, true)
    }

    pub fn negative(self) -> Literal {
        Literal::new(self, false)
    }
}

/// A variable or its negation.
///
/// Packed as `2 * (var - 1) + neg`, so the two literals of one variable are
/// adjacent and `code ^ 1` is the negation.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Literal(u32);

impl Literal {
    pub fn new(var: Variable, positive: bool) -> Self {
        Literal(2 * (var.0 - 1) + u32::from(!positive))
    }

    /// From a nonzero DIMACS integer.
    pub fn from_dimacs(lit: i32) -> Self {
        assert!(lit != 0, "0 is not a literal");
        Literal::new(Variable::new(lit.unsigned_abs()), lit > 0)
    }

    pub fn from_code(code: usize) -> Self {
        Literal(code as u32)
    }

    pub fn code(self) -> usize {
        self.0 as usize
    }

    pub fn var(self) -> Variable {
        Variable(self.0 / 2 + 1)
    }

    pub fn is_positive(self) -> bool {
        self.0 & 1 == 0
    }

    pub fn negate(self) -> Self {
        Literal(self.0 ^ 1)
    }

    pub fn to_dimacs(self) -> i32 {
        let v = self.var().0 as i32;
        if self.is_positive() {
            v
        } else {
            -v
        }
    }
}

impl std::ops::Not for Literal {
    type Output = Literal;
    fn not(self) -> Literal {
        self.negate()
    }
}

impl fmt::Debug for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_positive() {
            write!(f, "x{}", self.var().0)
        } else {
            write!(f, "~x{}", self.var().0)
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_dimacs())
    }
}

impl Serialize for Literal {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_i32(self.to_dimacs())
    }
}

impl<'de> Deserialize<'de> for Literal {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = i32::deserialize(d)?;
        if raw == 0 {
            return Err(serde::de::Error::custom("0 is not a literal"));
        }
        Ok(Literal::from_dimacs(raw))
    }
}

/// Position of a clause in its instance.
pub type ClauseId = usize;

/// Exactly three pairwise-distinct literals. A variable may occur in both
/// polarities (tautological clause).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Clause {
    id: ClauseId,
    literals: [Literal; 3],
}

impl Clause {
    pub fn new(id: ClauseId, literals: [Literal; 3]) -> Result<Self, CnfError> {
        let [a, b, c] = literals;
        if a == b || a == c || b == c {
            return Err(CnfError::RepeatedLiteral { clause: id });
        }
        Ok(Clause { id, literals })
    }

    pub fn id(&self) -> ClauseId {
        self.id
    }

    pub fn literals(&self) -> &[Literal; 3] {
        &self.literals
    }

    pub fn contains(&self, lit: Literal) -> bool {
        self.literals.contains(&lit)
    }

    /// The two literals other than `focus`, in clause order.
    pub fn context(&self, focus: Literal) -> Option<[Literal; 2]> {
        let pos = self.literals.iter().position(|&l| l == focus)?;
        let mut out = [focus; 2];
        let mut k = 0;
        for (i, &l) in self.literals.iter().enumerate() {
            if i != pos {
                out[k] = l;
                k += 1;
            }
        }
        Some(out)
    }

    /// Literal set in canonical (sorted) order, used for duplicate detection.
    pub fn key(&self) -> [Literal; 3] {
        let mut k = self.literals;
        k.sort_unstable();
        k
    }

    pub fn is_tautological(&self) -> bool {
        let [a, b, c] = self.literals;
        a.var() == b.var() || a.var() == c.var() || b.var() == c.var()
    }

    /// True iff at least one literal is true under `value`.
    pub fn satisfied_by(&self, mut value: impl FnMut(Literal) -> bool) -> bool {
        self.literals.iter().any(|&l| value(l))
    }
}

/// A 3SAT instance. Clause ids are dense `0..m` in input order, and no two
/// clauses share a literal set. Equality ignores how many duplicates were
/// dropped while building it.
#[derive(Debug, Clone, Default)]
pub struct Instance {
    variable_count: u32,
    clauses: Vec<Clause>,
    dedup_count: usize,
}

impl PartialEq for Instance {
    fn eq(&self, other: &Self) -> bool {
        self.variable_count == other.variable_count && self.clauses == other.clauses
    }
}

impl Eq for Instance {}

impl Instance {
    /// Builds an instance from raw literal triples, dropping duplicate clauses.
    pub fn new(
        variable_count: u32,
        triples: impl IntoIterator<Item = [Literal; 3]>,
    ) -> Result<Self, CnfError> {
        let mut inst = Instance {
            variable_count,
            clauses: Vec::new(),
            dedup_count: 0,
        };
        let mut seen = HashSet::new();
        for (raw_index, lits) in triples.into_iter().enumerate() {
            for l in lits {
                if l.var().id() > variable_count {
                    return Err(CnfError::VariableOutOfRange {
                        var: l.var().id(),
                        declared: variable_count,
                        clause: raw_index,
                    });
                }
            }
            let clause = Clause::new(inst.clauses.len(), lits)?;
            if seen.insert(clause.key()) {
                inst.clauses.push(clause);
            } else {
                inst.dedup_count += 1;
            }
        }
        Ok(inst)
    }

    /// Convenience constructor from DIMACS integers.
    pub fn from_dimacs(variable_count: u32, clauses: &[[i32; 3]]) -> Result<Self, CnfError> {
        Instance::new(
            variable_count,
            clauses.iter().map(|c| c.map(Literal::from_dimacs)),
        )
    }

    pub fn variable_count(&self) -> u32 {
        self.variable_count
    }

    pub fn clauses(&self) -> &[Clause] {
        &self.clauses
    }

    pub fn clause(&self, id: ClauseId) -> &Clause {
        &self.clauses[id]
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn dedup_count(&self) -> usize {
        self.dedup_count
    }

    pub fn variables(&self) -> impl Iterator<Item = Variable> {
        (1..=self.variable_count).map(Variable::new)
    }

    /// Same variable count, keeping only the clauses at `keep` (renumbered densely).
    pub fn subset(&self, keep: impl IntoIterator<Item = ClauseId>) -> Instance {
        let triples: Vec<_> = keep
            .into_iter()
            .map(|id| self.clauses[id].literals)
            .collect();
        Instance::new(self.variable_count, triples).expect("subset of a valid instance is valid")
    }

    pub fn literal_triples(&self) -> impl Iterator<Item = [Literal; 3]> + '_ {
        self.clauses.iter().map(|c| c.literals)
    }
}

/// Truth assignment over variables, possibly partial. Unassigned variables
/// evaluate to `default_free`.
///
/// Serialized as `{"literals": [1, -2, ...], "default_free": false}` listing
/// the assigned variables as signed literals.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(into = "AssignmentRepr", try_from = "AssignmentRepr")]
pub struct Assignment {
    values: BTreeMap<Variable, bool>,
    default_free: bool,
}

impl Assignment {
    pub fn new(default_free: bool) -> Self {
        Assignment {
            values: BTreeMap::new(),
            default_free,
        }
    }

    /// Total assignment from a dense vector (`values[i]` is variable `i + 1`).
    pub fn from_bits(values: &[bool]) -> Self {
        let mut a = Assignment::new(false);
        for (i, &b) in values.iter().enumerate() {
            a.set(Variable::new(i as u32 + 1), b);
        }
        a
    }

    pub fn set(&mut self, var: Variable, value: bool) {
        self.values.insert(var, value);
    }

    pub fn get(&self, var: Variable) -> Option<bool> {
        self.values.get(&var).copied()
    }

    pub fn default_free(&self) -> bool {
        self.default_free
    }

    /// Value of `var` after completing with `default_free`.
    pub fn value(&self, var: Variable) -> bool {
        self.get(var).unwrap_or(self.default_free)
    }

    pub fn literal_true(&self, lit: Literal) -> bool {
        self.value(lit.var()) == lit.is_positive()
    }

    pub fn assigned(&self) -> impl Iterator<Item = (Variable, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }

    /// `v` line payload: one signed literal per variable in `1..=n`, completed
    /// by `default_free`.
    pub fn model_literals(&self, variable_count: u32) -> Vec<i32> {
        (1..=variable_count)
            .map(|id| {
                let v = Variable::new(id);
                if self.value(v) {
                    id as i32
                } else {
                    -(id as i32)
                }
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct AssignmentRepr {
    literals: Vec<i32>,
    default_free: bool,
}

impl From<Assignment> for AssignmentRepr {
    fn from(a: Assignment) -> Self {
        AssignmentRepr {
            literals: a
                .assigned()
                .map(|(v, b)| if b { v.id() as i32 } else { -(v.id() as i32) })
                .collect(),
            default_free: a.default_free,
        }
    }
}

impl TryFrom<AssignmentRepr> for Assignment {
    type Error = String;

    fn try_from(r: AssignmentRepr) -> Result<Self, String> {
        let mut a = Assignment::new(r.default_free);
        for l in r.literals {
            if l == 0 {
                return Err("literal 0 in assignment".into());
            }
            a.set(Variable::new(l.unsigned_abs()), l > 0);
        }
        Ok(a)
    }
}

/// Result of evaluating an assignment against an instance.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Evaluation {
    Satisfied,
    Falsified(Vec<ClauseId>),
}

impl Evaluation {
    pub fn is_satisfied(&self) -> bool {
        matches!(self, Evaluation::Satisfied)
    }
}

/// Checks every clause for a true literal; lists every all-false clause.
pub fn evaluate(inst: &Instance, assignment: &Assignment) -> Result<Evaluation, CnfError> {
    if let Some((var, _)) = assignment
        .assigned()
        .find(|(v, _)| v.id() > inst.variable_count())
    {
        return Err(CnfError::UnknownVariable {
            var: var.id(),
            declared: inst.variable_count(),
        });
    }
    let falsified: Vec<ClauseId> = inst
        .clauses()
        .iter()
        .filter(|c| !c.satisfied_by(|l| assignment.literal_true(l)))
        .map(Clause::id)
        .collect();
    Ok(if falsified.is_empty() {
        Evaluation::Satisfied
    } else {
        Evaluation::Falsified(falsified)
    })
}
