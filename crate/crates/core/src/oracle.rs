//! Independent ground truth: exhaustive enumeration and a plain DPLL.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cnf::{Assignment, Instance, Variable};

/// Largest variable count [`brute_force`] accepts.
pub const BRUTE_FORCE_MAX_VARS: u32 = 30;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OracleMethod {
    Brute,
    Dpll,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Sat { model: Assignment },
    Unsat,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OracleVerdict {
    pub verdict: Verdict,
    pub method: OracleMethod,
    /// Assignments (brute) or search nodes (DPLL) visited.
    pub nodes: u64,
}

impl OracleVerdict {
    pub fn is_sat(&self) -> bool {
        matches!(self.verdict, Verdict::Sat { .. })
    }

    pub fn model(&self) -> Option<&Assignment> {
        match &self.verdict {
            Verdict::Sat { model } => Some(model),
            Verdict::Unsat => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("brute force limited to {max} variables, instance has {found}")]
    TooManyVariables { max: u32, found: u32 },
}

/// Enumerates all `2^n` assignments counting up from all-zeros, variable 1
/// as the most significant bit, and returns the first model.
pub fn brute_force(inst: &Instance) -> Result<OracleVerdict, OracleError> {
    let n = inst.variable_count();
    if n > BRUTE_FORCE_MAX_VARS {
        return Err(OracleError::TooManyVariables {
            max: BRUTE_FORCE_MAX_VARS,
            found: n,
        });
    }
    // Per clause: (mask of involved bits, bits that make a literal true).
    let clauses: Vec<[(u64, u64); 3]> = inst
        .clauses()
        .iter()
        .map(|c| {
            c.literals().map(|l| {
                let bit = 1u64 << (n - l.var().id());
                (bit, if l.is_positive() { bit } else { 0 })
            })
        })
        .collect();

    let mut nodes = 0;
    for k in 0u64..(1u64 << n) {
        nodes += 1;
        let sat = clauses
            .iter()
            .all(|lits| lits.iter().any(|&(bit, want)| k & bit == want));
        if sat {
            let bits: Vec<bool> = (1..=n).map(|v| k >> (n - v) & 1 == 1).collect();
            return Ok(OracleVerdict {
                verdict: Verdict::Sat {
                    model: Assignment::from_bits(&bits),
                },
                method: OracleMethod::Brute,
                nodes,
            });
        }
    }
    Ok(OracleVerdict {
        verdict: Verdict::Unsat,
        method: OracleMethod::Brute,
        nodes,
    })
}

/// Unit propagation plus splitting on the lowest unassigned variable, true
/// first. No learning, no heuristics.
pub fn dpll(inst: &Instance) -> OracleVerdict {
    let mut values: Vec<Option<bool>> = vec![None; inst.variable_count() as usize];
    let mut nodes = 0;
    let sat = search(inst, &mut values, &mut nodes);
    let verdict = if sat {
        let mut model = Assignment::new(false);
        for (i, v) in values.iter().enumerate() {
            if let Some(b) = v {
                model.set(Variable::new(i as u32 + 1), *b);
            }
        }
        Verdict::Sat { model }
    } else {
        Verdict::Unsat
    };
    OracleVerdict {
        verdict,
        method: OracleMethod::Dpll,
        nodes,
    }
}

enum Propagation {
    Conflict,
    Done { all_satisfied: bool },
}

fn propagate(inst: &Instance, values: &mut [Option<bool>], trail: &mut Vec<usize>) -> Propagation {
    loop {
        let mut changed = false;
        let mut all_satisfied = true;
        for clause in inst.clauses() {
            let mut open = None;
            let mut open_count = 0;
            let mut satisfied = false;
            for &l in clause.literals() {
                match values[l.var().index()] {
                    Some(b) if b == l.is_positive() => {
                        satisfied = true;
                        break;
                    }
                    Some(_) => {}
                    None => {
                        open_count += 1;
                        open = Some(l);
                    }
                }
            }
            if satisfied {
                continue;
            }
            all_satisfied = false;
            match (open_count, open) {
                (0, _) => return Propagation::Conflict,
                (1, Some(unit)) => {
                    values[unit.var().index()] = Some(unit.is_positive());
                    trail.push(unit.var().index());
                    changed = true;
                }
                _ => {}
            }
        }
        if !changed {
            return Propagation::Done { all_satisfied };
        }
    }
}

fn search(inst: &Instance, values: &mut Vec<Option<bool>>, nodes: &mut u64) -> bool {
    *nodes += 1;
    let mut trail = Vec::new();
    let undo = |values: &mut Vec<Option<bool>>, trail: &[usize]| {
        for &i in trail {
            values[i] = None;
        }
    };
    match propagate(inst, values, &mut trail) {
        Propagation::Conflict => {
            undo(values, &trail);
            false
        }
        Propagation::Done {
            all_satisfied: true,
        } => true,
        Propagation::Done {
            all_satisfied: false,
        } => {
            let var = values
                .iter()
                .position(Option::is_none)
                .expect("an unsatisfied clause has an open literal");
            for choice in [true, false] {
                values[var] = Some(choice);
                if search(inst, values, nodes) {
                    return true;
                }
                values[var] = None;
            }
            undo(values, &trail);
            false
        }
    }
}

/// Brute force up to `brute_limit` variables, DPLL beyond.
pub fn decide(inst: &Instance, brute_limit: u32) -> OracleVerdict {
    if inst.variable_count() <= brute_limit.min(BRUTE_FORCE_MAX_VARS) {
        brute_force(inst).expect("within guard")
    } else {
        dpll(inst)
    }
}
