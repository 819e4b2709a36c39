//! DIMACS CNF reader and writer restricted to 3SAT.

use std::fmt::Write as _;

use crate::cnf::{Instance, Literal};
use crate::error::CnfError;

/// Parses DIMACS CNF text. Literals repeated inside a clause collapse; a clause
/// must end up with exactly three distinct literals. Repeated clauses are
/// dropped and counted in [`Instance::dedup_count`].
pub fn parse_dimacs(text: &str) -> Result<Instance, CnfError> {
    let mut declared: Option<u32> = None;
    let mut triples = Vec::new();
    let mut current: Vec<Literal> = Vec::new();
    let mut clause_line = 0;

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        if line.starts_with('%') {
            break;
        }
        if line.starts_with('p') {
            if declared.is_some() {
                return Err(header_err(line_no, "duplicate header"));
            }
            declared = Some(parse_header(line, line_no)?);
            continue;
        }
        let n = declared.ok_or(CnfError::MissingHeader)?;
        for tok in line.split_whitespace() {
            let value: i64 = tok.parse().map_err(|_| CnfError::InvalidToken {
                line: line_no,
                token: tok.to_string(),
            })?;
            if current.is_empty() && value != 0 {
                clause_line = line_no;
            }
            if value == 0 {
                if current.is_empty() {
                    return Err(CnfError::EmptyClause { line: line_no });
                }
                if current.len() != 3 {
                    return Err(CnfError::WrongClauseWidth {
                        line: clause_line,
                        distinct: current.len(),
                    });
                }
                triples.push([current[0], current[1], current[2]]);
                current.clear();
                continue;
            }
            let var = value.unsigned_abs();
            if var > u64::from(n) {
                return Err(CnfError::DimacsVariableOutOfRange {
                    line: line_no,
                    var: var.min(u64::from(u32::MAX)) as u32,
                    declared: n,
                });
            }
            let lit = Literal::from_dimacs(value as i32);
            if !current.contains(&lit) {
                current.push(lit);
            }
        }
    }

    let n = declared.ok_or(CnfError::MissingHeader)?;
    if !current.is_empty() {
        return Err(CnfError::UnterminatedClause { line: clause_line });
    }
    Instance::new(n, triples)
}

fn header_err(line: usize, reason: &str) -> CnfError {
    CnfError::MalformedHeader {
        line,
        reason: reason.to_string(),
    }
}

fn parse_header(line: &str, line_no: usize) -> Result<u32, CnfError> {
    let fields: Vec<&str> = line.split_whitespace().collect();
    match fields.as_slice() {
        ["p", "cnf", n, m] => {
            let n = n
                .parse::<u32>()
                .map_err(|_| header_err(line_no, "variable count is not a non-negative integer"))?;
            m.parse::<u64>()
                .map_err(|_| header_err(line_no, "clause count is not a non-negative integer"))?;
            Ok(n)
        }
        _ => Err(header_err(line_no, "expected `p cnf <vars> <clauses>`")),
    }
}

/// Writes `p cnf n m` followed by one `a b c 0` line per clause.
pub fn emit_dimacs(inst: &Instance) -> String {
    let mut out = String::with_capacity(16 + inst.len() * 12);
    writeln!(out, "p cnf {} {}", inst.variable_count(), inst.len()).unwrap();
    for clause in inst.clauses() {
        let [a, b, c] = clause.literals();
        writeln!(out, "{a} {b} {c} 0").unwrap();
    }
    out
}
