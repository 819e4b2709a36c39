use thiserror::Error;

use crate::cnf::ClauseId;

/// Problems with instance construction, DIMACS input, or assignments.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CnfError {
    #[error("line {line}: malformed header: {reason}")]
    MalformedHeader { line: usize, reason: String },
    #[error("missing `p cnf` header")]
    MissingHeader,
    #[error("line {line}: invalid token `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: clause has {distinct} distinct literals, expected 3")]
    WrongClauseWidth { line: usize, distinct: usize },
    #[error("line {line}: empty clause")]
    EmptyClause { line: usize },
    #[error("line {line}: clause is not terminated by 0")]
    UnterminatedClause { line: usize },
    #[error("line {line}: variable {var} exceeds declared count {declared}")]
    DimacsVariableOutOfRange {
        line: usize,
        var: u32,
        declared: u32,
    },
    #[error("clause {clause}: variable {var} exceeds declared count {declared}")]
    VariableOutOfRange {
        var: u32,
        declared: u32,
        clause: ClauseId,
    },
    #[error("clause {clause}: repeated literal")]
    RepeatedLiteral { clause: ClauseId },
    #[error("assignment references variable {var}, instance declares {declared}")]
    UnknownVariable { var: u32, declared: u32 },
}
