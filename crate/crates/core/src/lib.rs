//! An understanding-based 3SAT decision procedure, built to be checked.
//!
//! The solver ([`solver::solve`]) admits clauses one at a time and maintains
//! a three-valued *understanding* of every literal through a worklist
//! fixpoint over *concepts* (a clause seen from one of its literals). When an
//! incoming clause has only false literals, Algorithm D tries to rewrite the
//! understanding so one of them becomes free, using Algorithm G to test
//! whether a literal can be made true locally.
//!
//! The crate also ships the means to adjudicate that procedure: exhaustive
//! and DPLL oracles ([`oracle`]), instance generators, a differential runner,
//! counterexample minimization and an operation-count complexity fit
//! ([`harness`]).

pub mod algorithms;
pub mod cnf;
pub mod dimacs;
pub mod engine;
pub mod error;
pub mod fixtures;
pub mod harness;
pub mod oracle;
pub mod solver;

pub use cnf::{evaluate, Assignment, Clause, ClauseId, Evaluation, Instance, Literal, Variable};
pub use dimacs::{emit_dimacs, parse_dimacs};
pub use error::CnfError;
pub use solver::{solve, solve_run, ClauseOrder, SolveConfig, SolverOutcome};
