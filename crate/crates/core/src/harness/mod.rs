//! Instance generation, differential adjudication against the oracles,
//! counterexample minimization and operation-count fitting.

pub mod complexity;
pub mod diff;
pub mod enumerate;
pub mod exec;
pub mod gen;
pub mod minimize;

pub use complexity::{
    bench_samples, fit_complexity, samples_csv, ComplexityFit, ComplexitySample, FitError,
};
pub use diff::{
    adjudicate, diff_instances, diff_run, replay, CounterexampleRecord, DiffConfig, DiffEntry,
    DiffError, DiffReport, DiffSource, MismatchKind, Outcome, ReplayError, SolverFn,
};
pub use enumerate::{enumerate_small, enumeration_count, EnumerateError};
pub use exec::Execution;
pub use gen::{fuzz_specs, gen_random, GenError, GenModel, GenSpec};
pub use minimize::minimize;
