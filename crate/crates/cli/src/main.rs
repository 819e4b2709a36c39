//! `usat`: solve DIMACS files, query the oracles, and run the differential
//! harness from the shell.
//!
//! Exit codes: 10 satisfiable, 20 unsatisfiable, 30 solver anomaly, 1 usage
//! or input error, 0 for harness commands that complete.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use understanding_sat::cnf::Instance;
use understanding_sat::dimacs::parse_dimacs;
use understanding_sat::engine::trace_to_jsonl;
use understanding_sat::harness::{
    bench_samples, diff_run, fit_complexity, gen::fuzz_specs, minimize, samples_csv,
    CounterexampleRecord, DiffConfig, DiffReport, DiffSource, Execution,
};
use understanding_sat::oracle::{brute_force, dpll, Verdict};
use understanding_sat::solver::{solve_run, ClauseOrder, SolveConfig, SolverOutcome};

const SEED_ENV: &str = "UNDERSTANDING_SAT_SEED";

const EXIT_SAT: u8 = 10;
const EXIT_UNSAT: u8 = 20;
const EXIT_ANOMALY: u8 = 30;
const EXIT_USAGE: u8 = 1;

#[derive(Parser, Debug)]
#[command(
    name = "usat",
    version,
    about = "Understanding-based 3SAT solver and test harness"
)]
struct Cli {
    /// Suppress diagnostics on stderr.
    #[arg(long, short, global = true)]
    quiet: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide a DIMACS file with the understanding solver.
    Solve {
        file: PathBuf,
        /// `input`, or `perm:<seed>` for a seeded shuffle of the clauses.
        #[arg(long, default_value = "input", value_parser = parse_order)]
        order: ClauseOrder,
        /// Complete free variables with true instead of false.
        #[arg(long)]
        default_free: bool,
        /// Write the event trace as JSON lines to this file.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Print the outcome as JSON instead of `s`/`v` lines.
        #[arg(long)]
        json: bool,
    },
    /// Decide a DIMACS file with an oracle.
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Dpll)]
        method: Method,
    },
    /// Random instances, solver against oracle.
    Fuzz {
        /// Variable count `N` or inclusive range `A..B`.
        #[arg(long, value_parser = parse_vars)]
        vars: VarRange,
        /// Clause-to-variable ratios, comma separated.
        #[arg(long, value_delimiter = ',', default_values_t = [2.0, 4.27, 6.0])]
        ratio: Vec<f64>,
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Every small instance, solver against oracle.
    Enumerate {
        #[arg(long, default_value_t = 3)]
        max_vars: u32,
        #[arg(long, default_value_t = 4)]
        max_clauses: usize,
        #[command(flatten)]
        report: ReportArgs,
    },
    /// Shrink a counterexample record to a 1-minimal one.
    Minimize {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Operation counts over growing random instances, with a log-log fit.
    Bench {
        #[arg(long, value_delimiter = ',', default_values_t = [20, 40, 80, 160])]
        sizes: Vec<usize>,
        #[arg(long, default_value_t = 4.0)]
        ratio: f64,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Instances per size.
        #[arg(long, default_value_t = 8)]
        reps: usize,
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(clap::Args, Debug)]
struct ReportArgs {
    /// JSON-lines report, one record per instance.
    #[arg(long)]
    out: PathBuf,
    /// CSV summary; defaults to the report path with a `.csv` extension.
    #[arg(long)]
    summary: Option<PathBuf>,
    /// Directory for counterexample records; defaults to `<out>.cex`.
    #[arg(long)]
    cex_dir: Option<PathBuf>,
    /// Keep counterexamples as found.
    #[arg(long)]
    no_minimize: bool,
    /// Process instances one at a time.
    #[arg(long)]
    sequential: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Method {
    Brute,
    Dpll,
}

#[derive(Clone, Copy, Debug)]
struct VarRange(u32, u32);

fn parse_order(s: &str) -> Result<ClauseOrder, String> {
    match s {
        "input" => Ok(ClauseOrder::Input),
        _ => s
            .strip_prefix("perm:")
            .and_then(|seed| seed.parse().ok())
            .map(ClauseOrder::Permuted)
            .ok_or_else(|| format!("expected `input` or `perm:<seed>`, got `{s}`")),
    }
}

fn parse_vars(s: &str) -> Result<VarRange, String> {
    let bad = || format!("expected `N` or `A..B`, got `{s}`");
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.parse().map_err(|_| bad())?, b.parse().map_err(|_| bad())?),
        None => {
            let n = s.parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if lo < 3 || lo > hi {
        return Err(format!("variable range `{s}` must satisfy 3 <= A <= B"));
    }
    Ok(VarRange(lo, hi))
}

/// `--seed`, unless the environment overrides it.
fn effective_seed(flag: u64) -> Result<u64> {
    match std::env::var(SEED_ENV) {
        Ok(v) => v
            .trim()
            .parse()
            .with_context(|| format!("{SEED_ENV}={v} is not a 64-bit unsigned integer")),
        Err(_) => Ok(flag),
    }
}

fn read_instance(path: &Path) -> Result<Instance> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_dimacs(&text).with_context(|| format!("parsing {}", path.display()))
}

fn model_line(values: &[i32]) -> String {
    let mut line = String::from("v");
    for v in values {
        line.push(' ');
        line.push_str(&v.to_string());
    }
    line.push_str(" 0");
    line
}

struct Ctx {
    quiet: bool,
}

impl Ctx {
    fn note(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }
}

fn run_solve(
    ctx: &Ctx,
    file: &Path,
    cfg: SolveConfig,
    trace: Option<&Path>,
    json: bool,
) -> Result<u8> {
    let inst = read_instance(file)?;
    if inst.dedup_count() > 0 {
        ctx.note(format!(
            "c dropped {} duplicate clauses",
            inst.dedup_count()
        ));
    }
    let run = solve_run(&inst, &cfg);
    if let Some(path) = trace {
        fs::write(path, trace_to_jsonl(&run.trace))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if json {
        println!("{}", serde_json::to_string(&run.outcome)?);
    }
    let code = match &run.outcome {
        SolverOutcome::Sat { assignment, .. } => {
            if !json {
                println!("s SATISFIABLE");
                println!(
                    "{}",
                    model_line(&assignment.model_literals(inst.variable_count()))
                );
            }
            EXIT_SAT
        }
        SolverOutcome::Unsat { failing_clause } => {
            if !json {
                println!("s UNSATISFIABLE");
            }
            ctx.note(format!(
                "c no literal of clause {failing_clause} could be freed"
            ));
            EXIT_UNSAT
        }
        SolverOutcome::Anomaly { kind, detail, .. } => {
            if !json {
                println!("s UNKNOWN");
            }
            ctx.note(format!("c anomaly {kind:?}: {detail}"));
            EXIT_ANOMALY
        }
    };
    ctx.note(format!("c ops {}", run.ops));
    Ok(code)
}

fn run_oracle(ctx: &Ctx, file: &Path, method: Method) -> Result<u8> {
    let inst = read_instance(file)?;
    let verdict = match method {
        Method::Brute => brute_force(&inst)?,
        Method::Dpll => dpll(&inst),
    };
    ctx.note(format!(
        "c {:?} visited {} nodes",
        verdict.method, verdict.nodes
    ));
    Ok(match &verdict.verdict {
        Verdict::Sat { model } => {
            println!("s SATISFIABLE");
            println!(
                "{}",
                model_line(&model.model_literals(inst.variable_count()))
            );
            EXIT_SAT
        }
        Verdict::Unsat => {
            println!("s UNSATISFIABLE");
            EXIT_UNSAT
        }
    })
}

fn write_report(ctx: &Ctx, report: &DiffReport, args: &ReportArgs) -> Result<()> {
    fs::write(&args.out, report.to_jsonl())
        .with_context(|| format!("writing {}", args.out.display()))?;
    let summary = args
        .summary
        .clone()
        .unwrap_or_else(|| args.out.with_extension("csv"));
    fs::write(&summary, report.summary_csv())
        .with_context(|| format!("writing {}", summary.display()))?;

    if !report.counterexamples.is_empty() {
        let dir = args.cex_dir.clone().unwrap_or_else(|| {
            let mut name = args.out.clone().into_os_string();
            name.push(".cex");
            PathBuf::from(name)
        });
        fs::create_dir_all(&dir).with_context(|| format!("creating {}", dir.display()))?;
        for (entry, rec) in report
            .entries
            .iter()
            .filter_map(|e| e.counterexample.map(|i| (e, &report.counterexamples[i])))
        {
            let path = dir.join(format!("{:06}.json", entry.index));
            fs::write(&path, serde_json::to_string_pretty(rec)? + "\n")
                .with_context(|| format!("writing {}", path.display()))?;
        }
        ctx.note(format!(
            "c {} counterexamples in {}",
            report.counterexamples.len(),
            dir.display()
        ));
    }
    let counts: Vec<String> = report
        .counts()
        .iter()
        .map(|(k, v)| format!("{k:?}={v}"))
        .collect();
    ctx.note(format!(
        "c {} instances: {}",
        report.len(),
        counts.join(" ")
    ));
    Ok(())
}

fn diff_config(args: &ReportArgs) -> DiffConfig {
    DiffConfig {
        minimize: !args.no_minimize,
        execution: if args.sequential {
            Execution::Sequential
        } else {
            Execution::Parallel
        },
        ..DiffConfig::default()
    }
}

fn run(cli: Cli) -> Result<u8> {
    let ctx = Ctx { quiet: cli.quiet };
    match cli.command {
        Command::Solve {
            file,
            order,
            default_free,
            trace,
            json,
        } => {
            let cfg = SolveConfig {
                clause_order: order,
                default_free,
                trace: trace.is_some(),
                ..SolveConfig::default()
            };
            run_solve(&ctx, &file, cfg, trace.as_deref(), json)
        }
        Command::Oracle { file, method } => run_oracle(&ctx, &file, method),
        Command::Fuzz {
            vars,
            ratio,
            count,
            seed,
            report,
        } => {
            let seed = effective_seed(seed)?;
            let vars: Vec<u32> = (vars.0..=vars.1).collect();
            let specs = fuzz_specs(&vars, &ratio, count, seed);
            ctx.note(format!("c fuzz seed {seed}"));
            let result = diff_run(&DiffSource::Specs(specs), &diff_config(&report))?;
            write_report(&ctx, &result, &report)?;
            Ok(0)
        }
        Command::Enumerate {
            max_vars,
            max_clauses,
            report,
        } => {
            let source = DiffSource::Enumeration {
                max_n: max_vars,
                max_m: max_clauses,
            };
            let result = diff_run(&source, &diff_config(&report))?;
            write_report(&ctx, &result, &report)?;
            Ok(0)
        }
        Command::Minimize { input, out } => {
            let text = fs::read_to_string(&input)
                .with_context(|| format!("reading {}", input.display()))?;
            let rec: CounterexampleRecord = serde_json::from_str(&text)
                .with_context(|| format!("parsing {}", input.display()))?;
            if !rec.is_consistent() {
                bail!(
                    "{} does not describe a mismatch of kind {:?}",
                    input.display(),
                    rec.kind
                );
            }
            let cfg = DiffConfig::default();
            let min = minimize(&rec, cfg.solver, cfg.brute_limit);
            if !min.minimized {
                ctx.note("c record no longer replays; written unchanged");
            }
            fs::write(&out, serde_json::to_string_pretty(&min)? + "\n")
                .with_context(|| format!("writing {}", out.display()))?;
            Ok(0)
        }
        Command::Bench {
            sizes,
            ratio,
            seed,
            reps,
            out,
        } => {
            let seed = effective_seed(seed)?;
            let samples = bench_samples(&sizes, ratio, reps, seed, Execution::Parallel)?;
            fs::write(&out, samples_csv(&samples))
                .with_context(|| format!("writing {}", out.display()))?;
            match fit_complexity(&samples) {
                Ok(fit) => println!("{}", serde_json::to_string(&fit)?),
                Err(e) => ctx.note(format!("c no fit: {e}")),
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
