use understanding_sat::harness::{
    diff_run, enumerate_small, gen::fuzz_specs, replay, CounterexampleRecord, DiffConfig,
    DiffSource, Execution, MismatchKind, Outcome,
};
use understanding_sat::oracle::decide;
use understanding_sat::solver::solve;

#[test]
fn counterexamples_survive_json_and_replay() {
    let source = DiffSource::Specs(fuzz_specs(&[6, 7], &[4.27], 120, 2024));
    let report = diff_run(&source, &DiffConfig::default()).unwrap();
    assert_eq!(report.counts().values().sum::<usize>(), 120);
    for rec in &report.counterexamples {
        let json = serde_json::to_string(rec).unwrap();
        let back: CounterexampleRecord = serde_json::from_str(&json).unwrap();
        assert_eq!(&back, rec);
        assert!(back.minimized);
        assert_eq!(replay(&back, solve, 20).unwrap(), Some(back.kind));
    }
}

#[test]
fn jsonl_lines_name_their_class() {
    let report = diff_run(
        &DiffSource::Enumeration { max_n: 2, max_m: 2 },
        &DiffConfig {
            execution: Execution::Sequential,
            ..DiffConfig::default()
        },
    )
    .unwrap();
    let lines: Vec<serde_json::Value> = report
        .to_jsonl()
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect();
    assert_eq!(lines.len(), report.len());
    for (i, v) in lines.iter().enumerate() {
        assert_eq!(v["index"], i);
        let class: Outcome = serde_json::from_value(v["class"].clone()).unwrap();
        assert_eq!(class, report.entries[i].class);
    }
}

#[test]
fn enumerated_instances_agree_with_both_oracles() {
    for inst in enumerate_small(3, 2).unwrap() {
        assert_eq!(decide(&inst, 0).is_sat(), decide(&inst, 20).is_sat());
    }
}

#[test]
fn false_unsat_records_carry_a_model() {
    let source = DiffSource::Enumeration { max_n: 3, max_m: 4 };
    let report = diff_run(&source, &DiffConfig::default()).unwrap();
    for rec in report
        .counterexamples
        .iter()
        .filter(|r| r.kind == MismatchKind::FalseUnsat)
    {
        let inst = rec.instance().unwrap();
        let model = rec.oracle_verdict.model().expect("oracle found a model");
        assert!(understanding_sat::evaluate(&inst, model)
            .unwrap()
            .is_satisfied());
    }
}
