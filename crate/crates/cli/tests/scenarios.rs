use std::path::PathBuf;

use kantorovich_cli::{
    gen, load_instance, parse_instance, run_scenario, Arithmetic, Command, InputError, Instance, Options,
};
use serde_json::{json, Value};

fn instance(name: &str) -> Instance {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("instances").join(name);
    load_instance(&path).unwrap()
}

fn run(name: &str, command: Command) -> Value {
    let report = run_scenario(&instance(name), &command, &Options::default()).unwrap();
    assert!(report.ok, "{name}: {:#}", report.document);
    report.document
}

#[test]
fn every_shipped_instance_solves_cleanly() {
    for name in ["swap.json", "minimal.json", "oracle3x3.json", "line.json"] {
        run(name, Command::Solve);
        run(name, Command::Chain);
    }
}

#[test]
fn single_point_chain_is_the_cost() {
    let doc = run("minimal.json", Command::Chain);
    assert_eq!(doc["values"]["chain"], json!(["7/1", "7/1", "7/1", "7/1"]));
}

#[test]
fn swap_cost_separates_the_two_sides() {
    let doc = run("swap.json", Command::Chain);
    assert_eq!(doc["values"]["chain"], json!(["0/1", "0/1", "1/1", "1/1"]));
    assert_eq!(doc["values"]["monge_cost"], json!("1/1"));
}

#[test]
fn float_mode_reports_numbers() {
    let options = Options { mode: Some(Arithmetic::Float), ..Options::default() };
    let report = run_scenario(&instance("swap.json"), &Command::Chain, &options).unwrap();
    assert!(report.ok);
    let chain = report.document["values"]["chain"].as_array().unwrap().clone();
    let chain: Vec<f64> = chain.iter().map(|v| v.as_f64().unwrap()).collect();
    assert_eq!(chain, vec![0.0, 0.0, 1.0, 1.0]);
    assert_eq!(report.document["arithmetic"], json!("float"));
}

#[test]
fn point_masses_one_apart() {
    let doc = run("wasserstein.json", Command::Wasserstein);
    assert_eq!(doc["values"]["alpha"], json!("1/1"));
    assert_eq!(doc["values"]["beta"], json!("1/1"));
}

#[test]
fn oracle_agrees_exactly() {
    let doc = run("oracle3x3.json", Command::oracle_check());
    assert_eq!(doc["values"]["match"], json!("exact"));
}

#[test]
fn arveson_finds_the_null_cross() {
    let doc = run("arveson.json", Command::Arveson);
    assert_eq!(doc["values"]["outcome"], json!("null"));
    assert_eq!(doc["values"]["a"], json!([0]));
    assert_eq!(doc["values"]["b"], json!([2]));
    run("arveson.json", Command::Cover);
}

#[test]
fn line_instance_runs_every_remaining_verb() {
    run("line.json", Command::Extend);
    run("line.json", Command::Partition { eps: "1".into(), lipschitz: "1".into() });
    run("line.json", Command::Approx { params: vec!["1/2".into(), "1".into(), "2".into()] });
}

#[test]
fn reports_are_deterministic_without_timing() {
    let a = run("line.json", Command::Solve);
    let b = run("line.json", Command::Solve);
    assert_eq!(a, b);
    assert!(a.get("timing_ms").is_none());
}

#[test]
fn instances_round_trip_through_json() {
    for name in ["swap.json", "line.json", "arveson.json"] {
        let first = instance(name);
        let again = parse_instance(&first.to_json()).unwrap();
        assert_eq!(first, again);
        assert_eq!(first.to_json(), again.to_json());
    }
}

#[test]
fn weights_that_miss_one_are_rejected() {
    let text = r#"{"x": {"weights": ["1/2", "1/3"]}, "y": {"weights": ["1"]}}"#;
    assert!(matches!(parse_instance(text), Err(InputError::Validation(_))));
}

#[test]
fn cost_shape_must_match_the_spaces() {
    let text = r#"{"x": {"weights": ["1/2", "1/2"]}, "y": {"weights": ["1"]},
                  "cost": {"kind": "matrix", "rows": [["1"]]}}"#;
    assert!(matches!(parse_instance(text), Err(InputError::Validation(_))));
}

#[test]
fn syntax_errors_carry_a_position() {
    match parse_instance("{\n  \"x\": [,\n}") {
        Err(InputError::Parse { line, .. }) => assert_eq!(line, 2),
        other => panic!("expected a parse error, got {other:?}"),
    }
}

#[test]
fn unknown_fields_are_rejected() {
    let text = r#"{"x": {"weights": ["1"]}, "y": {"weights": ["1"]}, "extra": 1}"#;
    assert!(matches!(parse_instance(text), Err(InputError::Parse { .. })));
}

#[test]
fn generated_instances_are_reproducible_and_consistent() {
    let a = gen::generate(11, 3, 4).to_json();
    assert_eq!(a, gen::generate(11, 3, 4).to_json());
    assert_ne!(a, gen::generate(12, 3, 4).to_json());
    let inst = parse_instance(&a).unwrap();
    for command in [Command::Chain, Command::Cover, Command::Arveson, Command::Extend] {
        let report = run_scenario(&inst, &command, &Options::default()).unwrap();
        assert!(report.ok, "{:#}", report.document);
    }
}
