use std::path::PathBuf;

use clap::Parser;
use inertia_lab::cli::{execute, run, Cli};
use inertia_lab::report::{RunReport, SCHEMA};
use serde_json::Value;

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("inertia-lab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn report(args: &[&str]) -> RunReport {
    let cli = Cli::try_parse_from(std::iter::once("inertia-lab").chain(args.iter().copied())).unwrap();
    execute(&cli).0
}

fn without_timestamp(r: &RunReport) -> Value {
    let mut v = serde_json::to_value(r).unwrap();
    v.as_object_mut().unwrap().remove("timestamp");
    v
}

fn validate(r: &RunReport) {
    let schema: Value = serde_json::from_str(SCHEMA).unwrap();
    let compiled = jsonschema::JSONSchema::compile(&schema).unwrap();
    let instance = serde_json::to_value(r).unwrap();
    let msgs: Vec<String> = match compiled.validate(&instance) {
        Ok(()) => Vec::new(),
        Err(errors) => {
            errors.map(|e| format!("{:?} at {}", e.kind, e.instance_path).chars().take(300).collect()).collect()
        }
    };
    assert!(msgs.is_empty(), "schema violations: {msgs:?}");
}

#[test]
fn exit_codes() {
    assert_eq!(run(["inertia-lab", "gate", "--preset", "s3"]), 0);
    assert_eq!(run(["inertia-lab", "gate", "--preset", "nope"]), 2);
    assert_eq!(run(["inertia-lab", "frobnicate"]), 2);
    assert_eq!(run(["inertia-lab", "gate", "--preset", "s3", "--witness-range", "5..1"]), 2);
    let bad = scratch("syntax.txt");
    std::fs::write(&bad, "x^2 +").unwrap();
    assert_eq!(run(["inertia-lab", "gate", "--poly-file", bad.to_str().unwrap()]), 2);
    let nonmonic = scratch("nonmonic.txt");
    std::fs::write(&nonmonic, "2x^3 + t*x + 1").unwrap();
    assert_eq!(run(["inertia-lab", "gate", "--poly-file", nonmonic.to_str().unwrap()]), 1);
}

#[test]
fn non_monic_reports_the_gate_error() {
    let path = scratch("nonmonic2.txt");
    std::fs::write(&path, "2x^3 + t*x + 1").unwrap();
    let cli = Cli::try_parse_from(["inertia-lab", "gate", "--poly-file", path.to_str().unwrap()]).unwrap();
    let (r, _, failure) = execute(&cli);
    assert!(!r.passed);
    assert!(format!("{failure:?}").contains("not monic"));
}

#[test]
fn scan_a5_writes_five_certificates() {
    let path = scratch("a5.json");
    let code = run(["inertia-lab", "scan", "--preset", "a5", "--count", "5", "--json", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let r: RunReport = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r.certificates.len(), 5);
    assert!(r.certificates.iter().all(|c| c.all_certified));
    validate(&r);
    // load and dump again
    let again: RunReport = serde_json::from_str(&r.to_json()).unwrap();
    assert_eq!(again, r);
}

#[test]
fn reports_are_deterministic_and_valid() {
    for args in [
        vec!["gate", "--preset", "s3"],
        vec!["certify", "--preset", "a5", "--c", "-3"],
        vec!["galois", "--preset", "s3", "--c", "-1", "--prime-budget", "100"],
        vec!["scan", "--preset", "s3", "--count", "3", "--seed", "7"],
    ] {
        let (a, b) = (report(&args), report(&args));
        assert_eq!(without_timestamp(&a), without_timestamp(&b), "{args:?}");
        assert!(a.passed, "{args:?}");
        validate(&a);
    }
}

#[test]
fn reproduce_s3_passes() {
    let r = report(&["reproduce", "s3"]);
    assert!(r.passed);
    assert_eq!(r.verdicts.len(), 8);
    validate(&r);
}

#[test]
fn intersective_command() {
    let r = report(&["intersective", "--c", "-3", "--bound", "500"]);
    assert!(r.passed, "{:?}", r.verdicts);
    assert_eq!(r.intersective.as_ref().unwrap().m, 2);
    validate(&r);
}
