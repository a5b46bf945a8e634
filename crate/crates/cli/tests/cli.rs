use farey_cli::report::{parse_report, Format, Kind};
use farey_cli::{run_with, sidecar_path, EXIT_COMPUTE, EXIT_OK, EXIT_USAGE};
use std::process::Command;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("farey-index").chain(args.iter().copied());
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const MOMENT_SCHEMA: [(&str, Kind); 7] = [
    ("Q", Kind::Int),
    ("l", Kind::Int),
    ("k", Kind::Int),
    ("u", Kind::Int),
    ("bspec", Kind::Text),
    ("value", Kind::Exact),
    ("count", Kind::Int),
];

#[test]
fn farey_listing() {
    let (code, out, _) = run(&["farey", "--q", "5", "--format", "csv"]);
    assert_eq!(code, EXIT_OK);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "a,q,nu");
    assert_eq!(lines.len(), 11);
    assert_eq!(lines[1], "1,5,1");
    assert_eq!(lines[10], "1,1,10");
}

#[test]
fn moments_example() {
    let (code, out, _) = run(&["moments", "--q", "5", "--l", "1", "--bfree", "none", "--modulus", "1", "--residue", "1"]);
    assert_eq!(code, EXIT_OK);
    let t = parse_report(&out, Format::Csv, &MOMENT_SCHEMA).unwrap();
    assert_eq!(t.rows.len(), 1);
    assert_eq!(t.rows[0][5].to_string(), "29");
}

#[test]
fn moments_sweep_json_round_trip() {
    let (code, out, _) = run(&["moments", "--qs", "10,20,30,40,50", "--l", "2", "--bfree", "primes:2,5", "--modulus", "4", "--residue", "3", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let t = parse_report(&out, Format::Json, &MOMENT_SCHEMA).unwrap();
    assert_eq!(t.rows.len(), 5);
    let (_, csv, _) = run(&["moments", "--qs", "10,20,30,40,50", "--l", "2", "--bfree", "primes:2,5", "--modulus", "4", "--residue", "3"]);
    assert_eq!(csv.lines().count(), 6);
    assert_eq!(parse_report(&csv, Format::Csv, &MOMENT_SCHEMA).unwrap(), t);
}

#[test]
fn verify_identities() {
    let (code, out, _) = run(&["verify", "--suite", "identities", "--qmax", "200"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.lines().skip(1).all(|l| l.contains(",PASS,")), "{out}");
    let (code, out, _) = run(&["verify", "--suite", "geometry"]);
    assert_eq!(code, EXIT_OK, "{out}");
}

#[test]
fn usage_errors_name_the_flag() {
    let (code, _, err) = run(&["moments", "--q", "5", "--bogus", "1"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--bogus"), "{err}");
    let (code, _, err) = run(&["farey"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--q"), "{err}");
    let (code, _, err) = run(&["moments", "--q", "5", "--bfree", "primes:4"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--bfree"), "{err}");
    let (code, _, err) = run(&["corr", "--q", "5", "--h", "1", "--t", "3/2"]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("--t"), "{err}");
    assert_eq!(run(&["frobnicate"]).0, EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, EXIT_OK);
}

#[test]
fn computation_errors_exit_two() {
    let (code, _, err) = run(&["asympt", "--qs", "100", "--precision", "1e-30"]);
    assert_eq!(code, EXIT_COMPUTE, "{err}");
    let (code, _, err) = run(&["constant", "--h", "2,2"]);
    assert_eq!(code, EXIT_COMPUTE, "{err}");
}

#[test]
fn corr_and_constant() {
    let (code, out, _) = run(&["corr", "--q", "3", "--h", "1"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.lines().nth(1).unwrap(), "3,1,1,18,4,4.5");
    let (code, out, _) = run(&["constant", "--h", "1", "--c-policy", "remark", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v[0]["value"], "192/35");
    assert_eq!(v[0]["c_policy"], "remark");
}

#[test]
fn asympt_schema() {
    let (code, out, _) = run(&["asympt", "--qs", "200,400", "--theorem", "deficiency"]);
    assert_eq!(code, EXIT_OK);
    let schema = [
        ("q", Kind::Int),
        ("theorem", Kind::Text),
        ("empirical", Kind::Exact),
        ("main", Kind::Float),
        ("raw_error", Kind::Float),
        ("normalized_error", Kind::Float),
    ];
    let t = parse_report(&out, Format::Csv, &schema).unwrap();
    assert_eq!(t.rows.len(), 2);
}

#[test]
fn config_file_and_sidecar() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(&cfg, r#"{"q": 7, "l": 1, "format": "json"}"#).unwrap();
    let report = dir.path().join("out.json");
    let (code, _, err) = run(&["moments", "--config", cfg.to_str().unwrap(), "--q", "5", "--output", report.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK, "{err}");
    let text = std::fs::read_to_string(&report).unwrap();
    let t = parse_report(&text, Format::Json, &MOMENT_SCHEMA).unwrap();
    assert_eq!(t.rows[0][0].to_string(), "5");
    assert_eq!(t.rows[0][5].to_string(), "29");
    let meta: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(sidecar_path(&report)).unwrap()).unwrap();
    assert_eq!(meta["command"], "moments");

    // identical runs give byte-identical data files
    let again = dir.path().join("again.json");
    run(&["moments", "--config", cfg.to_str().unwrap(), "--q", "5", "--output", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&again).unwrap(), text.as_bytes());

    std::fs::write(&cfg, r#"{"unknown": 1}"#).unwrap();
    assert_eq!(run(&["farey", "--config", cfg.to_str().unwrap(), "--q", "3"]).0, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_farey-index");
    let ok = Command::new(bin).args(["farey", "--q", "4"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(String::from_utf8(ok.stdout).unwrap().lines().count(), 7);
    let usage = Command::new(bin).args(["farey", "--q", "x"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(1));
    let threads = Command::new(bin).env("FAREY_THREADS", "zero").args(["farey", "--q", "4"]).output().unwrap();
    assert_eq!(threads.status.code(), Some(1));
    let compute = Command::new(bin).args(["constant", "--h", "3,3"]).output().unwrap();
    assert_eq!(compute.status.code(), Some(2));
}
