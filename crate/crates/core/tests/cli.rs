use std::path::PathBuf;
use std::process::{Command, Output};

fn rdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rdiv")).args(args).output().unwrap()
}

fn scratch(name: &str) -> String {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("cli");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name).to_string_lossy().into_owned()
}

fn json(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn divide_then_validate() {
    let graph = scratch("grid32.gr");
    let div = scratch("grid32.json");
    assert!(rdiv(&["gen", "--grid", "32x32", "--weights", "1..9", "--seed", "4", "--output", &graph]).status.success());
    let out = rdiv(&["divide", "--input", &graph, "--r", "64", "--gamma", "0.5", "--output", &div]);
    assert_eq!(out.status.code(), Some(0));
    let out = rdiv(&["validate", "--input", &graph, "--division", &div, "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = json(&out);
    assert_eq!(report["validation"]["passed"], true);
    assert_eq!(report["tool"], "rdiv");
    assert_eq!(report["config"]["subcommand"], "validate");
}

#[test]
fn validate_rejects_a_tampered_division() {
    let div = scratch("tampered.json");
    let out = rdiv(&["divide", "--grid", "12x12", "--r", "20", "--no-timestamp"]);
    let mut report = json(&out);
    let regions = report["division"]["regions"].as_array_mut().unwrap();
    regions.pop();
    std::fs::write(&div, serde_json::to_vec(&report).unwrap()).unwrap();
    let out = rdiv(&["validate", "--grid", "12x12", "--division", &div]);
    assert_eq!(out.status.code(), Some(1));
    let clauses = json(&out)["validation"]["clauses"].clone();
    let partition = clauses.as_array().unwrap().iter().find(|c| c["name"] == "edge_partition").unwrap();
    assert_eq!(partition["passed"], false);
}

#[test]
fn negative_cycle_exits_one_with_witness() {
    let graph = scratch("cycle.gr");
    std::fs::write(&graph, "p sp 3 3\na 1 2 1\na 2 3 1\na 3 1 -5\n").unwrap();
    let out = rdiv(&["sssp", "--input", &graph, "--sources", "0,1,2"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json(&out);
    assert_eq!(report["negative_cycle"]["total_weight"], -3);
    assert_eq!(report["witness_verified"], true);
}

#[test]
fn sssp_reports_inf_for_unreachable() {
    let graph = scratch("split.gr");
    std::fs::write(&graph, "p sp 4 2\na 1 2 -3\na 3 4 2\n").unwrap();
    let out = rdiv(&["sssp", "--input", &graph, "--sources", "0,2", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let report = json(&out);
    assert_eq!(report["trees"][0]["dist"]["1"], -3);
    assert_eq!(report["trees"][0]["dist"]["3"], "inf");
    assert_eq!(report["trees"][1]["dist"]["3"], 2);
    assert_eq!(report["potential_origin"], "virtual");
}

#[test]
fn malformed_input_exits_three() {
    let graph = scratch("bad.gr");
    std::fs::write(&graph, "p sp 2 1\na 1 3 4\n").unwrap();
    let out = rdiv(&["sssp", "--input", &graph, "--sources", "0"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}

#[test]
fn timestamp_only_without_flag() {
    let with = json(&rdiv(&["separate", "--grid", "5x5"]));
    let without = json(&rdiv(&["separate", "--grid", "5x5", "--no-timestamp"]));
    assert!(with.get("timestamp").is_some());
    assert!(without.get("timestamp").is_none());
    assert_eq!(with["separation"], without["separation"]);
}

#[test]
fn bench_csv_has_header_and_rows() {
    let out = rdiv(&["bench-schedules", "--grid", "24x24", "--r", "40", "--format", "csv", "--no-timestamp"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# {"));
    assert!(lines.next().unwrap().starts_with("schedule,phase,depth,region_size,gamma_prime,cost_units"));
    assert!(lines.any(|l| l.starts_with("adaptive,weak,")));
}

#[test]
fn help_and_usage_codes() {
    assert_eq!(rdiv(&["--help"]).status.code(), Some(0));
    assert_eq!(rdiv(&["divide", "--grid", "4x4", "--r", "8", "--schedule", "sometimes"]).status.code(), Some(2));
    assert_eq!(rdiv(&["separate", "--grid", "8x8", "--separator", "brute"]).status.code(), Some(2));
}
