use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cylbench(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cylbench")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = cylbench(args);
    let v = serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{args:?}: {e}: {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_owned()
}

#[test]
fn alpha_of_c5_from_dimacs_has_sixteen_atoms() {
    let dir = tempfile::tempdir().unwrap();
    let c5 = write(dir.path(), "c5.col", "c five-cycle\np edge 5 5\ne 1 2\ne 2 3\ne 3 4\ne 4 5\ne 5 1\n");
    let (code, v) = report(&["build", "alpha", "--graph", &c5]);
    assert_eq!(code, 0);
    assert_eq!(v["status"], "done");
    assert_eq!(v["result"]["atoms"], 16);
    assert_eq!(v["schema_version"], 1);
}

#[test]
fn eta_of_k3_counts_atoms() {
    let (code, v) = report(&["build", "eta", "--graph", "K3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["atoms"], 676);
}

fn corrupted_k3(dir: &Path) -> String {
    let (_, v) = report(&["build", "alpha", "--graph", "K3"]);
    let mut s = v["result"]["structure"].clone();
    let conv = s["converse"].as_array_mut().unwrap();
    conv.swap(1, 2);
    write(dir, "bad.json", &s.to_string())
}

#[test]
fn corrupted_converse_fails_ra_check() {
    let dir = tempfile::tempdir().unwrap();
    let bad = corrupted_k3(dir.path());
    let (code, v) = report(&["check", "ra", "--input", &bad]);
    assert_eq!(code, 1);
    assert_eq!(v["status"], "fail");
}

#[test]
fn matn_refuses_a_non_ra_input() {
    let dir = tempfile::tempdir().unwrap();
    let bad = corrupted_k3(dir.path());
    let (code, v) = report(&["build", "matn", "--input", &bad]);
    assert_eq!(code, 1);
    assert!(v["result"]["error"].is_string());
}

#[test]
fn mat3_of_c5_satisfies_ca3() {
    let (code, v) = report(&["check", "ca", "--graph", "C5", "--trials", "500"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["status"], "pass");
}

#[test]
fn eta_of_c5_passes_lemma2() {
    let (code, _) = report(&["check", "lemma2", "--graph", "C5"]);
    assert_eq!(code, 0);
}

#[test]
fn pigeonhole_wins_smooth_with_seven_nodes() {
    let (code, v) = report(&["game", "--preset", "smooth(3)", "--forall", "pigeonhole", "--nodes", "7", "--rounds", "12"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "forall");
    assert_eq!(v["result"]["certificate_verified"], true);
}

#[test]
fn exists_survives_two_rounds_of_gk_on_mat3() {
    let (code, v) = report(&["game", "--game", "gk", "--graph", "K2", "--nodes", "4", "--rounds", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["verdict"], "exists");
}

#[test]
fn zero_rounds_has_no_verdict() {
    let (code, v) = report(&["game", "--rounds", "0"]);
    assert_eq!(code, 0);
    assert!(v["result"]["verdict"].is_null());
}

#[test]
fn exhausted_budget_exits_three() {
    let (code, v) = report(&["game", "--game", "gk", "--graph", "K2", "--nodes", "4", "--rounds", "2", "--budget", "10"]);
    assert_eq!(code, 3);
    assert_eq!(v["status"], "exhausted");
}

#[test]
fn bad_usage_exits_two() {
    assert_eq!(cylbench(&["check", "nonsense"]).status.code(), Some(2));
    assert_eq!(cylbench(&["build", "alpha", "--graph", "no-such-graph"]).status.code(), Some(2));
}

#[test]
fn search_on_k3_finds_a_basis() {
    let (code, v) = report(&["search", "--graph", "K3"]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["outcome"], "found");
    assert!(v["result"]["hyperbasis"]["amalgamation_gap"].is_null());
    assert_eq!(v["status"], "pass");
    assert_eq!(v["result"]["cylindric_basis"], true);
}

#[test]
fn search_below_the_atom_count_finds_nothing() {
    let (code, v) = report(&["search", "--graph", "K3", "--size", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["outcome"], "none-within-bounds");
}

#[test]
fn sampled_graph_meets_its_bounds() {
    let (code, v) = report(&["sample-graph", "--girth", "4", "--chi", "3", "--seed", "11"]);
    assert_eq!(code, 0);
    assert!(v["result"]["girth"].is_null() || v["result"]["girth"].as_u64().unwrap() >= 4);
    assert!(v["result"]["chi"].as_u64().unwrap() >= 3);
}

#[test]
fn dimacs_output_round_trips_through_build() {
    let dir = tempfile::tempdir().unwrap();
    let out = cylbench(&["sample-graph", "--format", "dimacs", "--seed", "3"]);
    assert!(out.status.success());
    let path = write(dir.path(), "g.col", &String::from_utf8(out.stdout).unwrap());
    let (code, _) = report(&["build", "alpha", "--graph", &path]);
    assert_eq!(code, 0);
}

#[test]
fn out_flag_writes_the_report_and_report_aggregates() {
    let dir = tempfile::tempdir().unwrap();
    let pass = dir.path().join("pass.json");
    let fail = dir.path().join("fail.json");
    let bad = corrupted_k3(dir.path());
    assert!(cylbench(&["check", "ra", "--graph", "K2", "--out", pass.to_str().unwrap()]).status.success());
    assert_eq!(cylbench(&["check", "ra", "--input", &bad, "--out", fail.to_str().unwrap()]).status.code(), Some(1));

    let (code, v) = report(&["report", pass.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["result"]["reports"][0]["command"], "check");

    let (code, v) = report(&["report", pass.to_str().unwrap(), fail.to_str().unwrap()]);
    assert_eq!(code, 1);
    assert_eq!(v["result"]["reports"][1]["status"], "fail");
}

#[test]
fn rainbow_dot_lists_every_atom() {
    let out = cylbench(&["build", "rainbow", "--preset", "mini", "--format", "dot"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let (_, v) = report(&["build", "rainbow", "--preset", "mini"]);
    assert_eq!(text.matches("graph coloured {").count() as u64, v["result"]["atoms"].as_u64().unwrap());
}

#[test]
fn square_check_agrees_with_the_builder() {
    let (_, v) = report(&["check", "square", "--graph", "K2", "--stages", "1"]);
    assert_eq!(v["result"]["square_matches_unresolved"], true);
    assert_eq!(v["result"]["unmet_by_stage"][0], 0);
}
