use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn scenario(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenarios", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn bdiv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bdiv")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = bdiv(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid json")
}

fn code(args: &[&str]) -> i32 {
    bdiv(args).status.code().expect("exit code")
}

#[test]
fn repro_appendix_summary() {
    let j = json(&["repro-appendix", "--kmax", "5"]);
    let s = &j["summary"];
    assert_eq!(s["degree_limit"], "3/1");
    assert_eq!(s["ratio [eq:vol-b (with d!)]"], "3/1");
    assert_eq!(s["ratio [appendix (without d!)]"], "3/1");
    assert_eq!(s["volume [appendix (without d!)]"], "1/2");
    assert_eq!(s["appendix_stated_limit_volume"], "3/2");
    assert_eq!(j["levels"][5]["degree"], "97/32");
    assert_eq!(j["levels"].as_array().unwrap().len(), 6);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["repro-appendix", "--kmax", "4", "--format", "csv"],
        vec!["toric-hs", "--d", "2", "--c", "1", "--ideal", "2,0;0,1", "--kmax", "16"],
    ] {
        assert_eq!(bdiv(&args).stdout, bdiv(&args).stdout, "{args:?}");
    }
}

#[test]
fn csv_and_table_formats() {
    let out = bdiv(&["repro-appendix", "--kmax", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("section,levels\nk,degree,degree_decimal,nef,"), "{text}");
    assert!(text.contains("2,13/4,3.250000,certified"), "{text}");
    let out = bdiv(&["repro-appendix", "--kmax", "2", "--format", "table"]);
    assert!(String::from_utf8(out.stdout).unwrap().contains("13/4 (~3.250000)"));
}

#[test]
fn output_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("r.json");
    let p = path.to_str().unwrap();
    assert_eq!(code(&["repro-appendix", "--kmax", "2", "--output", p]), 0);
    let j: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(j["command"], "repro-appendix");
}

#[test]
fn scenario_commands() {
    let s = scenario("step1_chain.json");
    let j = json(&["--scenario", &s, "intersect", "D", "E3"]);
    assert_eq!(j["summary"]["value"], "1/3");
    let j = json(&["--scenario", &s, "intersect", "D", "D"]);
    assert_eq!(j["summary"]["value"], "11/3");
    let j = json(&["--scenario", &s, "intersect", "E1", "E2"]);
    assert_eq!(j["summary"]["value"], "1/1");

    let s = scenario("blowup_pair.json");
    let j = json(&["--scenario", &s, "zariski", "--divisor", "with_line"]);
    assert_eq!(j["summary"]["positive_square"], "4/1");
    assert_eq!(j["negative_part"].as_array().unwrap().len(), 2);
    let j = json(&["--scenario", &s, "volume", "--divisor", "big"]);
    assert_eq!(j["summary"]["volume [appendix (without d!)]"], "2/1");
    let j = json(&["--scenario", &s, "tower"]);
    assert_eq!(j["models"].as_array().unwrap().len(), 3);
}

#[test]
fn appendix_scenario_bdeg_and_nef() {
    let s = scenario("appendix.json");
    let j = json(&["--scenario", &s, "bdeg", "--line", "L"]);
    assert_eq!(j["summary"]["exact_limit"], "3/1");
    assert_eq!(j["summary"]["volume [eq:vol-b (with d!)]"], "1/1");
    let j = json(&["--scenario", &s, "nef", "--divisor", "Dp_4", "--line", "L"]);
    assert_eq!(j["summary"]["status"], "certified");
    let j = json(&["--scenario", &s, "nef", "--divisor=-1H", "--line", "L"]);
    assert_eq!(j["summary"]["status"], "refuted");
}

#[test]
fn toric_commands() {
    let s = scenario("toric_maximal.json");
    let j = json(&["--scenario", &s, "toric-cw"]);
    assert_eq!(j["summary"]["bdeg"], "27/4");
    assert_eq!(j["summary"]["eqalg"], "27/4");
    assert_eq!(j["summary"]["hs_est"], "27/4");
    let j = json(&["toric-cw", "--d", "2", "--c", "0", "--ideal", "1,0;0,1", "--kmax", "8"]);
    assert_eq!(j["summary"]["bdeg"], "4/1");
    let j = json(&["toric-hs", "--d", "2", "--c", "1", "--ideal", "1,0;0,1", "--kmax", "10"]);
    assert_eq!(j["summary"]["target"], "3/1");
}

#[test]
fn exit_codes() {
    // malformed input
    assert_eq!(code(&["tower"]), 2);
    assert_eq!(code(&["--scenario", "/nonexistent.json", "tower"]), 2);
    assert_eq!(code(&["toric-hs", "--d", "2", "--c", "x", "--ideal", "1,0"]), 2);
    assert_eq!(code(&["--scenario", &scenario("step1_chain.json"), "intersect", "D", "nope"]), 2);
    assert_eq!(code(&["repro-appendix", "--kmax", "40"]), 2);
    // budget
    assert_eq!(code(&["toric-hs", "--d", "2", "--c", "1", "--ideal", "1,0;0,1", "--budget", "10"]), 3);
    // reduction refused: the tower never adds exceptionals over the line
    assert_eq!(code(&["--scenario", &scenario("blowup_pair.json"), "bdeg", "--bdiv", "flat", "--line", "L"]), 4);
    // level beyond the generated range
    assert_eq!(code(&["--scenario", &scenario("appendix.json"), "bdeg", "--kmax", "9"]), 2);
}
