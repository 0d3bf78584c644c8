//! The `tamekey` binary: exit codes, report shape, determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value as Json;

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios").join(name)
}

fn tamekey(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tamekey")).args(args).output().expect("binary runs")
}

fn report(out: &Output) -> Json {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON report")
}

fn without_timing(mut j: Json) -> Json {
    j.as_object_mut().unwrap().remove("timing_ms");
    j
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("tamekey-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn delta_on_the_worked_example() {
    let out = tamekey(&["delta", "--scenario", scenario("01_worked.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = report(&out);
    assert_eq!(j["subcommand"], "delta");
    assert_eq!(j["result"]["delta"], "2/3");
    assert_eq!(j["pass"], true);
    for a in j["assertions"].as_array().unwrap() {
        for key in ["id", "statement", "pass", "witness"] {
            assert!(a.get(key).is_some(), "row without {key}: {a}");
        }
    }
    assert!(j["timing_ms"].is_u64());
}

#[test]
fn keyseq_degrees_and_json_out() {
    let path = scratch("keyseq.json", "");
    let out = tamekey(&["keyseq", "--scenario", scenario("01_worked.toml").to_str().unwrap(), "--json-out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let j = report(&out);
    assert_eq!(j["result"]["sequence"]["degrees"], serde_json::json!([1, 2, 6]));
    let written: Json = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(written, j);
}

#[test]
fn every_subcommand_runs_on_the_worked_example() {
    for sub in ["roots", "delta", "kras", "keyseq", "keypolys", "icf"] {
        let out = tamekey(&[sub, "--scenario", scenario("01_worked.toml").to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0), "{sub}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn reports_repeat_apart_from_timing() {
    let path = scenario("04_f5_sixth.toml");
    let args = ["keyseq", "--scenario", path.to_str().unwrap(), "--seed", "9"];
    let a = without_timing(report(&tamekey(&args)));
    let b = without_timing(report(&tamekey(&args)));
    assert_eq!(a, b);
}

#[test]
fn classify_needs_an_extension() {
    let out = tamekey(&["classify", "--scenario", scenario("01_worked.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
}

#[test]
fn classify_value_transcendental() {
    let out = tamekey(&["classify", "--scenario", scenario("09_value_transcendental.toml").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(report(&out)["result"]["classification"].as_str().unwrap().starts_with("valuation transcendental"));
}

#[test]
fn input_errors_exit_one() {
    let missing = tamekey(&["delta", "--scenario", "/nonexistent/scenario.toml"]);
    assert_eq!(missing.status.code(), Some(1));

    let broken = scratch("broken.toml", "name = \"b\"\n[field]\nkind = \"rationals\"\n[element]\nkind = \"series\"\nseries = \"t^(1/2) + \"\n");
    let out = tamekey(&["delta", "--scenario", broken.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line 6"), "{err}");

    let unknown = scratch("unknown.toml", "name = \"u\"\ncolour = 3\n[field]\nkind = \"rationals\"\n");
    assert_eq!(tamekey(&["delta", "--scenario", unknown.to_str().unwrap()]).status.code(), Some(1));

    let bad = tamekey(&["delta", "--scenario", scenario("01_worked.toml").to_str().unwrap(), "--precision", "0"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn a_broken_key_polynomial_exits_two() {
    let src = std::fs::read_to_string(scenario("01_worked.toml")).unwrap() + "\n[mutate]\nq_index = 2\nconstant = \"-t^2\"\n";
    let p = scratch("mutated.toml", &src);
    let out = tamekey(&["keyseq", "--scenario", p.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let j = report(&out);
    let failed: Vec<&Json> = j["assertions"].as_array().unwrap().iter().filter(|a| a["pass"] == false).collect();
    assert!(failed.iter().any(|a| a["id"] == "unique-maximal-root"));
    assert!(failed.iter().all(|a| a["witness"].is_string()));
    assert!(String::from_utf8_lossy(&out.stderr).contains("FAIL unique-maximal-root"));
}

#[test]
fn verify_suite_over_the_corpus() {
    let out = tamekey(&["verify_suite"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = report(&out);
    assert_eq!(j["result"]["rows"], 108);
    assert_eq!(j["result"]["rows_per_scenario"], 9);
    let ids: Vec<&str> = j["assertions"].as_array().unwrap().iter().map(|a| a["id"].as_str().unwrap()).collect();
    assert!(ids.contains(&"worked/kras-equals-previous-delta"));
    assert!(ids.contains(&"valuation_algebraic/a3-stability"));

    // the same corpus from the directory
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("scenarios");
    let from_dir = tamekey(&["verify_suite", "--scenario", dir.to_str().unwrap()]);
    assert_eq!(without_timing(report(&from_dir)), without_timing(j));
}
