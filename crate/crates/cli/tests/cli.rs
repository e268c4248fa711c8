//! End-to-end tests of the command-line interface: subcommand payloads,
//! exit codes, output determinism, and the Gram file format.

use std::process::{Command, Output};

use serde_json::Value;

fn sdist(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sdist"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "stdout is not JSON: {e}\nstdout: {}\nstderr: {}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

fn exit_code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

#[test]
fn enumerate_reduced_set() {
    let out = sdist(&["enumerate", "--kind", "M", "--n", "3", "--s", "2"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["command"], "enumerate");
    assert_eq!(v["mode"], "exact");
    assert_eq!(v["result"]["count"], 6);
    let vectors: Vec<String> = v["result"]["vectors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_str().unwrap().to_string())
        .collect();
    assert_eq!(
        vectors,
        ["(0,0,0)", "(1,1,0)", "(1,0,1)", "(0,2,0)", "(0,1,1)", "(0,0,2)"]
    );
}

#[test]
fn bounds_table_contains_expected_values() {
    let out = sdist(&["bounds", "--n", "3", "--s", "2", "--table"]);
    assert_eq!(exit_code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("dgs"), "{text}");
    assert!(text.contains("9"), "{text}");
    assert!(text.contains("main"), "{text}");
    assert!(text.contains("6"), "{text}");
    assert!(text.contains("barg_musin"), "{text}");

    let json_out = sdist(&["bounds", "--n", "3", "--s", "2"]);
    let v = stdout_json(&json_out);
    let reports = v["result"].as_array().unwrap();
    let find = |id: &str| -> String {
        reports
            .iter()
            .find(|r| r["theorem"] == id)
            .unwrap_or_else(|| panic!("no {id} report"))["value"]
            .as_str()
            .unwrap()
            .to_string()
    };
    assert_eq!(find("dgs"), "9");
    assert_eq!(find("main"), "6");
    assert_eq!(find("barg_musin"), "11");
    assert_eq!(
        reports
            .iter()
            .find(|r| r["theorem"] == "conjecture")
            .unwrap()["status"],
        "conjectured"
    );
}

#[test]
fn bounds_from_profile() {
    let out = sdist(&["bounds", "--profile", "catalog:icosahedron_6lines"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    let reports = v["result"].as_array().unwrap();
    let ids: Vec<&str> = reports
        .iter()
        .map(|r| r["theorem"].as_str().unwrap())
        .collect();
    assert_eq!(ids, ["main", "musin", "conjecture", "dgs", "barg_musin"]);
    let values: Vec<&str> = reports
        .iter()
        .map(|r| r["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["6", "6", "6", "9", "11"]);
}

#[test]
fn certify_certified_exits_zero() {
    let out = sdist(&["certify", "--gram", "catalog:icosahedron_6lines"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["verdict"], "certified");
    assert_eq!(v["result"]["rank"], 6);
    assert_eq!(v["result"]["bound"], "6");
}

#[test]
fn certify_hypothesis_failure_exits_two() {
    let out = sdist(&["certify", "--gram", "catalog:cross_polytope(3)"]);
    assert_eq!(exit_code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["verdict"], "hypothesis_failed");
}

#[test]
fn certify_float_mode() {
    let out = sdist(&["certify", "--gram", "catalog:icosahedron_6lines", "--float"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["mode"], "float");
    assert_eq!(v["result"]["verdict"], "certified");
}

#[test]
fn verify_reports_profile() {
    let out = sdist(&["verify", "--gram", "catalog:hexagon_3lines"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["validation"]["valid"], true);
    assert_eq!(v["result"]["validation"]["rank"], 2);
    assert_eq!(v["result"]["profile"]["s"], 2);
    assert_eq!(v["result"]["profile"]["antipodal_type"][0], "1/2");
}

#[test]
fn verify_invalid_gram_exits_two() {
    let dir = std::env::temp_dir().join("sdist-cli-test-invalid");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("indefinite.json");
    // |cos| <= 1 forces this 2x2 to be indefinite.
    let text = r#"{"n": 2, "r": 2, "scalar_kind": "rational", "entries": ["1", "2", "2", "1"]}"#;
    std::fs::write(&path, text).unwrap();
    let out = sdist(&["verify", "--gram", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 2);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["validation"]["psd"], false);
}

#[test]
fn search_signed_basis() {
    let out = sdist(&["search", "--family", "signed_basis(3)", "--s", "2"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["size"], 3);
    assert_eq!(v["result"]["optimal"], true);

    let out = sdist(&[
        "search",
        "--family",
        "signed_basis(3)",
        "--s",
        "2",
        "--allow-antipodal",
    ]);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["size"], 6);
}

#[test]
fn catalog_lists_builtins() {
    let out = sdist(&["catalog"]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    let names: Vec<&str> = v["result"]["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"hexagon_3lines"));
    assert!(names.contains(&"icosahedron_6lines"));
}

#[test]
fn unknown_catalog_is_usage_error() {
    let out = sdist(&["certify", "--gram", "catalog:moebius"]);
    assert_eq!(exit_code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown catalog entry"));
}

#[test]
fn json_output_is_deterministic_modulo_timing() {
    let strip_timing = |out: &Output| -> String {
        String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|line| !line.contains("timing_ms"))
            .collect::<Vec<_>>()
            .join("\n")
    };
    let a = sdist(&[
        "search",
        "--family",
        "edge_midpoints_simplex(4)",
        "--s",
        "2",
    ]);
    let b = sdist(&[
        "search",
        "--family",
        "edge_midpoints_simplex(4)",
        "--s",
        "2",
    ]);
    assert_eq!(exit_code(&a), 0);
    assert_eq!(strip_timing(&a), strip_timing(&b));
}

#[test]
fn gram_file_round_trip_through_cli() {
    let dir = std::env::temp_dir().join("sdist-cli-test-roundtrip");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("icosa.json");
    let gram = sdist_core::config::builtin("icosahedron_6lines").unwrap();
    std::fs::write(&path, sdist_core::config::to_json(&gram)).unwrap();
    let out = sdist(&["certify", "--gram", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 0);
    let v = stdout_json(&out);
    assert_eq!(v["result"]["verdict"], "certified");
    assert_eq!(v["result"]["a_list"][0], "0+1/5*sqrt(5)");
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("sdist-cli-test-out");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bounds.json");
    let out = sdist(&[
        "bounds",
        "--n",
        "7",
        "--s",
        "2",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(exit_code(&out), 0);
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap();
    let reports = v["result"].as_array().unwrap();
    let main = reports.iter().find(|r| r["theorem"] == "main").unwrap();
    assert_eq!(main["value"], "28");
}

#[test]
fn conflicting_mode_flags_rejected() {
    let out = sdist(&["bounds", "--n", "3", "--s", "2", "--exact", "--float"]);
    assert_eq!(exit_code(&out), 1);
}

#[test]
fn ambiguous_float_profile_exits_three() {
    let dir = std::env::temp_dir().join("sdist-cli-test-ambiguous");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("ambiguous.json");
    // Off-diagonal values 5e-9 apart: distinct at the 1e-9 merge tolerance
    // but inside the 10x guard band, so profiling must refuse.
    let text = r#"{"n": 2, "r": 3, "scalar_kind": "float", "entries": [
        "~1", "~0.5", "~0.500000005",
        "~0.5", "~1", "~0.5",
        "~0.500000005", "~0.5", "~1"
    ]}"#;
    std::fs::write(&path, text).unwrap();
    let out = sdist(&["verify", "--gram", path.to_str().unwrap()]);
    assert_eq!(exit_code(&out), 3);
    assert!(String::from_utf8_lossy(&out.stderr).contains("ambiguous"));
}
