use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn quatclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quatclass")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> (Value, String, i32) {
    let mut full = vec!["--json", "--no-timing"];
    full.extend_from_slice(args);
    let out = quatclass(&full);
    let text = String::from_utf8(out.stdout).unwrap();
    let v: Value = serde_json::from_str(&text).unwrap_or_else(|e| panic!("{e}: {text}"));
    (v, text, out.status.code().unwrap())
}

fn corpus_file(name: &str, text: &str) -> std::path::PathBuf {
    let path = std::env::temp_dir().join(format!("quatclass-{}-{name}", std::process::id()));
    std::fs::File::create(&path).unwrap().write_all(text.as_bytes()).unwrap();
    path
}

#[test]
fn fibers_of_the_sqrt7_maximal_order() {
    let (v, _, code) = json(&["fibers", "field=7", "algebra=unramified"]);
    assert_eq!(code, 0);
    assert_eq!(v["total"], 3);
    assert_eq!(v["mass"], "1/3");
    assert_eq!(v["mass_sc"], "1/6");
    let phi: Vec<&Value> = v["phi_fibers"].as_object().unwrap().values().collect();
    assert!(!phi.is_empty() && phi.iter().all(|x| *x == phi[0]));
    assert_eq!(v["divisibility"]["h_f_divides"], true);
    assert_eq!(v["divisibility"]["h_plus_divides"], false);
    assert_eq!(v["divisibility"]["h_plus"], 2);
    for key in ["field", "algebra", "level", "psi_fibers", "assumptions", "provenance", "seed"] {
        assert!(v.get(key).is_some(), "missing {key}");
    }
    assert!(v.get("timing_ms").is_none());
}

#[test]
fn oracle_over_q_disc_eleven() {
    let (v, _, code) = json(&["oracle", "field=1", "algebra=ramified:11"]);
    assert_eq!(code, 0);
    assert_eq!(v["oracle"]["classes"], 2);
    assert_eq!(v["total"], 2);
}

#[test]
fn default_corpus_passes() {
    let out = quatclass(&["verify"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn json_is_stable_and_sorted() {
    let (_, a, _) = json(&["verify"]);
    let (v, b, _) = json(&["--jobs", "2", "verify"]);
    assert_eq!(a, b);
    assert_eq!(serde_json::to_string_pretty(&v).unwrap(), a.trim_end());
    let cases = v["cases"].as_array().unwrap();
    let idx: Vec<u64> = cases.iter().map(|c| c["index"].as_u64().unwrap()).collect();
    assert_eq!(idx, (0..cases.len() as u64).collect::<Vec<_>>());
    let with_timing = quatclass(&["--json", "classno", "field=2"]);
    let v: Value = serde_json::from_slice(&with_timing.stdout).unwrap();
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn parse_errors_exit_two_with_position() {
    let path = corpus_file("bad", "# header\nfield=7\nfield=7 level=3 nonsense\n");
    let out = quatclass(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains(":3:17:"), "{err}");
    let out = quatclass(&["classno", "field=4"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_expectation_exits_one() {
    let path = corpus_file("fail", "field=7 expect.total=3\nfield=7 expect.total=4\n");
    let out = quatclass(&["verify", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn unsupported_cases_do_not_abort() {
    let path = corpus_file("clash", "field=3 level=2\nfield=2\n");
    let (v, _, code) = json(&["verify", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(v["cases"][0]["status"], "unsupported");
    assert_eq!(v["cases"][1]["status"], "pass");
    assert_eq!(v["summary"]["unsupported"], 1);
}

#[test]
fn field_algebra_and_catalog() {
    let (v, _, _) = json(&["field", "7"]);
    assert_eq!(v["h"], 1);
    assert_eq!(v["h_plus"], 2);
    assert_eq!(v["zeta_minus_one"], "2/3");
    let (v, _, _) = json(&["algebra", "2", "(-1,1+s)"]);
    assert_eq!(v["totally_definite"], false);
    assert_eq!(v["eichler_condition"], true);
    let (v, _, _) = json(&["catalog", "1"]);
    let ws: Vec<u64> = v["orders"].as_array().unwrap().iter().map(|o| o["w"].as_u64().unwrap()).collect();
    assert_eq!(ws, vec![2, 3]);
}

#[test]
fn delta_base_is_validated() {
    let out = quatclass(&["--delta-base", "7", "classno", "field=7"]);
    assert_eq!(out.status.code(), Some(2));
    let (v, _, code) = json(&["--delta-base", "0", "classno", "field=7"]);
    assert_eq!(code, 0);
    assert_eq!(v["total"], 3);
}
