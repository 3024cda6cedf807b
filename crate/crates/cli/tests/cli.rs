use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../data"))
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_steenweb")).args(args).env("STEENWEB_DATA", dir).output().expect("binary runs")
}

fn run(args: &[&str]) -> Output {
    run_in(&data(), args)
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

fn file(rel: &str) -> String {
    data().join(rel).to_string_lossy().into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("steenweb-cli-{}-{name}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn reduce_examples() {
    let o = run(&["reduce", "Sq2 . Sq2"]);
    assert_eq!((o.status.code(), stdout(&o).as_str()), (Some(0), "Sq3 . Sq1"));
    assert_eq!(stdout(&run(&["reduce", "P1 . P1", "--prime", "3"])), "2 P2");
    assert_eq!(stdout(&run(&["reduce", "Sq4"])), "Sq4");
    let o = run(&["reduce", "Sq2 . Sq2", "--format", "json"]);
    assert_eq!(json(&o)["canonical"], "Sq3 . Sq1");
}

#[test]
fn reduce_parse_error_reports_position() {
    let o = run(&["reduce", "Sq2 . Qx"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("byte"));
    assert_eq!(run(&["reduce", "Sq1", "--prime", "4"]).status.code(), Some(2));
}

#[test]
fn ring_examples() {
    let o = run(&["ring", "minimal-period", "--file", &file("rings/cp6_z2.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["minimal_period"], 2);
    let o = run(&["ring", "classify", "--file", &file("rings/s3xhp2_q.json")]);
    assert_eq!(stdout(&o), "S3xHP");
    let o = run(&["ring", "validate", "--file", &file("rings/hp3_z3.json")]);
    assert_eq!(o.status.code(), Some(0));
    let o = run(&["ring", "gcd-check", "--file", &file("rings/cp9_q.json"), "--k", "6", "--format", "json"]);
    assert_eq!((o.status.code(), json(&o)["result"].clone()), (Some(0), Value::from("pass")));
    let o = run(&["ring", "bodd-check", "--file", &file("rings/hp3_q.json")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn corrupted_ring_fails_validation_with_witness() {
    let mut ring: Value = serde_json::from_str(&fs::read_to_string(file("rings/cp2_q.json")).unwrap()).unwrap();
    // x · x = 0 breaks Poincaré duality
    for entry in ring["products"].as_array_mut().unwrap() {
        if entry["i"] == 2 && entry["j"] == 2 {
            entry["coords"] = serde_json::json!(["0"]);
        }
    }
    let dir = scratch("corrupt");
    let path = dir.join("bad.json");
    fs::write(&path, serde_json::to_string(&ring).unwrap()).unwrap();
    let o = run(&["ring", "validate", "--file", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let report = json(&o);
    let failed: Vec<&Value> = report["checks"].as_array().unwrap().iter().filter(|c| c["passed"] == false).collect();
    assert!(!failed.is_empty() && !failed[0]["failures"].as_array().unwrap().is_empty());
    // other ring commands refuse the ring too
    assert_eq!(run(&["ring", "classify", "--file", path.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = scratch("schema");
    let path = dir.join("bad.json");
    fs::write(&path, "{\"n\": 2}").unwrap();
    assert_eq!(run(&["ring", "validate", "--file", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["ring", "validate", "--file", "/nonexistent.json"]).status.code(), Some(2));
    assert_eq!(run(&["web", "analyze", "--file", path.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", "no-such-suite"]).status.code(), Some(2));
}

#[test]
fn analyze_case3_instance() {
    let o = run(&["web", "analyze", "--file", &file("web/case3_n32_r10.json"), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["check"]["ok"], true);
    assert_eq!(v["result"]["leaf"]["kind"], "certificate");
    assert_eq!(v["result"]["leaf"]["case"], 3);
    let o = run(&["web", "analyze", "--file", &file("web/case2_n32_r10.json"), "--format", "json"]);
    assert_eq!(json(&o)["result"]["leaf"]["case"], 2);
}

#[test]
fn analyze_below_rank_bound_is_a_precondition_error() {
    let o = run(&["web", "analyze", "--file", &file("web/case3_pair_n16.json")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("precondition"));
    let o = run(&["web", "analyze", "--file", &file("web/case3_pair_n16.json"), "--relaxed"]);
    assert_eq!((o.status.code(), stdout(&o).starts_with("Case 3 certificate")), (Some(0), true));
}

#[test]
fn flagged_instances_exit_1() {
    let o = run(&["web", "analyze", "--file", &file("web/complete_gamma_n16.json"), "--relaxed", "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(json(&o)["result"]["leaf"]["kind"], "flagged");
}

#[test]
fn web_random_is_deterministic() {
    let args = ["web", "random", "--n", "16", "--r", "8", "--count", "100", "--seed", "7", "--format", "json"];
    let (a, b) = (run(&args), run(&args));
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["results"].as_array().unwrap().len(), 100);
    assert_eq!(v["certified"].as_u64().unwrap() + v["flagged"].as_u64().unwrap(), 100);
}

#[test]
fn verify_suites() {
    let o = run(&["verify", "hit-lemma", "--prime", "3", "--range", "200"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let o = run(&["verify", "adem-oracle", "--prime", "2", "--range", "12", "--format", "json"]);
    assert_eq!((o.status.code(), json(&o)["failed"].clone()), (Some(0), Value::from(0)));
    let o = run(&["verify", "power-of-two", "--seed", "1", "--count", "20"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["verify", "power-of-two"]).status.code(), Some(2));
    let o = run(&["verify", "web-exhaustive", "--range", "6"]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn data_dir_override_and_out_file() {
    let dir = scratch("data");
    fs::create_dir_all(dir.join("rings")).unwrap();
    for f in ["cp2_z2.json", "s4_z2.json"] {
        fs::copy(data().join("rings").join(f), dir.join("rings").join(f)).unwrap();
    }
    let out = dir.join("report.json");
    let o = run_in(&dir, &["verify", "power-of-two", "--seed", "1", "--count", "0", "--format", "json", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["checked"].as_u64().unwrap() + v["skipped"].as_u64().unwrap(), 2);
    assert_eq!(run_in(&dir.join("missing"), &["verify", "bodd"]).status.code(), Some(2));
}
