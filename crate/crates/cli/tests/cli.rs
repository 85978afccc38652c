use std::io::Write;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name].iter().collect();
    p.display().to_string()
}

fn sstkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sstkit")).args(args).output().unwrap()
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn seeded_count_is_infinite_with_witness() {
    let out = sstkit(&["valuedness", &fixture("tsc1.sst"), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let report = json_of(&out);
    assert_eq!(report["result"]["kind"], "Infinite");
    let div = &report["result"]["evidence"]["divergence"];
    assert_ne!(div["output_mark4"], div["output_mark2"]);
    assert_eq!(report["exit_code"], 1);
    assert_eq!(report["files"][0]["sha256"].as_str().unwrap().len(), 64);
}

#[test]
fn appender_is_finite() {
    let out = sstkit(&["valuedness", &fixture("id.sst")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("Finite"));
}

#[test]
fn unknown_verdict_exits_two() {
    let out = sstkit(&["valuedness", &fixture("tsc.sst"), "--component-len", "1", "--json"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["result"]["kind"], "Unknown");
}

#[test]
fn block_selector_lists_three_outputs() {
    let out = sstkit(&["eval", &fixture("r2.sst"), "--input", "001011", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let outs = json_of(&out)["result"]["outputs"].clone();
    assert_eq!(outs, serde_json::json!(["00", "10", "11"]));
}

#[test]
fn copying_update_is_rejected() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    writeln!(
        f,
        "alphabet: a\nvars: X\nstates: q\ninitial: q\nfinal q -> X\ntrans q a q {{ X := X X }}"
    )
    .unwrap();
    let out = sstkit(&["validate", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("copyless"));
}

#[test]
fn missing_file_and_bad_flag_exit_two() {
    assert_eq!(sstkit(&["validate", "/no/such/file.sst"]).status.code(), Some(2));
    assert_eq!(sstkit(&["validate", &fixture("id.sst"), "--bogus"]).status.code(), Some(2));
}

#[test]
fn equivalence_counterexample() {
    let out = sstkit(&["equiv", &fixture("tsc.sst"), &fixture("tsc1.sst"), "--max-len", "4", "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let r = json_of(&out);
    assert_eq!(r["result"]["result"], "counterexample");
    assert_eq!(r["result"]["input"], "0");
    let same = sstkit(&["equiv", &fixture("tsc.sst"), &fixture("tsc.sst"), "--max-len", "3"]);
    assert_eq!(same.status.code(), Some(0));
}

#[test]
fn ambiguity_verdicts() {
    assert_eq!(sstkit(&["ambiguity", &fixture("id.sst")]).status.code(), Some(0));
    let out = sstkit(&["ambiguity", &fixture("amb.sst"), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json_of(&out)["result"]["evidence"]["type"], "dumbbell");
}

#[test]
fn delay_and_decompose_tables() {
    let out = sstkit(&["delay", &fixture("tsc.sst"), "--input", "00", "--pair", "0", "4", "--C", "1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["report"]["cuts"], serde_json::json!([2]));
    let bad = sstkit(&["delay", &fixture("tsc.sst"), "--input", "00", "--pair", "0", "99"]);
    assert_eq!(bad.status.code(), Some(2));

    let out = sstkit(&["decompose", &fixture("r2.sst"), "--k", "4", "--max-len", "4", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["result"]["complete"], true);
}

#[test]
fn oracle_reads_two_values() {
    let out = sstkit(&["oracle", &fixture("tsc.sst"), "--json"]);
    assert_eq!(json_of(&out)["result"]["valuedness"]["max"], 2);
}

#[test]
fn reports_are_deterministic() {
    let strip = |out: Output| {
        let mut v = json_of(&out);
        v.as_object_mut().unwrap().remove("wall_time_s");
        serde_json::to_string(&v).unwrap()
    };
    for args in [
        vec!["valuedness", "tsc1.sst"],
        vec!["decompose", "tsc.sst"],
        vec!["runs", "r2.sst"],
    ] {
        let path = fixture(args[1]);
        let mut full = vec![args[0], path.as_str(), "--json", "--seed", "7"];
        if args[0] == "runs" {
            full.extend(["--input", "0110"]);
        }
        let a = strip(sstkit(&full));
        let b = strip(sstkit(&full));
        assert_eq!(a, b);
        assert!(a.contains("\"seed\":7"));
    }
}
